#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "cvxid/dataset.hpp"

namespace cvxid {

struct UniformIID {
  double low = -0.5;
  double high = 0.5;
};

struct GaussianIID {
  double mean = 0.0;
  double var = 1.0;
};

struct NoNoise {};

using InputModel = std::variant<UniformIID, GaussianIID>;
using NoiseModel = std::variant<GaussianIID, NoNoise>;

// Second-order ARX generator: A(q^-1) y_k = B(q^-1) u_k + w_k with
// A = 1 + a1 q^-1 + a2 q^-2 and B = b1 q^-1 + b2 q^-2, zero initial
// conditions, burn_in leading samples discarded.
struct ArxConfig {
  std::array<double, 2> a{-1.5, 0.7};
  std::array<double, 2> b{1.0, 0.5};
  InputModel input = UniformIID{};
  NoiseModel noise = GaussianIID{0.0, 0.1};
  std::int64_t n_samples = 2000;  // samples kept after burn-in
  std::uint64_t seed = 0;
  std::int64_t burn_in = 200;

  std::vector<double> theta_star() const;  // [-a1, -a2, b1, b2]
  // AR stability: both roots of z^2 + a1 z + a2 inside the unit circle.
  void validate() const;
};

struct RawTrace {
  std::vector<double> u;
  std::vector<double> y;
};

RawTrace simulate_arx(const ArxConfig& cfg);

// Deterministic variant driven by explicit input/noise sequences; no burn-in.
RawTrace simulate_arx_driven(std::span<const double, 2> a,
                             std::span<const double, 2> b,
                             std::span<const double> u,
                             std::span<const double> w);

// Row k of the result pairs x_k = [-y_k, -y_{k-1}, u_k, u_{k-1}] with y_{k+1},
// so y_{k+1} = theta*^T x_k holds identically on noiseless traces.
Dataset build_regressors(const RawTrace& raw);

// Debug CSV "k,u,y".
std::string raw_trace_to_csv(const RawTrace& raw);

// Leverage-point contamination: rows M, 2M, ... (M = round(1/fraction)) are
// replaced by (X^T y / (alpha * n), mean(y)) computed over the whole sample.
struct OutlierConfig {
  double fraction = 0.01;
  double alpha = 15.0;
  std::int64_t n = 20;
};

Dataset inject_outliers(const Dataset& data, const OutlierConfig& ocfg);

}  // namespace cvxid
