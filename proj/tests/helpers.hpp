#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "cvxid/criterion.hpp"
#include "cvxid/dataset.hpp"
#include "cvxid/losses.hpp"
#include "cvxid/rng.hpp"

namespace testutil {

// Dataset with constant scalar regressor 1 and the given responses; fits
// reduce to location estimation (mean / median / quantile).
inline cvxid::Dataset scalar_dataset(const std::vector<double>& ys) {
  cvxid::Dataset data(1);
  for (double y : ys) {
    const double x[1] = {1.0};
    data.push_row(x, y);
  }
  return data;
}

inline cvxid::Dataset random_dataset(cvxid::Rng& rng, int d, std::int64_t n,
                                     double x_range = 2.0, double y_range = 4.0) {
  cvxid::Dataset data(d);
  std::vector<double> x(d);
  for (std::int64_t k = 0; k < n; ++k) {
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(-x_range, x_range);
    data.push_row(x, rng.uniform(-y_range, y_range));
  }
  return data;
}

// Centered finite-difference gradient of the empirical risk; the independent
// oracle for analytic gradients.
inline std::vector<double> fd_risk_gradient(const cvxid::Dataset& data,
                                            const cvxid::LossSpec& spec,
                                            std::span<const double> theta,
                                            double h = 1e-6) {
  std::vector<double> grad(theta.size());
  std::vector<double> probe(theta.begin(), theta.end());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = cvxid::empirical_risk(data, spec, probe);
    probe[i] = theta[i] - h;
    const double down = cvxid::empirical_risk(data, spec, probe);
    probe[i] = theta[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Exhaustive grid minimizer of the empirical risk over [lo, hi]^d (d <= 2),
// ties broken toward the lexicographically smallest point. Risks within a few
// ulps count as ties, so flat plateaus keep the smallest grid point instead of
// whichever rounding dips lowest.
struct GridMin {
  std::vector<double> theta;
  double risk;
};

inline GridMin grid_minimize(const cvxid::Dataset& data, const cvxid::LossSpec& spec,
                             double lo, double hi, double step) {
  const int d = data.dim();
  GridMin best{std::vector<double>(d, lo), 0.0};
  best.risk = cvxid::empirical_risk(data, spec, best.theta);
  const std::int64_t steps = std::llround((hi - lo) / step);
  std::vector<double> theta(d);
  auto consider = [&] {
    const double risk = cvxid::empirical_risk(data, spec, theta);
    if (risk < best.risk - 1e-12 * (1.0 + std::abs(best.risk))) best = {theta, risk};
  };
  if (d == 1) {
    for (std::int64_t i = 0; i <= steps; ++i) {
      theta[0] = lo + static_cast<double>(i) * step;
      consider();
    }
  } else {
    for (std::int64_t i = 0; i <= steps; ++i) {
      theta[0] = lo + static_cast<double>(i) * step;
      for (std::int64_t j = 0; j <= steps; ++j) {
        theta[1] = lo + static_cast<double>(j) * step;
        consider();
      }
    }
  }
  return best;
}

inline double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace testutil
