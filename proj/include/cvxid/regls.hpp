#pragma once

#include <vector>

#include "cvxid/dataset.hpp"

namespace cvxid {

enum class KernelKind { TC, DC, SS, Identity };

KernelKind kernel_kind_from_string(const std::string& text);
std::string kernel_kind_to_string(KernelKind kind);

struct KernelHyper {
  double c = 1.0;      // scale, > 0
  double decay = 0.8;  // in (0, 1)
  double corr = 0.5;   // DC only, in (-1, 1)
};

struct ReglsConfig {
  KernelKind kernel = KernelKind::TC;
  KernelHyper hyper;
  double reg_lambda = 1.0;
  std::vector<int> block_sizes{2, 2};  // one block per ARX polynomial
};

// Block-diagonal kernel matrix over block_sizes (d x d, row-major),
// symmetrized and PSD-validated. Within a block, entries over i, j = 1..m:
//   TC        c * decay^max(i,j)
//   DC        c * decay^((i+j)/2) * corr^|i-j|
//   SS        c * (decay^(i+j+max(i,j)) / 2 - decay^(3 max(i,j)) / 6)
//   Identity  I
std::vector<double> kernel_matrix(KernelKind kind, const KernelHyper& hyper,
                                  const std::vector<int>& block_sizes);

struct ReglsFit {
  std::vector<double> theta;
  bool jittered = false;  // P needed a +1e-10 I bump before inversion
};

// Minimizer of (1/N) sum (y - theta^T x)^2 + lambda theta^T P^-1 theta via
// the stationarity system (X^T X + N lambda P^-1) theta = X^T y.
ReglsFit regls_fit(const Dataset& data, const ReglsConfig& cfg);

struct HyperGrid {
  std::vector<double> c{1.0};
  std::vector<double> decay{0.8};
  std::vector<double> corr{0.5};  // DC only
  std::vector<double> reg_lambda{1.0};
  double holdout_fraction = 0.2;
};

struct TuneResult {
  ReglsConfig config;
  double holdout_mse = 0.0;
};

// Time-ordered holdout grid search: first rows fit, last rows score; returns
// the grid point with the smallest one-step prediction MSE, ties broken by
// grid order (c, decay, corr, reg_lambda nested in that order).
TuneResult tune_hyperparameters(const Dataset& data, KernelKind kind,
                                const HyperGrid& grid,
                                const std::vector<int>& block_sizes = {2, 2});

}  // namespace cvxid
