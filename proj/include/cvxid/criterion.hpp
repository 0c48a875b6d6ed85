#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cvxid/dataset.hpp"
#include "cvxid/losses.hpp"

namespace cvxid {

enum class StepRule { BacktrackingGradient, PolyakSubgradient };

struct BatchSolverConfig {
  int max_iters = 10000;
  double tol = 1e-8;
  // Defaults by smoothness: backtracking gradient descent for smooth losses,
  // Polyak-style subgradient steps for losses with a kink.
  std::optional<StepRule> step_rule;
  bool averaging = true;  // tail-average the subgradient iterates
};

struct BatchFit {
  std::vector<double> theta;
  double risk = 0.0;
  int iters = 0;
  bool converged = false;
};

// R_N(theta) = (1/N) sum_k Phi(y_{k+1} - theta^T x_k)
double empirical_risk(const Dataset& data, const LossSpec& spec,
                      std::span<const double> theta);

// -(1/N) sum_k x_k phi(y_{k+1} - theta^T x_k); a subgradient of R_N.
std::vector<double> empirical_risk_subgradient(const Dataset& data,
                                               const LossSpec& spec,
                                               std::span<const double> theta);

// Minimizes R_N from theta = 0. Smooth losses stop once the gradient norm is
// below tol * (1 + ||theta||); nonsmooth losses run the full iteration budget
// with best-risk tracking (subgradient norms do not vanish at kinks).
BatchFit fit_batch(const Dataset& data, const LossSpec& spec,
                   const BatchSolverConfig& cfg = {});

}  // namespace cvxid
