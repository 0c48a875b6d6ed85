#include "cvxid/criterion.hpp"

#include <cmath>

#include "cvxid/errors.hpp"

namespace cvxid {

namespace {

void check_dims(const Dataset& data, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != data.dim()) {
    throw ArgumentError("theta length does not match dataset dimension");
  }
  if (data.empty()) throw ArgumentError("dataset is empty");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

BatchFit fit_backtracking_gradient(const Dataset& data, const LossSpec& spec,
                                   const BatchSolverConfig& cfg) {
  const int d = data.dim();
  std::vector<double> theta(d, 0.0);
  std::vector<double> candidate(d, 0.0);
  double risk = empirical_risk(data, spec, theta);
  double step = 1.0;
  BatchFit fit;

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const auto grad = empirical_risk_subgradient(data, spec, theta);
    const double gnorm = norm(grad);
    if (gnorm <= cfg.tol * (1.0 + norm(theta))) {
      fit.converged = true;
      break;
    }
    // Armijo backtracking, with the accepted step carried over (doubled) as
    // the next trial step.
    step = std::min(step * 2.0, 1e12);
    bool accepted = false;
    for (int halving = 0; halving < 80; ++halving) {
      for (int i = 0; i < d; ++i) candidate[i] = theta[i] - step * grad[i];
      const double trial = empirical_risk(data, spec, candidate);
      if (trial <= risk - 1e-4 * step * gnorm * gnorm) {
        theta.swap(candidate);
        risk = trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow: cannot make progress
  }

  fit.theta = std::move(theta);
  fit.risk = risk;
  fit.iters = iter;
  return fit;
}

BatchFit fit_polyak_subgradient(const Dataset& data, const LossSpec& spec,
                                const BatchSolverConfig& cfg) {
  const int d = data.dim();
  std::vector<double> theta(d, 0.0);
  std::vector<double> best = theta;
  std::vector<double> avg(d, 0.0);
  double risk = empirical_risk(data, spec, theta);
  double best_risk = risk;
  // Polyak step with estimated optimum f_best - delta_k; delta_k -> 0 with
  // divergent sum, so best_risk approaches the minimum.
  const double delta0 = 0.1 * (1.0 + std::abs(risk));
  const int avg_from = cfg.max_iters / 2;
  std::int64_t avg_count = 0;

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const auto grad = empirical_risk_subgradient(data, spec, theta);
    const double gsq = dot(grad, grad);
    if (gsq < 1e-300) break;  // exact stationary point of the selection
    const double delta = delta0 / static_cast<double>(iter + 1);
    const double step = (risk - best_risk + delta) / gsq;
    for (int i = 0; i < d; ++i) theta[i] -= step * grad[i];
    risk = empirical_risk(data, spec, theta);
    if (risk < best_risk) {
      best_risk = risk;
      best = theta;
    }
    if (cfg.averaging && iter >= avg_from) {
      ++avg_count;
      for (int i = 0; i < d; ++i) avg[i] += (theta[i] - avg[i]) / avg_count;
    }
  }

  BatchFit fit;
  fit.iters = iter;
  if (avg_count > 0) {
    const double avg_risk = empirical_risk(data, spec, avg);
    fit.converged = avg_risk - best_risk <= cfg.tol * (1.0 + std::abs(best_risk));
    if (avg_risk <= best_risk) {
      fit.theta = std::move(avg);
      fit.risk = avg_risk;
      return fit;
    }
  }
  fit.theta = std::move(best);
  fit.risk = best_risk;
  return fit;
}

}  // namespace

double empirical_risk(const Dataset& data, const LossSpec& spec,
                      std::span<const double> theta) {
  check_dims(data, theta);
  const std::int64_t n = data.rows();
  double sum = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    sum += loss_value(spec, data.y(k) - dot(data.x(k), theta));
  }
  return sum / static_cast<double>(n);
}

std::vector<double> empirical_risk_subgradient(const Dataset& data,
                                               const LossSpec& spec,
                                               std::span<const double> theta) {
  check_dims(data, theta);
  const std::int64_t n = data.rows();
  const int d = data.dim();
  std::vector<double> g(d, 0.0);
  for (std::int64_t k = 0; k < n; ++k) {
    const auto x = data.x(k);
    const double phi = loss_subgradient(spec, data.y(k) - dot(x, theta));
    for (int i = 0; i < d; ++i) g[i] -= x[i] * phi;
  }
  for (int i = 0; i < d; ++i) g[i] /= static_cast<double>(n);
  return g;
}

BatchFit fit_batch(const Dataset& data, const LossSpec& spec,
                   const BatchSolverConfig& cfg) {
  if (data.empty()) throw ArgumentError("dataset is empty");
  const bool smooth = spec.smoothness() == Smoothness::SmoothEverywhere;
  const StepRule rule =
      cfg.step_rule.value_or(smooth ? StepRule::BacktrackingGradient
                                    : StepRule::PolyakSubgradient);
  if (rule == StepRule::BacktrackingGradient && !smooth) {
    throw ConfigError("backtracking gradient descent requires a smooth loss");
  }
  if (cfg.max_iters < 1 || !(cfg.tol > 0.0)) {
    throw ConfigError("solver needs max_iters >= 1 and tol > 0");
  }
  return rule == StepRule::BacktrackingGradient
             ? fit_backtracking_gradient(data, spec, cfg)
             : fit_polyak_subgradient(data, spec, cfg);
}

}  // namespace cvxid
