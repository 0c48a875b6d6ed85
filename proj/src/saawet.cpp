#include "cvxid/saawet.hpp"

#include <cmath>

#include "cvxid/dataset.hpp"
#include "cvxid/errors.hpp"

namespace cvxid {

Schedule Schedule::power_law(double growth_exponent_l, double a0, double m0) {
  if (!(growth_exponent_l > 0.0)) throw ConfigError("power-law bound needs l > 0");
  if (!(a0 > 0.0)) throw ConfigError("step scale a0 must be positive");
  if (!(m0 > 0.0)) throw ConfigError("bound scale m0 must be positive");
  Schedule s;
  s.a0 = a0;
  s.bound = BoundKind::PowerLaw;
  s.power_exponent = 1.0 / (1.0 + 2.0 * growth_exponent_l);
  s.m0 = m0;
  return s;
}

Schedule Schedule::geometric(double m0, double growth, double a0) {
  if (!(m0 > 0.0) || !(growth > 1.0)) {
    throw ConfigError("geometric bound needs M0 > 0 and ratio > 1");
  }
  if (!(a0 > 0.0)) throw ConfigError("step scale a0 must be positive");
  Schedule s;
  s.a0 = a0;
  s.bound = BoundKind::Geometric;
  s.m0 = m0;
  s.growth = growth;
  return s;
}

double Schedule::step_size(std::int64_t k) const {
  return a0 / static_cast<double>(k);
}

double truncation_bound(const Schedule& sched, std::int64_t sigma) {
  if (sigma < 1) throw ArgumentError("truncation counter must be >= 1");
  if (sched.bound == BoundKind::PowerLaw) {
    return sched.m0 * std::pow(static_cast<double>(sigma), sched.power_exponent);
  }
  return sched.m0 * std::pow(sched.growth, static_cast<double>(sigma - 1));
}

UpdateRule UpdateRule::smooth_gradient(const LossSpec& spec) {
  if (spec.smoothness() != Smoothness::SmoothEverywhere) {
    throw ConfigError("smooth-gradient update requires a smooth loss");
  }
  return {UpdateKind::SmoothGradient, spec};
}

UpdateRule UpdateRule::sign_lad() {
  return {UpdateKind::SignLAD, LossSpec::ll(1.0)};
}

UpdateRule UpdateRule::quantile(double gamma) {
  return {UpdateKind::QuantileAsymmetric, LossSpec::quantile(gamma)};
}

UpdateRule UpdateRule::for_loss(const LossSpec& spec) {
  if (spec.kind == LossKind::Quantile) return quantile(spec.gamma);
  if (spec.kind == LossKind::Ll && spec.l == 1.0) return sign_lad();
  return smooth_gradient(spec);
}

Schedule UpdateRule::default_schedule(double a0) const {
  return kind == UpdateKind::SmoothGradient
             ? Schedule::power_law(growth_exponent(spec), a0)
             : Schedule::geometric(10.0, 2.0, a0);
}

RecursiveState RecursiveState::start(std::vector<double> theta1) {
  RecursiveState state;
  state.theta = std::move(theta1);
  return state;
}

void sa_step(RecursiveState& state, const UpdateRule& rule, const Schedule& sched,
             std::span<const double> x, double y) {
  const int d = static_cast<int>(state.theta.size());
  if (static_cast<int>(x.size()) != d) {
    throw ArgumentError("regressor length does not match state dimension");
  }
  if (!std::isfinite(y)) throw DataError("non-finite response rejected");
  for (double xi : x) {
    if (!std::isfinite(xi)) throw DataError("non-finite regressor rejected");
  }

  const double a_k = sched.step_size(state.k);
  double residual = y;
  for (int i = 0; i < d; ++i) residual -= state.theta[i] * x[i];

  // Scalar multiplier of x; candidate_i = theta_i + coef * x_i. Keeping the
  // update in this form makes the quantile step identical to a rescaled
  // SignLAD step down to the last bit.
  double coef = 0.0;
  switch (rule.kind) {
    case UpdateKind::SmoothGradient:
      coef = a_k * loss_subgradient(rule.spec, residual);
      break;
    case UpdateKind::SignLAD:
      coef = a_k * sign_or_one(residual);
      break;
    case UpdateKind::QuantileAsymmetric:
      coef = residual >= 0.0 ? a_k * rule.spec.gamma
                             : a_k * (rule.spec.gamma - 1.0);
      break;
  }

  double norm_sq = 0.0;
  std::vector<double> candidate(state.theta);
  for (int i = 0; i < d; ++i) {
    candidate[i] += coef * x[i];
    norm_sq += candidate[i] * candidate[i];
  }

  if (std::sqrt(norm_sq) <= truncation_bound(sched, state.sigma)) {
    state.theta.swap(candidate);
  } else {
    state.theta.assign(d, 0.0);
    state.truncation_log.push_back(state.k);
    state.sigma += 1;
  }
  state.k += 1;
}

RecursiveRun run_recursive(const Dataset& data, const UpdateRule& rule,
                           const Schedule& sched, std::vector<double> theta1,
                           std::int64_t record_every) {
  if (data.empty()) throw ArgumentError("dataset is empty");
  if (static_cast<int>(theta1.size()) != data.dim()) {
    throw ArgumentError("theta1 length does not match dataset dimension");
  }
  for (double v : theta1) {
    if (!std::isfinite(v)) throw ArgumentError("theta1 must be finite");
  }
  if (record_every < 0) throw ArgumentError("record_every must be >= 0");

  RecursiveRun run;
  run.final_state = RecursiveState::start(std::move(theta1));
  RecursiveState& state = run.final_state;
  const std::int64_t n = data.rows();
  for (std::int64_t i = 0; i < n; ++i) {
    sa_step(state, rule, sched, data.x(i), data.y(i));
    const std::int64_t done = i + 1;
    if ((record_every > 0 && done % record_every == 0) || done == n) {
      run.trajectory.push_back({done, state.theta, state.sigma});
    }
  }
  return run;
}

double quantile_as_scaled_lad(const UpdateRule& rule, int residual_sign, double a_k) {
  if (rule.kind != UpdateKind::QuantileAsymmetric) {
    throw ArgumentError("effective step is defined for the quantile rule only");
  }
  return residual_sign >= 0 ? a_k * rule.spec.gamma : a_k * (1.0 - rule.spec.gamma);
}

std::string trajectory_to_csv(const RecursiveRun& run,
                              std::span<const double> theta_star) {
  const int d = run.final_state.theta.empty()
                    ? 0
                    : static_cast<int>(run.final_state.theta.size());
  std::string out = "k";
  for (int j = 1; j <= d; ++j) out += ",theta_" + std::to_string(j);
  out += ",sigma";
  if (!theta_star.empty()) out += ",error";
  out += '\n';
  for (const auto& point : run.trajectory) {
    out += std::to_string(point.k);
    for (double v : point.theta) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += std::to_string(point.sigma);
    if (!theta_star.empty()) {
      double err_sq = 0.0;
      for (std::size_t i = 0; i < theta_star.size(); ++i) {
        const double diff = point.theta[i] - theta_star[i];
        err_sq += diff * diff;
      }
      out += ',';
      out += format_double(std::sqrt(err_sq));
    }
    out += '\n';
  }
  return out;
}

}  // namespace cvxid
