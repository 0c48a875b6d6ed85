#include "cvxid/simulate.hpp"

#include <cmath>

#include "cvxid/errors.hpp"
#include "cvxid/rng.hpp"

namespace cvxid {

std::vector<double> ArxConfig::theta_star() const {
  return {-a[0], -a[1], b[0], b[1]};
}

void ArxConfig::validate() const {
  const double a1 = a[0], a2 = a[1];
  // Roots of z^2 + a1 z + a2.
  const double disc = a1 * a1 - 4.0 * a2;
  double max_modulus;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    max_modulus = std::max(std::abs((-a1 + root) / 2.0), std::abs((-a1 - root) / 2.0));
  } else {
    max_modulus = std::sqrt(a2);
  }
  if (!(max_modulus < 1.0)) {
    throw ConfigError("unstable AR polynomial: pole modulus " +
                      std::to_string(max_modulus));
  }
  if (n_samples < 1) throw ConfigError("n_samples must be positive");
  if (burn_in < 0) throw ConfigError("burn_in must be nonnegative");
  if (const auto* g = std::get_if<GaussianIID>(&noise); g && !(g->var >= 0.0)) {
    throw ConfigError("noise variance must be nonnegative");
  }
  if (const auto* u = std::get_if<UniformIID>(&input); u && !(u->low < u->high)) {
    throw ConfigError("uniform input needs low < high");
  }
}

RawTrace simulate_arx(const ArxConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  auto draw_input = [&]() {
    if (const auto* u = std::get_if<UniformIID>(&cfg.input)) {
      return rng.uniform(u->low, u->high);
    }
    const auto& g = std::get<GaussianIID>(cfg.input);
    return rng.gaussian(g.mean, std::sqrt(g.var));
  };
  auto draw_noise = [&]() {
    if (const auto* g = std::get_if<GaussianIID>(&cfg.noise)) {
      return rng.gaussian(g->mean, std::sqrt(g->var));
    }
    return 0.0;
  };

  const std::int64_t total = cfg.burn_in + cfg.n_samples;
  RawTrace trace;
  trace.u.reserve(total);
  trace.y.reserve(total);
  double y1 = 0.0, y2 = 0.0;  // y_{k-1}, y_{k-2}
  double u1 = 0.0, u2 = 0.0;  // u_{k-1}, u_{k-2}
  for (std::int64_t k = 0; k < total; ++k) {
    const double u = draw_input();
    const double w = draw_noise();
    const double y =
        -cfg.a[0] * y1 - cfg.a[1] * y2 + cfg.b[0] * u1 + cfg.b[1] * u2 + w;
    trace.u.push_back(u);
    trace.y.push_back(y);
    y2 = y1;
    y1 = y;
    u2 = u1;
    u1 = u;
  }
  if (cfg.burn_in > 0) {
    trace.u.erase(trace.u.begin(), trace.u.begin() + cfg.burn_in);
    trace.y.erase(trace.y.begin(), trace.y.begin() + cfg.burn_in);
  }
  return trace;
}

RawTrace simulate_arx_driven(std::span<const double, 2> a,
                             std::span<const double, 2> b,
                             std::span<const double> u,
                             std::span<const double> w) {
  if (u.size() != w.size()) throw ArgumentError("input and noise lengths differ");
  RawTrace trace;
  trace.u.assign(u.begin(), u.end());
  trace.y.resize(u.size());
  double y1 = 0.0, y2 = 0.0, u1 = 0.0, u2 = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double y = -a[0] * y1 - a[1] * y2 + b[0] * u1 + b[1] * u2 + w[k];
    trace.y[k] = y;
    y2 = y1;
    y1 = y;
    u2 = u1;
    u1 = u[k];
  }
  return trace;
}

Dataset build_regressors(const RawTrace& raw) {
  const std::int64_t n = static_cast<std::int64_t>(raw.y.size());
  if (n < 3) throw ArgumentError("need at least 3 raw samples to build regressors");
  Dataset data(4);
  // Row k (1-based sample index, k = 2 .. n-1): x = [-y_k, -y_{k-1}, u_k,
  // u_{k-1}] paired with y_{k+1}.
  for (std::int64_t k = 1; k + 1 < n; ++k) {
    const double x[4] = {-raw.y[k], -raw.y[k - 1], raw.u[k], raw.u[k - 1]};
    data.push_row(x, raw.y[k + 1]);
  }
  return data;
}

std::string raw_trace_to_csv(const RawTrace& raw) {
  std::string out = "k,u,y\n";
  for (std::size_t k = 0; k < raw.y.size(); ++k) {
    out += std::to_string(k + 1);
    out += ',';
    out += format_double(raw.u[k]);
    out += ',';
    out += format_double(raw.y[k]);
    out += '\n';
  }
  return out;
}

Dataset inject_outliers(const Dataset& data, const OutlierConfig& ocfg) {
  if (data.empty()) throw ArgumentError("dataset is empty");
  if (!(ocfg.fraction >= 0.0 && ocfg.fraction < 1.0)) {
    throw ArgumentError("outlier fraction must lie in [0, 1)");
  }
  if (!(ocfg.alpha > 0.0) || ocfg.n < 1) {
    throw ArgumentError("outlier scale needs alpha > 0 and n >= 1");
  }
  Dataset out = data;
  if (ocfg.fraction == 0.0) return out;

  const std::int64_t rows = data.rows();
  const int d = data.dim();
  std::vector<double> x_otl(d, 0.0);  // X^T y / (alpha * n)
  double beta = 0.0;                  // mean response
  for (std::int64_t k = 0; k < rows; ++k) {
    const auto x = data.x(k);
    const double y = data.y(k);
    for (int i = 0; i < d; ++i) x_otl[i] += x[i] * y;
    beta += y;
  }
  const double scale = 1.0 / (ocfg.alpha * static_cast<double>(ocfg.n));
  for (int i = 0; i < d; ++i) x_otl[i] *= scale;
  beta /= static_cast<double>(rows);

  const std::int64_t period = std::llround(1.0 / ocfg.fraction);
  for (std::int64_t k = period; k <= rows; k += period) {
    out.set_row(k - 1, x_otl, beta);
  }
  return out;
}

}  // namespace cvxid
