#include "cvxid/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "cvxid/config_json.hpp"
#include "cvxid/errors.hpp"
#include "cvxid/rng.hpp"
#include "json.hpp"

namespace cvxid {

using nlohmann::json;

std::string MethodDescriptor::derived_label() const {
  switch (type) {
    case Type::Batch:
      return "batch:" + loss.str();
    case Type::Recursive:
      return "recursive:" + loss.str();
    case Type::Regls:
      return "regls:" + kernel_kind_to_string(kernel);
  }
  return {};
}

Schedule MethodDescriptor::resolve_schedule(const UpdateRule& rule) const {
  const std::string kind = schedule_kind.value_or(
      rule.kind == UpdateKind::SmoothGradient ? "powerlaw" : "geometric");
  if (kind == "powerlaw") return Schedule::power_law(growth_exponent(loss), a0, m0);
  return Schedule::geometric(m0, rfac, a0);
}

void ExperimentConfig::validate() const {
  arx.validate();
  if (methods.empty()) throw ConfigError("experiment needs at least one method");
  if (n_runs < 1) throw ConfigError("n_runs must be positive");
  if (n_train < 1) throw ConfigError("n_train must be positive");
  if (n_validate < 0) throw ConfigError("n_validate must be nonnegative");
  if (record_every < 0) throw ConfigError("record_every must be nonnegative");
  for (const auto& m : methods) {
    if (m.type == MethodDescriptor::Type::Recursive) {
      m.resolve_schedule(UpdateRule::for_loss(m.loss));  // throws on bad knobs
    }
  }
  if (outliers) {
    if (!(outliers->fraction >= 0.0 && outliers->fraction < 1.0)) {
      throw ConfigError("outlier fraction must lie in [0, 1)");
    }
  }
}

double error_metric(std::span<const double> theta_hat,
                    std::span<const double> theta_star) {
  if (theta_hat.size() != theta_star.size()) {
    throw ArgumentError("error metric needs vectors of equal length");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < theta_hat.size(); ++i) {
    const double diff = theta_hat[i] - theta_star[i];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

BoxStats summarize_errors(std::span<const double> errors) {
  if (errors.empty()) throw ArgumentError("cannot summarize an empty sample");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
  };

  BoxStats stats;
  stats.median = quantile(0.5);
  stats.q1 = quantile(0.25);
  stats.q3 = quantile(0.75);
  const double iqr = stats.q3 - stats.q1;
  const double lo_fence = stats.q1 - 1.5 * iqr;
  const double hi_fence = stats.q3 + 1.5 * iqr;
  stats.lower_whisker = *std::find_if(sorted.begin(), sorted.end(),
                                      [&](double v) { return v >= lo_fence; });
  for (double v : sorted) {
    if (v <= hi_fence) stats.upper_whisker = v;
  }
  double sum = 0.0;
  for (double v : sorted) sum += v;
  stats.mean = sum / static_cast<double>(n);
  return stats;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string sanitize_label(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  }
  return out;
}

double holdout_mse(const Dataset& valid, std::span<const double> theta) {
  double mse = 0.0;
  for (std::int64_t k = 0; k < valid.rows(); ++k) {
    const auto x = valid.x(k);
    double pred = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) pred += theta[i] * x[i];
    const double e = valid.y(k) - pred;
    mse += e * e;
  }
  return mse / static_cast<double>(valid.rows());
}

RunRecord execute_method(const MethodDescriptor& desc, const Dataset& train,
                         const Dataset& valid, std::span<const double> theta_star,
                         const ExperimentConfig& cfg, std::int64_t run_index) {
  RunRecord rec;
  try {
    std::string trajectory_csv;
    const auto t0 = Clock::now();
    switch (desc.type) {
      case MethodDescriptor::Type::Batch: {
        BatchFit fit = fit_batch(train, desc.loss, desc.solver);
        rec.theta = std::move(fit.theta);
        break;
      }
      case MethodDescriptor::Type::Recursive: {
        const UpdateRule rule = UpdateRule::for_loss(desc.loss);
        const Schedule sched = desc.resolve_schedule(rule);
        const bool want_traj = !cfg.trajectories_dir.empty();
        RecursiveRun run = run_recursive(
            train, rule, sched, std::vector<double>(train.dim(), 0.0),
            want_traj ? std::max<std::int64_t>(cfg.record_every, 1) : 0);
        rec.theta = run.final_state.theta;
        rec.sigma_final = run.final_state.sigma;
        if (want_traj) trajectory_csv = trajectory_to_csv(run, theta_star);
        break;
      }
      case MethodDescriptor::Type::Regls: {
        const TuneResult tuned = tune_hyperparameters(train, desc.kernel, desc.grid);
        ReglsFit fit = regls_fit(train, tuned.config);
        rec.theta = std::move(fit.theta);
        break;
      }
    }
    const auto t1 = Clock::now();
    if (cfg.measure_time) {
      rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    }
    rec.error = error_metric(rec.theta, theta_star);
    if (valid.rows() > 0) rec.valid_mse = holdout_mse(valid, rec.theta);
    if (!trajectory_csv.empty()) {
      const std::string path = cfg.trajectories_dir + "/" + sanitize_label(desc.label) +
                               "_run" + std::to_string(run_index) + ".csv";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoError("cannot write trajectory \"" + path + "\"");
      out << trajectory_csv;
    }
  } catch (const std::exception& e) {
    rec = RunRecord{};
    rec.ok = false;
    rec.message = e.what();
  }
  return rec;
}

}  // namespace

MonteCarloReport run_monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> theta_star = cfg.arx.theta_star();
  const std::size_t n_methods = cfg.methods.size();

  MonteCarloReport report;
  report.theta_star = theta_star;
  report.methods.resize(n_methods);
  for (std::size_t m = 0; m < n_methods; ++m) {
    report.methods[m].label = cfg.methods[m].label;
    report.methods[m].runs.resize(cfg.n_runs);
  }

  auto do_run = [&](std::int64_t r) {
    const std::int64_t run_index = r + 1;
    ArxConfig arx = cfg.arx;
    arx.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(run_index));
    arx.n_samples = cfg.n_train + cfg.n_validate + 2;
    try {
      const Dataset all = build_regressors(simulate_arx(arx));
      Dataset train = all.head(cfg.n_train);
      const Dataset valid = all.slice(cfg.n_train, cfg.n_validate);
      if (cfg.outliers) train = inject_outliers(train, *cfg.outliers);
      for (std::size_t m = 0; m < n_methods; ++m) {
        report.methods[m].runs[r] = execute_method(cfg.methods[m], train, valid,
                                                   theta_star, cfg, run_index);
      }
    } catch (const std::exception& e) {
      for (std::size_t m = 0; m < n_methods; ++m) {
        RunRecord rec;
        rec.ok = false;
        rec.message = e.what();
        report.methods[m].runs[r] = std::move(rec);
      }
    }
  };

  const int workers = std::min<std::int64_t>(std::max(cfg.workers, 1), cfg.n_runs);
  if (workers <= 1) {
    for (std::int64_t r = 0; r < cfg.n_runs; ++r) do_run(r);
  } else {
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::int64_t r = next.fetch_add(1);
          if (r >= cfg.n_runs) break;
          do_run(r);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (auto& method : report.methods) {
    std::vector<double> errors;
    for (const auto& rec : method.runs) {
      if (rec.ok) {
        errors.push_back(rec.error);
      } else {
        ++method.n_failed;
      }
    }
    if (!errors.empty()) method.summary = summarize_errors(errors);
  }
  report.config_echo_json = experiment_to_json(cfg);
  return report;
}

namespace {

json summary_to_json(const MethodReport& method, std::int64_t n_runs) {
  if (method.n_failed == n_runs) return nullptr;
  return {{"median", method.summary.median},
          {"q1", method.summary.q1},
          {"q3", method.summary.q3},
          {"lower_whisker", method.summary.lower_whisker},
          {"upper_whisker", method.summary.upper_whisker},
          {"mean", method.summary.mean},
          {"n_runs", n_runs},
          {"n_failed", method.n_failed}};
}

}  // namespace

std::string report_to_json(const MonteCarloReport& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["theta_star"] = report.theta_star;
  j["config_echo"] = json::parse(report.config_echo_json);
  json methods = json::array();
  json runs = json::object();
  json summary = json::object();
  for (const auto& method : report.methods) {
    methods.push_back(method.label);
    json rows = json::array();
    for (std::size_t r = 0; r < method.runs.size(); ++r) {
      const RunRecord& rec = method.runs[r];
      json row{{"run", r + 1}, {"ok", rec.ok}};
      if (rec.ok) {
        row["error"] = rec.error;
        row["theta_hat"] = rec.theta;
        row["wall_time_s"] = rec.wall_time_s;
        if (rec.sigma_final >= 0) row["sigma_final"] = rec.sigma_final;
        if (rec.valid_mse >= 0.0) row["valid_mse"] = rec.valid_mse;
      } else {
        row["message"] = rec.message;
      }
      rows.push_back(std::move(row));
    }
    runs[method.label] = std::move(rows);
    summary[method.label] =
        summary_to_json(method, static_cast<std::int64_t>(method.runs.size()));
  }
  j["methods"] = std::move(methods);
  j["runs"] = std::move(runs);
  j["summary"] = std::move(summary);
  return j.dump();
}

std::string render_report(const std::string& report_json, const std::string& format) {
  json j = json::parse(report_json, nullptr, false);
  if (j.is_discarded() || !j.contains("summary") || !j.contains("methods")) {
    throw DataError("not a Monte Carlo report (missing summary/methods)");
  }
  if (format == "json") {
    json out{{"methods", j["methods"]}, {"summary", j["summary"]}};
    return out.dump();
  }
  if (format != "csv") throw ArgumentError("report format must be csv or json");

  std::string out =
      "method,median,q1,q3,lower_whisker,upper_whisker,mean,n_runs,n_failed\n";
  for (const auto& label : j["methods"]) {
    const std::string name = label.get<std::string>();
    const json& s = j["summary"][name];
    out += name;
    if (s.is_null()) {
      out += ",,,,,,,,\n";
      continue;
    }
    for (const char* key : {"median", "q1", "q3", "lower_whisker", "upper_whisker", "mean"}) {
      out += ',';
      out += format_double(s[key].get<double>());
    }
    out += ',' + std::to_string(s["n_runs"].get<std::int64_t>());
    out += ',' + std::to_string(s["n_failed"].get<std::int64_t>());
    out += '\n';
  }
  return out;
}

}  // namespace cvxid
