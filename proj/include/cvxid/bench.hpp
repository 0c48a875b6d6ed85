#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvxid/criterion.hpp"
#include "cvxid/regls.hpp"
#include "cvxid/saawet.hpp"
#include "cvxid/simulate.hpp"

namespace cvxid {

struct MethodDescriptor {
  enum class Type { Batch, Recursive, Regls };

  Type type = Type::Batch;
  std::string label;  // unique per experiment; derived when empty
  LossSpec loss;      // batch and recursive
  BatchSolverConfig solver;
  std::optional<std::string> schedule_kind;  // "powerlaw" | "geometric"
  double a0 = 1.0;
  double m0 = 10.0;
  double rfac = 2.0;
  KernelKind kernel = KernelKind::TC;  // regls
  HyperGrid grid;

  std::string derived_label() const;
  Schedule resolve_schedule(const UpdateRule& rule) const;
};

struct ExperimentConfig {
  ArxConfig arx;  // n_samples and seed are overridden per run
  std::optional<OutlierConfig> outliers;
  std::vector<MethodDescriptor> methods;
  std::int64_t n_runs = 100;
  std::int64_t n_train = 2000;
  std::int64_t n_validate = 0;
  std::uint64_t master_seed = 0;
  std::int64_t record_every = 0;
  // Timing fields break byte-for-byte report reproducibility; turning them
  // off makes identical configs produce identical report bytes.
  bool measure_time = true;
  int workers = 1;
  std::string trajectories_dir;  // per-run trajectory CSVs for recursive methods

  void validate() const;
};

struct RunRecord {
  bool ok = true;
  std::string message;
  double error = 0.0;
  std::vector<double> theta;
  double wall_time_s = 0.0;
  std::int64_t sigma_final = -1;  // recursive methods only
  double valid_mse = -1.0;        // holdout one-step MSE when n_validate > 0
};

struct BoxStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  double mean = 0.0;
};

struct MethodReport {
  std::string label;
  std::vector<RunRecord> runs;  // indexed by run, length n_runs
  BoxStats summary;             // over errors of ok runs
  std::int64_t n_failed = 0;
};

struct MonteCarloReport {
  std::string schema_version = "1.0";
  std::vector<double> theta_star;
  std::vector<MethodReport> methods;
  std::string config_echo_json;
};

// ||theta_hat - theta_star||
double error_metric(std::span<const double> theta_hat,
                    std::span<const double> theta_star);

// Quantiles by linear interpolation between closest ranks; whiskers at the
// most extreme points within 1.5 IQR of the quartiles.
BoxStats summarize_errors(std::span<const double> errors);

// Runs every method on identical per-run data (seed derived from master_seed
// and the 1-based run index); per-run method failures are recorded and
// excluded from summaries. Execution order never changes the report.
MonteCarloReport run_monte_carlo(const ExperimentConfig& cfg);

std::string report_to_json(const MonteCarloReport& report);

// Box-plot statistics table from a report; format "csv" or "json".
std::string render_report(const std::string& report_json, const std::string& format);

}  // namespace cvxid
