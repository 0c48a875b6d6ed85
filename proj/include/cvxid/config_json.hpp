#pragma once

#include <optional>
#include <string>

#include "cvxid/bench.hpp"
#include "cvxid/simulate.hpp"

namespace cvxid {

// Data-generation request: an ARX config plus optional outlier injection and
// an optional raw-trace output path.
struct SimulateRequest {
  ArxConfig arx;
  std::optional<OutlierConfig> outliers;
  std::string raw_out;
};

// Batch/recursive fit request as understood by the C API and the CLI.
struct FitRequest {
  LossSpec loss;
  bool recursive = false;
  std::optional<std::vector<double>> theta_star;
  std::optional<std::string> schedule_kind;  // "powerlaw" | "geometric"
  double a0 = 1.0;
  double m0 = 10.0;
  double rfac = 2.0;
  std::int64_t record_every = 0;
  std::string trajectory_csv;
  BatchSolverConfig solver;
};

struct ReglsRequest {
  KernelKind kernel = KernelKind::TC;
  HyperGrid grid;
  std::optional<std::vector<double>> theta_star;
};

SimulateRequest simulate_request_from_json(const std::string& text);
FitRequest fit_request_from_json(const std::string& text);
ReglsRequest regls_request_from_json(const std::string& text);

ExperimentConfig experiment_from_json(const std::string& text);
std::string experiment_to_json(const ExperimentConfig& cfg);

}  // namespace cvxid
