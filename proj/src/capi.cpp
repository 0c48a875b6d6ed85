#include "cvxid.h"

#include <chrono>
#include <cstring>
#include <fstream>
#include <string>

#include "cvxid/bench.hpp"
#include "cvxid/config_json.hpp"
#include "cvxid/criterion.hpp"
#include "cvxid/errors.hpp"
#include "cvxid/losses.hpp"
#include "cvxid/regls.hpp"
#include "cvxid/saawet.hpp"
#include "cvxid/simulate.hpp"
#include "json.hpp"

using nlohmann::json;

struct cvxid_dataset {
  cvxid::Dataset data;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
cvxid_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return CVXID_OK;
  } catch (const cvxid::ArgumentError& e) {
    g_last_error = e.what();
    return CVXID_ERR_ARGUMENT;
  } catch (const cvxid::ConfigError& e) {
    g_last_error = e.what();
    return CVXID_ERR_CONFIG;
  } catch (const cvxid::DataError& e) {
    g_last_error = e.what();
    return CVXID_ERR_DATA;
  } catch (const cvxid::NumericError& e) {
    g_last_error = e.what();
    return CVXID_ERR_NUMERIC;
  } catch (const cvxid::IoError& e) {
    g_last_error = e.what();
    return CVXID_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CVXID_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CVXID_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* message) {
  if (!ok) throw cvxid::ArgumentError(message);
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

extern "C" {

const char* cvxid_version(void) { return "0.1.0"; }

const char* cvxid_last_error(void) { return g_last_error.c_str(); }

void cvxid_string_free(char* s) { delete[] s; }

cvxid_status cvxid_dataset_create(int32_t dim, int64_t rows, const double* x,
                                  const double* y, cvxid_dataset** out) {
  return guarded([&] {
    require(out && x && y, "null pointer argument");
    require(dim > 0 && rows > 0, "dim and rows must be positive");
    std::vector<double> xs(x, x + static_cast<std::size_t>(dim) * rows);
    std::vector<double> ys(y, y + rows);
    *out = new cvxid_dataset{cvxid::Dataset(dim, std::move(xs), std::move(ys))};
  });
}

cvxid_status cvxid_dataset_read_csv(const char* path, cvxid_dataset** out) {
  return guarded([&] {
    require(path && out, "null pointer argument");
    *out = new cvxid_dataset{cvxid::read_dataset_csv(path)};
  });
}

cvxid_status cvxid_dataset_write_csv(const cvxid_dataset* data, const char* path) {
  return guarded([&] {
    require(data && path, "null pointer argument");
    cvxid::write_dataset_csv(data->data, path);
  });
}

int32_t cvxid_dataset_dim(const cvxid_dataset* data) {
  return data ? data->data.dim() : 0;
}

int64_t cvxid_dataset_rows(const cvxid_dataset* data) {
  return data ? data->data.rows() : 0;
}

cvxid_status cvxid_dataset_get_row(const cvxid_dataset* data, int64_t row,
                                   double* x_out, double* y_out) {
  return guarded([&] {
    require(data && x_out && y_out, "null pointer argument");
    require(row >= 0 && row < data->data.rows(), "row index out of range");
    const auto x = data->data.x(row);
    std::copy(x.begin(), x.end(), x_out);
    *y_out = data->data.y(row);
  });
}

void cvxid_dataset_free(cvxid_dataset* data) { delete data; }

cvxid_status cvxid_loss_value(const char* loss, double t, double* out) {
  return guarded([&] {
    require(loss && out, "null pointer argument");
    *out = cvxid::loss_value(cvxid::LossSpec::parse(loss), t);
  });
}

cvxid_status cvxid_loss_subgradient(const char* loss, double t, double* out) {
  return guarded([&] {
    require(loss && out, "null pointer argument");
    *out = cvxid::loss_subgradient(cvxid::LossSpec::parse(loss), t);
  });
}

cvxid_status cvxid_loss_growth_exponent(const char* loss, double* out) {
  return guarded([&] {
    require(loss && out, "null pointer argument");
    *out = cvxid::growth_exponent(cvxid::LossSpec::parse(loss));
  });
}

cvxid_status cvxid_simulate(const char* config_json, cvxid_dataset** out_data,
                            char** info_json) {
  return guarded([&] {
    require(config_json && out_data, "null pointer argument");
    const cvxid::SimulateRequest req = cvxid::simulate_request_from_json(config_json);
    const cvxid::RawTrace trace = cvxid::simulate_arx(req.arx);
    if (!req.raw_out.empty()) {
      std::ofstream raw(req.raw_out, std::ios::binary);
      if (!raw) throw cvxid::IoError("cannot write raw trace \"" + req.raw_out + "\"");
      raw << cvxid::raw_trace_to_csv(trace);
    }
    cvxid::Dataset data = cvxid::build_regressors(trace);
    if (req.outliers) data = cvxid::inject_outliers(data, *req.outliers);
    if (info_json) {
      json info{{"theta_star", req.arx.theta_star()},
                {"rows", data.rows()},
                {"dim", data.dim()}};
      *info_json = copy_string(info.dump());
    }
    *out_data = new cvxid_dataset{std::move(data)};
  });
}

cvxid_status cvxid_fit(const cvxid_dataset* data, const char* request_json,
                       char** result_json) {
  return guarded([&] {
    require(data && request_json && result_json, "null pointer argument");
    const cvxid::FitRequest req = cvxid::fit_request_from_json(request_json);

    json result;
    result["loss"] = req.loss.str();
    result["config_echo"] = json::parse(request_json);

    std::vector<double> theta;
    if (req.recursive) {
      const cvxid::UpdateRule rule = cvxid::UpdateRule::for_loss(req.loss);
      cvxid::Schedule sched =
          rule.default_schedule(req.a0);
      if (req.schedule_kind) {
        sched = *req.schedule_kind == "powerlaw"
                    ? cvxid::Schedule::power_law(cvxid::growth_exponent(req.loss), req.a0)
                    : cvxid::Schedule::geometric(req.m0, req.rfac, req.a0);
      }
      const auto t0 = std::chrono::steady_clock::now();
      const cvxid::RecursiveRun run = cvxid::run_recursive(
          data->data, rule, sched, std::vector<double>(data->data.dim(), 0.0),
          req.record_every);
      result["wall_time_s"] = elapsed_seconds(t0);
      result["method"] = "recursive";
      result["sigma_final"] = run.final_state.sigma;
      result["truncations"] = run.final_state.truncation_log;
      theta = run.final_state.theta;
      if (!req.trajectory_csv.empty()) {
        std::ofstream out(req.trajectory_csv, std::ios::binary);
        if (!out) {
          throw cvxid::IoError("cannot write trajectory \"" + req.trajectory_csv + "\"");
        }
        out << cvxid::trajectory_to_csv(
            run, req.theta_star ? std::span<const double>(*req.theta_star)
                                : std::span<const double>{});
      }
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      const cvxid::BatchFit fit = cvxid::fit_batch(data->data, req.loss, req.solver);
      result["wall_time_s"] = elapsed_seconds(t0);
      result["method"] = "batch";
      result["final_risk"] = fit.risk;
      result["iters"] = fit.iters;
      result["converged"] = fit.converged;
      theta = fit.theta;
    }
    result["theta_hat"] = theta;
    result["error"] =
        req.theta_star ? json(cvxid::error_metric(theta, *req.theta_star)) : json(nullptr);
    *result_json = copy_string(result.dump());
  });
}

cvxid_status cvxid_regls(const cvxid_dataset* data, const char* request_json,
                         char** result_json) {
  return guarded([&] {
    require(data && request_json && result_json, "null pointer argument");
    const cvxid::ReglsRequest req = cvxid::regls_request_from_json(request_json);

    const auto t0 = std::chrono::steady_clock::now();
    const cvxid::TuneResult tuned =
        cvxid::tune_hyperparameters(data->data, req.kernel, req.grid);
    const cvxid::ReglsFit fit = cvxid::regls_fit(data->data, tuned.config);
    const double wall = elapsed_seconds(t0);

    json result{{"method", "regls"},
                {"kernel", cvxid::kernel_kind_to_string(req.kernel)},
                {"theta_hat", fit.theta},
                {"holdout_mse", tuned.holdout_mse},
                {"jittered", fit.jittered},
                {"wall_time_s", wall},
                {"config_echo", json::parse(request_json)}};
    result["chosen"] = {{"c", tuned.config.hyper.c},
                        {"decay", tuned.config.hyper.decay},
                        {"corr", tuned.config.hyper.corr},
                        {"reg_lambda", tuned.config.reg_lambda}};
    result["error"] = req.theta_star
                          ? json(cvxid::error_metric(fit.theta, *req.theta_star))
                          : json(nullptr);
    *result_json = copy_string(result.dump());
  });
}

cvxid_status cvxid_bench(const char* experiment_json, const char* overrides_json,
                         char** report_json) {
  return guarded([&] {
    require(experiment_json && report_json, "null pointer argument");
    cvxid::ExperimentConfig cfg = cvxid::experiment_from_json(experiment_json);
    if (overrides_json && *overrides_json) {
      const json ov = json::parse(overrides_json, nullptr, false);
      if (ov.is_discarded()) throw cvxid::ConfigError("malformed overrides JSON");
      if (ov.contains("n_runs")) cfg.n_runs = ov["n_runs"].get<std::int64_t>();
      if (ov.contains("workers")) cfg.workers = ov["workers"].get<int>();
      if (ov.contains("trajectories_dir")) {
        cfg.trajectories_dir = ov["trajectories_dir"].get<std::string>();
      }
    }
    const cvxid::MonteCarloReport report = cvxid::run_monte_carlo(cfg);
    *report_json = copy_string(cvxid::report_to_json(report));
  });
}

cvxid_status cvxid_report_render(const char* report_json, const char* format,
                                 char** out_text) {
  return guarded([&] {
    require(report_json && format && out_text, "null pointer argument");
    *out_text = copy_string(cvxid::render_report(report_json, format));
  });
}

}  // extern "C"
