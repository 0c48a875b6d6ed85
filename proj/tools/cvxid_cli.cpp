// Command-line front end; everything goes through the cvxid C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cvxid.h"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CLI::ValidationError("cannot write \"" + path + "\"");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

[[noreturn]] void die(cvxid_status status) {
  std::cerr << "error: " << cvxid_last_error() << "\n";
  std::exit(static_cast<int>(status));
}

void check(cvxid_status status) {
  if (status != CVXID_OK) die(status);
}

json theta_star_json(const std::string& csv_list) {
  json arr = json::array();
  std::stringstream ss(csv_list);
  std::string item;
  while (std::getline(ss, item, ',')) arr.push_back(std::stod(item));
  return arr;
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { cvxid_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct OwnedDataset {
  cvxid_dataset* ptr = nullptr;
  ~OwnedDataset() { cvxid_dataset_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex-criterion identification of linear stochastic systems"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate an ARX dataset CSV");
  std::string sim_config, sim_out, sim_raw;
  sim->add_option("--config", sim_config, "simulation config JSON")->required();
  sim->add_option("--out", sim_out, "output dataset CSV")->required();
  sim->add_option("--raw", sim_raw, "optional raw-trace CSV (k,u,y)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit one loss on a dataset");
  std::string fit_data, fit_loss, fit_mode = "batch", fit_theta_star, fit_schedule;
  std::string fit_out, fit_trajectory;
  double fit_a0 = 1.0, fit_m0 = 10.0, fit_rfac = 2.0, fit_tol = 1e-8;
  int fit_max_iters = 10000;
  std::int64_t fit_record_every = 0;
  fit->add_option("--data", fit_data, "dataset CSV")->required();
  fit->add_option("--loss", fit_loss, "loss spec, e.g. l2 / huber:1 / quantile:0.4")->required();
  fit->add_option("--mode", fit_mode, "batch|recursive")->check(CLI::IsMember({"batch", "recursive"}));
  fit->add_option("--theta-star", fit_theta_star, "true parameters, comma separated");
  fit->add_option("--schedule", fit_schedule, "powerlaw|geometric")->check(CLI::IsMember({"powerlaw", "geometric"}));
  fit->add_option("--a0", fit_a0, "step scale in a_k = a0/k");
  fit->add_option("--m0", fit_m0, "geometric bound base");
  fit->add_option("--rfac", fit_rfac, "geometric bound ratio");
  fit->add_option("--max-iters", fit_max_iters, "batch iteration budget");
  fit->add_option("--tol", fit_tol, "batch solver tolerance");
  fit->add_option("--record-every", fit_record_every, "trajectory sampling stride");
  fit->add_option("--trajectory", fit_trajectory, "trajectory CSV path (recursive)");
  fit->add_option("--out", fit_out, "result JSON")->required();

  // regls
  auto* regls = app.add_subcommand("regls", "Regularized least-squares baseline");
  std::string regls_data, regls_kernel, regls_grid, regls_out, regls_theta_star;
  regls->add_option("--data", regls_data, "dataset CSV")->required();
  regls->add_option("--kernel", regls_kernel, "tc|dc|ss|identity")
      ->required()
      ->check(CLI::IsMember({"tc", "dc", "ss", "identity"}));
  regls->add_option("--grid", regls_grid, "hyperparameter grid JSON")->required();
  regls->add_option("--theta-star", regls_theta_star, "true parameters, comma separated");
  regls->add_option("--out", regls_out, "result JSON")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Monte Carlo experiment harness");
  std::string bench_config, bench_out, bench_trajectories;
  std::int64_t bench_runs = -1;
  int bench_workers = -1;
  bench->add_option("--config", bench_config, "experiment config JSON")->required();
  bench->add_option("--runs", bench_runs, "override n_runs");
  bench->add_option("--workers", bench_workers, "concurrent runs");
  bench->add_option("--out", bench_out, "report JSON")->required();
  bench->add_option("--trajectories", bench_trajectories, "directory for trajectory CSVs");

  // report
  auto* report = app.add_subcommand("report", "Box-plot statistics from a report");
  std::string report_in, report_format = "csv", report_out;
  report->add_option("--in", report_in, "report JSON")->required();
  report->add_option("--format", report_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--out", report_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    json config = json::parse(read_file(sim_config));
    if (!sim_raw.empty()) config["raw_out"] = sim_raw;
    OwnedDataset data;
    OwnedString info;
    check(cvxid_simulate(config.dump().c_str(), &data.ptr, &info.ptr));
    check(cvxid_dataset_write_csv(data.ptr, sim_out.c_str()));
    std::cout << info.str() << "\n";
    return 0;
  }

  if (fit->parsed()) {
    OwnedDataset data;
    check(cvxid_dataset_read_csv(fit_data.c_str(), &data.ptr));
    json request{{"loss", fit_loss},
                 {"mode", fit_mode},
                 {"a0", fit_a0},
                 {"m0", fit_m0},
                 {"rfac", fit_rfac},
                 {"max_iters", fit_max_iters},
                 {"tol", fit_tol},
                 {"record_every", fit_record_every}};
    if (!fit_theta_star.empty()) request["theta_star"] = theta_star_json(fit_theta_star);
    if (!fit_schedule.empty()) request["schedule"] = fit_schedule;
    if (!fit_trajectory.empty()) request["trajectory_csv"] = fit_trajectory;
    OwnedString result;
    check(cvxid_fit(data.ptr, request.dump().c_str(), &result.ptr));
    write_file(fit_out, result.str());
    return 0;
  }

  if (regls->parsed()) {
    OwnedDataset data;
    check(cvxid_dataset_read_csv(regls_data.c_str(), &data.ptr));
    json request{{"kernel", regls_kernel}, {"grid", json::parse(read_file(regls_grid))}};
    if (!regls_theta_star.empty()) request["theta_star"] = theta_star_json(regls_theta_star);
    OwnedString result;
    check(cvxid_regls(data.ptr, request.dump().c_str(), &result.ptr));
    write_file(regls_out, result.str());
    return 0;
  }

  if (bench->parsed()) {
    json overrides = json::object();
    if (bench_runs > 0) overrides["n_runs"] = bench_runs;
    if (bench_workers > 0) overrides["workers"] = bench_workers;
    if (!bench_trajectories.empty()) overrides["trajectories_dir"] = bench_trajectories;
    OwnedString result;
    check(cvxid_bench(read_file(bench_config).c_str(), overrides.dump().c_str(),
                      &result.ptr));
    write_file(bench_out, result.str());
    return 0;
  }

  if (report->parsed()) {
    OwnedString rendered;
    check(cvxid_report_render(read_file(report_in).c_str(), report_format.c_str(),
                              &rendered.ptr));
    write_file(report_out, rendered.str());
    return 0;
  }

  return 0;
}
