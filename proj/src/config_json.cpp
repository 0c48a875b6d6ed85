#include "cvxid/config_json.hpp"

#include <set>

#include "cvxid/errors.hpp"
#include "json.hpp"

namespace cvxid {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError(std::string("malformed JSON in ") + what);
  return j;
}

double num(const json& j, const char* key, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing numeric field \"") + key + "\"");
  }
  if (!j[key].is_number()) {
    throw ConfigError(std::string("field \"") + key + "\" must be a number");
  }
  return j[key].get<double>();
}

std::vector<double> num_list(const json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

InputModel input_from_json(const json& j) {
  const std::string kind = j.value("kind", "uniform");
  if (kind == "uniform") {
    return UniformIID{num(j, "low", -0.5), num(j, "high", 0.5)};
  }
  if (kind == "gaussian") {
    return GaussianIID{num(j, "mean", 0.0), num(j, "var", 1.0)};
  }
  throw ConfigError("input kind must be uniform or gaussian");
}

NoiseModel noise_from_json(const json& j) {
  const std::string kind = j.value("kind", "gaussian");
  if (kind == "gaussian") {
    return GaussianIID{num(j, "mean", 0.0), num(j, "var", 0.1)};
  }
  if (kind == "none") return NoNoise{};
  throw ConfigError("noise kind must be gaussian or none");
}

json input_to_json(const InputModel& m) {
  if (const auto* u = std::get_if<UniformIID>(&m)) {
    return {{"kind", "uniform"}, {"low", u->low}, {"high", u->high}};
  }
  const auto& g = std::get<GaussianIID>(m);
  return {{"kind", "gaussian"}, {"mean", g.mean}, {"var", g.var}};
}

json noise_to_json(const NoiseModel& m) {
  if (const auto* g = std::get_if<GaussianIID>(&m)) {
    return {{"kind", "gaussian"}, {"mean", g->mean}, {"var", g->var}};
  }
  return {{"kind", "none"}};
}

ArxConfig arx_from_json(const json& j) {
  ArxConfig cfg;
  if (j.contains("a")) {
    auto a = num_list(j["a"]);
    if (a.size() != 2) throw ConfigError("arx field \"a\" must hold [a1, a2]");
    cfg.a = {a[0], a[1]};
  }
  if (j.contains("b")) {
    auto b = num_list(j["b"]);
    if (b.size() != 2) throw ConfigError("arx field \"b\" must hold [b1, b2]");
    cfg.b = {b[0], b[1]};
  }
  if (j.contains("input")) cfg.input = input_from_json(j["input"]);
  if (j.contains("noise")) cfg.noise = noise_from_json(j["noise"]);
  cfg.n_samples = static_cast<std::int64_t>(num(j, "n_samples", 2000.0));
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  cfg.burn_in = static_cast<std::int64_t>(num(j, "burn_in", 200.0));
  return cfg;
}

json arx_to_json(const ArxConfig& cfg) {
  return {{"a", {cfg.a[0], cfg.a[1]}},
          {"b", {cfg.b[0], cfg.b[1]}},
          {"input", input_to_json(cfg.input)},
          {"noise", noise_to_json(cfg.noise)},
          {"n_samples", cfg.n_samples},
          {"seed", cfg.seed},
          {"burn_in", cfg.burn_in}};
}

OutlierConfig outliers_from_json(const json& j) {
  OutlierConfig cfg;
  cfg.fraction = num(j, "fraction", 0.01);
  cfg.alpha = num(j, "alpha", 15.0);
  cfg.n = static_cast<std::int64_t>(num(j, "n", 20.0));
  return cfg;
}

json outliers_to_json(const OutlierConfig& cfg) {
  return {{"fraction", cfg.fraction}, {"alpha", cfg.alpha}, {"n", cfg.n}};
}

HyperGrid grid_from_json(const json& j) {
  HyperGrid grid;
  if (j.contains("c")) grid.c = num_list(j["c"]);
  if (j.contains("decay")) grid.decay = num_list(j["decay"]);
  if (j.contains("corr")) grid.corr = num_list(j["corr"]);
  if (j.contains("reg_lambda")) grid.reg_lambda = num_list(j["reg_lambda"]);
  grid.holdout_fraction = num(j, "holdout_fraction", 0.2);
  return grid;
}

json grid_to_json(const HyperGrid& grid) {
  return {{"c", grid.c},
          {"decay", grid.decay},
          {"corr", grid.corr},
          {"reg_lambda", grid.reg_lambda},
          {"holdout_fraction", grid.holdout_fraction}};
}

MethodDescriptor method_from_json(const json& j) {
  MethodDescriptor desc;
  const std::string type = j.value("type", "");
  if (type == "batch") {
    desc.type = MethodDescriptor::Type::Batch;
  } else if (type == "recursive") {
    desc.type = MethodDescriptor::Type::Recursive;
  } else if (type == "regls") {
    desc.type = MethodDescriptor::Type::Regls;
  } else {
    throw ConfigError("method type must be batch, recursive, or regls");
  }
  if (desc.type == MethodDescriptor::Type::Regls) {
    desc.kernel = kernel_kind_from_string(j.value("kernel", "tc"));
    if (j.contains("grid")) desc.grid = grid_from_json(j["grid"]);
  } else {
    if (!j.contains("loss")) throw ConfigError("method needs a \"loss\" field");
    desc.loss = LossSpec::parse(j["loss"].get<std::string>());
    desc.solver.max_iters = static_cast<int>(num(j, "max_iters", 10000.0));
    desc.solver.tol = num(j, "tol", 1e-8);
    if (j.contains("schedule")) {
      const std::string kind = j["schedule"].get<std::string>();
      if (kind != "powerlaw" && kind != "geometric") {
        throw ConfigError("schedule must be powerlaw or geometric");
      }
      desc.schedule_kind = kind;
    }
    desc.a0 = num(j, "a0", 1.0);
    desc.m0 = num(j, "m0", 10.0);
    desc.rfac = num(j, "rfac", 2.0);
  }
  desc.label = j.value("label", "");
  if (desc.label.empty()) desc.label = desc.derived_label();
  return desc;
}

json method_to_json(const MethodDescriptor& desc) {
  json j{{"label", desc.label}};
  switch (desc.type) {
    case MethodDescriptor::Type::Batch:
      j["type"] = "batch";
      j["loss"] = desc.loss.str();
      j["max_iters"] = desc.solver.max_iters;
      j["tol"] = desc.solver.tol;
      break;
    case MethodDescriptor::Type::Recursive:
      j["type"] = "recursive";
      j["loss"] = desc.loss.str();
      if (desc.schedule_kind) j["schedule"] = *desc.schedule_kind;
      j["a0"] = desc.a0;
      j["m0"] = desc.m0;
      j["rfac"] = desc.rfac;
      break;
    case MethodDescriptor::Type::Regls:
      j["type"] = "regls";
      j["kernel"] = kernel_kind_to_string(desc.kernel);
      j["grid"] = grid_to_json(desc.grid);
      break;
  }
  return j;
}

}  // namespace

SimulateRequest simulate_request_from_json(const std::string& text) {
  const json j = parse(text, "simulate config");
  SimulateRequest req;
  req.arx = arx_from_json(j);
  if (j.contains("outliers") && !j["outliers"].is_null()) {
    req.outliers = outliers_from_json(j["outliers"]);
  }
  req.raw_out = j.value("raw_out", "");
  return req;
}

FitRequest fit_request_from_json(const std::string& text) {
  const json j = parse(text, "fit request");
  FitRequest req;
  if (!j.contains("loss")) throw ConfigError("fit request needs a \"loss\" field");
  req.loss = LossSpec::parse(j["loss"].get<std::string>());
  const std::string mode = j.value("mode", "batch");
  if (mode != "batch" && mode != "recursive") {
    throw ConfigError("fit mode must be batch or recursive");
  }
  req.recursive = mode == "recursive";
  if (j.contains("theta_star") && !j["theta_star"].is_null()) {
    req.theta_star = num_list(j["theta_star"]);
  }
  if (j.contains("schedule")) {
    const std::string kind = j["schedule"].get<std::string>();
    if (kind != "powerlaw" && kind != "geometric") {
      throw ConfigError("schedule must be powerlaw or geometric");
    }
    req.schedule_kind = kind;
  }
  req.a0 = num(j, "a0", 1.0);
  req.m0 = num(j, "m0", 10.0);
  req.rfac = num(j, "rfac", 2.0);
  req.record_every = static_cast<std::int64_t>(num(j, "record_every", 0.0));
  req.trajectory_csv = j.value("trajectory_csv", "");
  req.solver.max_iters = static_cast<int>(num(j, "max_iters", 10000.0));
  req.solver.tol = num(j, "tol", 1e-8);
  return req;
}

ReglsRequest regls_request_from_json(const std::string& text) {
  const json j = parse(text, "regls request");
  ReglsRequest req;
  req.kernel = kernel_kind_from_string(j.value("kernel", "tc"));
  if (j.contains("grid")) req.grid = grid_from_json(j["grid"]);
  if (j.contains("theta_star") && !j["theta_star"].is_null()) {
    req.theta_star = num_list(j["theta_star"]);
  }
  return req;
}

ExperimentConfig experiment_from_json(const std::string& text) {
  const json j = parse(text, "experiment config");
  ExperimentConfig cfg;
  if (!j.contains("arx")) throw ConfigError("experiment needs an \"arx\" block");
  {
    json arx = j["arx"];
    if (!arx.contains("n_samples")) arx["n_samples"] = 1;  // overridden per run
    cfg.arx = arx_from_json(arx);
  }
  if (j.contains("outliers") && !j["outliers"].is_null()) {
    cfg.outliers = outliers_from_json(j["outliers"]);
  }
  if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty()) {
    throw ConfigError("experiment needs a nonempty \"methods\" array");
  }
  std::set<std::string> labels;
  for (const auto& m : j["methods"]) {
    MethodDescriptor desc = method_from_json(m);
    while (!labels.insert(desc.label).second) desc.label += "+";
    cfg.methods.push_back(std::move(desc));
  }
  cfg.n_runs = static_cast<std::int64_t>(num(j, "n_runs", 100.0));
  cfg.n_train = static_cast<std::int64_t>(num(j, "n_train", 2000.0));
  cfg.n_validate = static_cast<std::int64_t>(num(j, "n_validate", 0.0));
  if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  cfg.record_every = static_cast<std::int64_t>(num(j, "record_every", 0.0));
  cfg.measure_time = j.value("measure_time", true);
  cfg.workers = static_cast<int>(num(j, "workers", 1.0));
  cfg.trajectories_dir = j.value("trajectories_dir", "");
  return cfg;
}

std::string experiment_to_json(const ExperimentConfig& cfg) {
  json j;
  j["arx"] = arx_to_json(cfg.arx);
  j["arx"].erase("n_samples");
  j["arx"].erase("seed");
  if (cfg.outliers) j["outliers"] = outliers_to_json(*cfg.outliers);
  j["methods"] = json::array();
  for (const auto& m : cfg.methods) j["methods"].push_back(method_to_json(m));
  j["n_runs"] = cfg.n_runs;
  j["n_train"] = cfg.n_train;
  j["n_validate"] = cfg.n_validate;
  j["master_seed"] = cfg.master_seed;
  j["record_every"] = cfg.record_every;
  j["measure_time"] = cfg.measure_time;
  return j.dump();
}

}  // namespace cvxid
