#include "ness/config.hpp"

#include <fstream>
#include <set>

#include "ness/errors.hpp"

namespace ness {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(path + "." + key + ": unknown key");
    }
  }
}

double get_real(const json& obj, const std::string& path, const std::string& key,
                double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

std::size_t get_count(const json& obj, const std::string& path, const std::string& key,
                      std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  const bool ok =
      v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
  if (!ok) throw ConfigError(path + "." + key + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> get_real_list(const json& obj, const std::string& path,
                                  const std::string& key,
                                  const std::vector<double>& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(path + "." + key + ": expected an array");
  std::vector<double> out;
  for (const auto& item : v) {
    if (!item.is_number()) throw ConfigError(path + "." + key + ": expected numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

KernelSpec parse_kernel(const json& obj) {
  KernelSpec spec;
  require_keys(obj, "kernel", {"kind", "a", "nodes"});
  const std::string kind = get_string(obj, "kernel", "kind", "isotropic");
  if (kind == "isotropic") {
    spec.kind = AngularKernel::Kind::Isotropic;
    if (obj.contains("a")) throw ConfigError("kernel.a: only valid for the linear kernel");
  } else if (kind == "linear") {
    spec.kind = AngularKernel::Kind::Linear;
    spec.a = get_real(obj, "kernel", "a", 0.0);
    if (std::abs(spec.a) > 1.0) throw ConfigError("kernel.a: |a| must be <= 1");
  } else {
    throw ConfigError("kernel.kind: must be \"isotropic\" or \"linear\"");
  }
  spec.nodes = get_count(obj, "kernel", "nodes", 64);
  if (spec.nodes < 16) throw ConfigError("kernel.nodes: must be at least 16");
  return spec;
}

std::vector<JumpReservoir> parse_eta_temp_list(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError(path + ": expected a nonempty array of {eta, T}");
  }
  std::vector<JumpReservoir> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ipath = path + "[" + std::to_string(i) + "]";
    require_keys(arr[i], ipath, {"eta", "T"});
    JumpReservoir r;
    r.eta = get_real(arr[i], ipath, "eta", 0.0);
    r.temperature = get_real(arr[i], ipath, "T", 0.0);
    if (!(r.eta > 0.0)) throw ConfigError(ipath + ".eta: must be positive");
    if (!(r.temperature > 0.0)) throw ConfigError(ipath + ".T: must be positive");
    out.push_back(r);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  require_keys(j, "config",
               {"experiment", "seed", "gamma", "kernel", "grid", "reservoir", "numerics",
                "dsmc", "density", "evolve", "entropy", "out"});

  cfg.experiment = get_string(j, "config", "experiment", "");
  static const std::set<std::string> kExperiments{"ness", "evolve", "dsmc", "entropy",
                                                  "validate"};
  if (!kExperiments.count(cfg.experiment)) {
    throw ConfigError("experiment: must be one of ness, evolve, dsmc, entropy, validate");
  }

  if (j.contains("seed")) {
    const auto& v = j.at("seed");
    const bool ok =
        v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    if (!ok) throw ConfigError("seed: expected a nonnegative integer");
    cfg.seed = v.get<std::uint64_t>();
  }

  cfg.gamma = get_real(j, "config", "gamma", 0.5);
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    throw ConfigError("gamma: must lie in the open interval (0,1)");
  }

  if (j.contains("kernel")) cfg.kernel = parse_kernel(j.at("kernel"));

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    require_keys(g, "grid", {"n", "r_max"});
    cfg.grid.n = get_count(g, "grid", "n", cfg.grid.n);
    cfg.grid.r_max = get_real(g, "grid", "r_max", cfg.grid.r_max);
    if (cfg.grid.n < 16) throw ConfigError("grid.n: must be at least 16");
    if (!(cfg.grid.r_max > 0.0)) throw ConfigError("grid.r_max: must be positive");
  }

  std::string reservoir_type =
      (cfg.experiment == "entropy") ? std::string("jump") : std::string("mixture");
  if (j.contains("reservoir")) {
    const auto& r = j.at("reservoir");
    require_keys(r, "reservoir",
                 {"type", "weights", "temps", "reservoirs", "internal_collisions"});
    reservoir_type = get_string(r, "reservoir", "type", reservoir_type);
  }
  if (reservoir_type == "mixture") {
    MixtureSpec spec;
    if (j.contains("reservoir")) {
      const auto& r = j.at("reservoir");
      spec.weights = get_real_list(r, "reservoir", "weights", spec.weights);
      spec.temps = get_real_list(r, "reservoir", "temps", spec.temps);
    }
    if (spec.weights.size() != spec.temps.size() || spec.weights.empty()) {
      throw ConfigError("reservoir: weights and temps must be nonempty, equal length");
    }
    double wsum = 0.0;
    for (double w : spec.weights) {
      if (!(w > 0.0)) throw ConfigError("reservoir.weights: must be positive");
      wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) {
      throw ConfigError("reservoir.weights: must sum to 1 within 1e-12");
    }
    for (double t : spec.temps) {
      if (!(t > 0.0)) throw ConfigError("reservoir.temps: must be positive");
    }
    cfg.mixture = spec;
  } else if (reservoir_type == "ou") {
    OuSpec spec;
    if (j.contains("reservoir")) {
      const auto& r = j.at("reservoir");
      if (r.contains("reservoirs")) {
        spec.reservoirs.clear();
        for (const auto& jr : parse_eta_temp_list(r.at("reservoirs"), "reservoir.reservoirs")) {
          spec.reservoirs.push_back({jr.eta, jr.temperature});
        }
      }
      if (r.contains("internal_collisions")) {
        if (!r.at("internal_collisions").is_boolean()) {
          throw ConfigError("reservoir.internal_collisions: expected a boolean");
        }
        spec.internal_collisions = r.at("internal_collisions").get<bool>();
      }
    }
    cfg.ou = spec;
  } else if (reservoir_type == "jump") {
    JumpSpec spec;
    if (j.contains("reservoir") && j.at("reservoir").contains("reservoirs")) {
      spec.reservoirs =
          parse_eta_temp_list(j.at("reservoir").at("reservoirs"), "reservoir.reservoirs");
    }
    cfg.jump = spec;
  } else {
    throw ConfigError("reservoir.type: must be mixture, ou or jump");
  }

  if (j.contains("numerics")) {
    const auto& n = j.at("numerics");
    require_keys(n, "numerics", {"dt", "t_end", "tol", "max_iter", "record_interval"});
    cfg.numerics.dt = get_real(n, "numerics", "dt", cfg.numerics.dt);
    cfg.numerics.t_end = get_real(n, "numerics", "t_end", cfg.numerics.t_end);
    cfg.numerics.tol = get_real(n, "numerics", "tol", cfg.numerics.tol);
    cfg.numerics.max_iter = get_count(n, "numerics", "max_iter", cfg.numerics.max_iter);
    cfg.numerics.record_interval =
        get_real(n, "numerics", "record_interval", cfg.numerics.record_interval);
    if (!(cfg.numerics.dt > 0.0 && cfg.numerics.dt <= 0.25)) {
      throw ConfigError("numerics.dt: must lie in (0, 0.25]");
    }
    if (!(cfg.numerics.t_end > 0.0)) throw ConfigError("numerics.t_end: must be positive");
    if (!(cfg.numerics.tol > 0.0)) throw ConfigError("numerics.tol: must be positive");
    if (cfg.numerics.max_iter == 0) throw ConfigError("numerics.max_iter: must be positive");
    if (!(cfg.numerics.record_interval > 0.0)) {
      throw ConfigError("numerics.record_interval: must be positive");
    }
  }

  if (j.contains("dsmc")) {
    const auto& d = j.at("dsmc");
    require_keys(d, "dsmc",
                 {"n_particles", "replicas", "init_temperature", "init_shift",
                  "snapshot_times"});
    cfg.dsmc.n_particles = get_count(d, "dsmc", "n_particles", cfg.dsmc.n_particles);
    cfg.dsmc.replicas = get_count(d, "dsmc", "replicas", cfg.dsmc.replicas);
    cfg.dsmc.init_temperature =
        get_real(d, "dsmc", "init_temperature", cfg.dsmc.init_temperature);
    if (d.contains("init_shift")) {
      const auto shift = get_real_list(d, "dsmc", "init_shift", {0.0, 0.0, 0.0});
      if (shift.size() != 3) throw ConfigError("dsmc.init_shift: expected 3 components");
      cfg.dsmc.init_shift = {shift[0], shift[1], shift[2]};
    }
    cfg.dsmc.snapshot_times = get_real_list(d, "dsmc", "snapshot_times", {});
    if (cfg.dsmc.n_particles < 2) throw ConfigError("dsmc.n_particles: must be at least 2");
    if (cfg.dsmc.replicas == 0) throw ConfigError("dsmc.replicas: must be positive");
    if (!(cfg.dsmc.init_temperature > 0.0)) {
      throw ConfigError("dsmc.init_temperature: must be positive");
    }
  }

  if (j.contains("density")) {
    const auto& d = j.at("density");
    require_keys(d, "density", {"v_max", "m"});
    cfg.density.v_max = get_real(d, "density", "v_max", cfg.density.v_max);
    cfg.density.m = get_count(d, "density", "m", cfg.density.m);
    if (!(cfg.density.v_max > 0.0)) throw ConfigError("density.v_max: must be positive");
    if (cfg.density.m < 16) throw ConfigError("density.m: must be at least 16");
  }

  if (j.contains("evolve")) {
    const auto& e = j.at("evolve");
    require_keys(e, "evolve", {"start", "start_temperature"});
    cfg.evolve.start = get_string(e, "evolve", "start", cfg.evolve.start);
    cfg.evolve.start_temperature =
        get_real(e, "evolve", "start_temperature", cfg.evolve.start_temperature);
    if (cfg.evolve.start != "reservoir" && cfg.evolve.start != "maxwellian") {
      throw ConfigError("evolve.start: must be \"reservoir\" or \"maxwellian\"");
    }
    if (!(cfg.evolve.start_temperature > 0.0)) {
      throw ConfigError("evolve.start_temperature: must be positive");
    }
  }

  if (j.contains("entropy")) {
    const auto& e = j.at("entropy");
    require_keys(e, "entropy", {"hot_start_temperature", "trajectory_t_end"});
    cfg.entropy.hot_start_temperature =
        get_real(e, "entropy", "hot_start_temperature", cfg.entropy.hot_start_temperature);
    cfg.entropy.trajectory_t_end =
        get_real(e, "entropy", "trajectory_t_end", cfg.entropy.trajectory_t_end);
    if (!(cfg.entropy.hot_start_temperature > 0.0)) {
      throw ConfigError("entropy.hot_start_temperature: must be positive");
    }
    if (!(cfg.entropy.trajectory_t_end > 0.0)) {
      throw ConfigError("entropy.trajectory_t_end: must be positive");
    }
  }

  if (j.contains("out")) {
    if (!j.at("out").is_string()) throw ConfigError("out: expected a string path");
    cfg.out_dir = j.at("out").get<std::string>();
  }

  return cfg;
}

nlohmann::json RunConfig::echo() const {
  json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["gamma"] = gamma;
  j["kernel"]["kind"] =
      kernel.kind == AngularKernel::Kind::Isotropic ? "isotropic" : "linear";
  if (kernel.kind == AngularKernel::Kind::Linear) j["kernel"]["a"] = kernel.a;
  j["kernel"]["nodes"] = kernel.nodes;
  j["grid"]["n"] = grid.n;
  j["grid"]["r_max"] = grid.r_max;
  if (mixture) {
    j["reservoir"]["type"] = "mixture";
    j["reservoir"]["weights"] = mixture->weights;
    j["reservoir"]["temps"] = mixture->temps;
  } else if (ou) {
    j["reservoir"]["type"] = "ou";
    auto arr = json::array();
    for (const auto& r : ou->reservoirs) {
      arr.push_back({{"eta", r.eta}, {"T", r.temperature}});
    }
    j["reservoir"]["reservoirs"] = arr;
    j["reservoir"]["internal_collisions"] = ou->internal_collisions;
  } else if (jump) {
    j["reservoir"]["type"] = "jump";
    auto arr = json::array();
    for (const auto& r : jump->reservoirs) {
      arr.push_back({{"eta", r.eta}, {"T", r.temperature}});
    }
    j["reservoir"]["reservoirs"] = arr;
  }
  j["numerics"] = {{"dt", numerics.dt},
                   {"t_end", numerics.t_end},
                   {"tol", numerics.tol},
                   {"max_iter", numerics.max_iter},
                   {"record_interval", numerics.record_interval}};
  j["dsmc"] = {{"n_particles", dsmc.n_particles},
               {"replicas", dsmc.replicas},
               {"init_temperature", dsmc.init_temperature},
               {"init_shift", dsmc.init_shift},
               {"snapshot_times", dsmc.snapshot_times}};
  j["density"] = {{"v_max", density.v_max}, {"m", density.m}};
  j["evolve"] = {{"start", evolve.start},
                 {"start_temperature", evolve.start_temperature}};
  j["entropy"] = {{"hot_start_temperature", entropy.hot_start_temperature},
                  {"trajectory_t_end", entropy.trajectory_t_end}};
  j["out"] = out_dir.string();
  return j;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    stream >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

void apply_override(nlohmann::json& j, const std::string& key_path,
                    const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  json* node = &j;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = key_path.find('.', pos);
    const std::string key = key_path.substr(pos, dot - pos);
    if (key.empty()) throw ConfigError("--set: empty key segment in " + key_path);
    if (dot == std::string::npos) {
      (*node)[key] = parsed;
      return;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

}  // namespace ness
