#include "qg2l/config.hpp"

#include <set>

#include <json.hpp>

namespace qg2l {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError(join(path, key) + ": unknown key");
}

double req_num(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(join(path, key) + ": missing required key");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
  return v.get<double>();
}

double opt_num(const json& j, const std::string& path, const std::string& key, double def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
  return v.get<double>();
}

std::int64_t opt_int(const json& j, const std::string& path, const std::string& key,
                     std::int64_t def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ConfigError(join(path, key) + ": expected an integer");
  return v.get<std::int64_t>();
}

bool opt_bool(const json& j, const std::string& path, const std::string& key, bool def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key) + ": expected a boolean");
  return v.get<bool>();
}

std::string opt_str(const json& j, const std::string& path, const std::string& key,
                    const std::string& def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key) + ": expected a string");
  return v.get<std::string>();
}

ModelParams parse_model(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"beta", "kappa_T", "kappa_M", "nu", "m", "L"});
  ModelParams p;
  p.beta = req_num(j, path, "beta");
  p.kappa_T = req_num(j, path, "kappa_T");
  p.kappa_M = req_num(j, path, "kappa_M");
  p.nu = req_num(j, path, "nu");
  p.m = opt_num(j, path, "m", 3.0);
  p.L = req_num(j, path, "L");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

StepperConfig parse_stepper(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"scheme", "dt", "adaptive", "cfl_target", "t_end", "snapshot_interval",
                  "diagnostics_interval", "seed", "init_amplitude", "init_band", "init_mode",
                  "odd_symmetry"});
  StepperConfig c;
  const std::string scheme = opt_str(j, path, "scheme", "ETDRK4");
  if (scheme == "ETDRK4")
    c.scheme = Scheme::ETDRK4;
  else if (scheme == "IMEX-CNAB2")
    c.scheme = Scheme::IMEX_CNAB2;
  else
    throw ConfigError(join(path, "scheme") + ": must be \"ETDRK4\" or \"IMEX-CNAB2\"");
  c.dt = opt_num(j, path, "dt", c.dt);
  c.adaptive = opt_bool(j, path, "adaptive", c.adaptive);
  c.cfl_target = opt_num(j, path, "cfl_target", c.cfl_target);
  c.t_end = opt_num(j, path, "t_end", c.t_end);
  c.snapshot_interval = opt_num(j, path, "snapshot_interval", c.snapshot_interval);
  c.diagnostics_interval = opt_num(j, path, "diagnostics_interval", c.diagnostics_interval);
  const std::int64_t seed = opt_int(j, path, "seed", static_cast<std::int64_t>(c.seed));
  if (seed < 0) throw ConfigError(join(path, "seed") + ": must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.init_amplitude = opt_num(j, path, "init_amplitude", c.init_amplitude);
  if (j.contains("init_band")) {
    const json& b = j.at("init_band");
    if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer())
      throw ConfigError(join(path, "init_band") + ": expected [lo, hi] integers");
    c.init_band_lo = b[0].get<int>();
    c.init_band_hi = b[1].get<int>();
  }
  if (j.contains("init_mode") && !j.at("init_mode").is_null()) {
    const json& mset = j.at("init_mode");
    if (!mset.is_array() || mset.size() != 2 || !mset[0].is_number_integer() ||
        !mset[1].is_number_integer())
      throw ConfigError(join(path, "init_mode") + ": expected [k1, k2] integers");
    c.init_mode = std::make_pair(mset[0].get<int>(), mset[1].get<int>());
  }
  c.odd_symmetry = opt_bool(j, path, "odd_symmetry", c.odd_symmetry);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("stepper: ") + e.what());
  }
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  expect_object(j, "config");
  reject_unknown(j, "", {"model", "lattice", "stepper", "outputs", "diagnostics", "mode", "threads"});
  RunConfig c;
  if (!j.contains("model")) throw ConfigError("model: missing required key");
  c.model = parse_model(j.at("model"), "model");

  if (!j.contains("lattice")) throw ConfigError("lattice: missing required key");
  const json& lj = j.at("lattice");
  expect_object(lj, "lattice");
  reject_unknown(lj, "lattice", {"K", "N"});
  c.K = static_cast<int>(opt_int(lj, "lattice", "K", 0));
  if (c.K < 1) throw ConfigError("lattice.K: must be an integer >= 1");
  c.N = static_cast<int>(opt_int(lj, "lattice", "N", 0));
  if (c.N != 0 && c.N < 3 * c.K) throw ConfigError("lattice.N: must be >= 3K");

  c.stepper = j.contains("stepper") ? parse_stepper(j.at("stepper"), "stepper") : StepperConfig{};
  if (j.contains("outputs")) {
    const json& oj = j.at("outputs");
    expect_object(oj, "outputs");
    reject_unknown(oj, "outputs", {"dir", "diagnostics_csv", "snapshot_format"});
    c.outputs.dir = opt_str(oj, "outputs", "dir", c.outputs.dir);
    c.outputs.diagnostics_csv =
        opt_str(oj, "outputs", "diagnostics_csv", c.outputs.diagnostics_csv);
    c.outputs.snapshot_format = opt_str(oj, "outputs", "snapshot_format", c.outputs.snapshot_format);
    if (c.outputs.snapshot_format != "raw")
      throw ConfigError("outputs.snapshot_format: only \"raw\" is supported");
  }
  if (j.contains("diagnostics")) {
    const json& dj = j.at("diagnostics");
    expect_object(dj, "diagnostics");
    reject_unknown(dj, "diagnostics", {"background_shift_C"});
    if (dj.contains("background_shift_C") && !dj.at("background_shift_C").is_null()) {
      const double C = opt_num(dj, "diagnostics", "background_shift_C", 1.0);
      if (!(C > 0.0)) throw ConfigError("diagnostics.background_shift_C: must be > 0");
      c.diagnostics.background_shift_C = C;
    }
  }
  c.mode = opt_str(j, "", "mode", "run");
  if (c.mode != "run" && c.mode != "linstab" && c.mode != "bounds" && c.mode != "lt-check")
    throw ConfigError("mode: must be one of run|linstab|bounds|lt-check");
  c.threads = static_cast<int>(opt_int(j, "", "threads", 1));
  if (c.threads != 1) throw ConfigError("threads: this build supports exactly 1 thread");
  return c;
}

std::string serialize_config(const RunConfig& c) {
  ordered_json j;
  j["model"] = {{"beta", c.model.beta}, {"kappa_T", c.model.kappa_T},
                {"kappa_M", c.model.kappa_M}, {"nu", c.model.nu},
                {"m", c.model.m},         {"L", c.model.L}};
  j["lattice"] = {{"K", c.K}, {"N", c.N == 0 ? 3 * c.K : c.N}};
  ordered_json s;
  s["scheme"] = c.stepper.scheme == Scheme::ETDRK4 ? "ETDRK4" : "IMEX-CNAB2";
  s["dt"] = c.stepper.dt;
  s["adaptive"] = c.stepper.adaptive;
  s["cfl_target"] = c.stepper.cfl_target;
  s["t_end"] = c.stepper.t_end;
  s["snapshot_interval"] = c.stepper.snapshot_interval;
  s["diagnostics_interval"] = c.stepper.diagnostics_interval;
  s["seed"] = c.stepper.seed;
  s["init_amplitude"] = c.stepper.init_amplitude;
  s["init_band"] = {c.stepper.init_band_lo, c.stepper.init_band_hi};
  if (c.stepper.init_mode)
    s["init_mode"] = {c.stepper.init_mode->first, c.stepper.init_mode->second};
  else
    s["init_mode"] = nullptr;
  s["odd_symmetry"] = c.stepper.odd_symmetry;
  j["stepper"] = s;
  j["outputs"] = {{"dir", c.outputs.dir},
                  {"diagnostics_csv", c.outputs.diagnostics_csv},
                  {"snapshot_format", c.outputs.snapshot_format}};
  ordered_json d;
  if (c.diagnostics.background_shift_C)
    d["background_shift_C"] = *c.diagnostics.background_shift_C;
  else
    d["background_shift_C"] = nullptr;
  j["diagnostics"] = d;
  j["mode"] = c.mode;
  j["threads"] = c.threads;
  return j.dump(2);
}

ModelParams parse_model_params(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("params are not valid JSON: ") + e.what());
  }
  return parse_model(j, "");
}

}  // namespace qg2l
