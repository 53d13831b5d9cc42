#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qg2l/bounds.hpp"
#include "qg2l/config.hpp"
#include "qg2l/linstab.hpp"
#include "qg2l/manifest.hpp"
#include "qg2l/snapshot_io.hpp"
#include "qg2l/stepper.hpp"
#include "qg2l/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// exit codes: 0 ok, 1 runtime, 2 config, 3 blow-up
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;

void emit_error(const std::string& type, const std::string& message,
                ordered_json extra = ordered_json::object()) {
  ordered_json err;
  err["error"] = {{"type", type}, {"message", message}};
  for (auto& [k, v] : extra.items()) err["error"][k] = v;
  std::cerr << err.dump() << std::endl;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_run(const std::string& config_path) {
  qg2l::RunConfig cfg;
  std::string config_text;
  try {
    config_text = slurp(config_path);
    cfg = qg2l::parse_config(config_text);
  } catch (const qg2l::ConfigError& e) {
    emit_error("config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    emit_error("config", e.what());
    return kExitConfig;
  }
  if (cfg.mode != "run") {
    emit_error("config", "mode: config requests \"" + cfg.mode + "\" but the subcommand is run");
    return kExitConfig;
  }

  const auto wall0 = std::chrono::steady_clock::now();
  const qg2l::Lattice lat = cfg.make_lattice();

  // fail fast on output paths before spending any time stepping
  std::ofstream diag_csv;
  const std::string canonical = qg2l::serialize_config(cfg);
  try {
    fs::create_directories(cfg.outputs.dir);
    std::ofstream cj(fs::path(cfg.outputs.dir) / "config.json", std::ios::trunc);
    cj << canonical << "\n";
    if (!cj) throw std::runtime_error("cannot write config.json in " + cfg.outputs.dir);
    diag_csv.open(fs::path(cfg.outputs.dir) / cfg.outputs.diagnostics_csv, std::ios::trunc);
    if (!diag_csv)
      throw std::runtime_error("cannot write " + cfg.outputs.diagnostics_csv + " in " +
                               cfg.outputs.dir);
  } catch (const std::exception& e) {
    emit_error("config", e.what());
    return kExitConfig;
  }

  std::vector<std::string> emitted{"config.json", cfg.outputs.diagnostics_csv};
  qg2l::Manifest man;
  man.code_version = qg2l::version;
  man.config_sha256 = qg2l::sha256_hex(canonical);
  man.seed = cfg.stepper.seed;
  man.thread_count = cfg.threads;

  try {
    qg2l::BackgroundShift shift;
    const qg2l::BackgroundShift* shift_ptr = nullptr;
    if (cfg.diagnostics.background_shift_C) {
      shift = qg2l::build_background(cfg.model.L, cfg.model.m, cfg.model.nu,
                                     *cfg.diagnostics.background_shift_C);
      shift_ptr = &shift;
      const qg2l::ConstantsLedger led =
          qg2l::constants_ledger(cfg.model, *cfg.diagnostics.background_shift_C);
      man.constants_ledger_json = qg2l::ledger_json(led);
    }

    const qg2l::LayerState q0 = qg2l::initial_state(lat, cfg.model, cfg.stepper);

    diag_csv << qg2l::diagnostics_csv_header() << "\n";
    std::size_t snap_index = 0;
    qg2l::RunSinks sinks;
    sinks.on_diagnostics = [&](const qg2l::DiagnosticsRecord& r) {
      diag_csv << qg2l::diagnostics_csv_row(r) << "\n";
      if (!diag_csv) throw std::runtime_error("diagnostics write failed");
    };
    sinks.on_snapshot = [&](const qg2l::LayerState& s) {
      char tag[32];
      std::snprintf(tag, sizeof tag, "snap_%06zu", snap_index);
      const std::string stem = (fs::path(cfg.outputs.dir) / tag).string();
      qg2l::write_snapshot(stem + "_q1", s.q1, lat, s.t, "q1");
      qg2l::write_snapshot(stem + "_q2", s.q2, lat, s.t, "q2");
      std::snprintf(tag, sizeof tag, "zonal_%06zu.csv", snap_index);
      std::ofstream zc(fs::path(cfg.outputs.dir) / tag, std::ios::trunc);
      zc << qg2l::zonal_csv(qg2l::zonal_mean_profiles(s));
      if (!zc) throw std::runtime_error("zonal profile write failed");
      std::snprintf(tag, sizeof tag, "snap_%06zu", snap_index);
      for (const char* suffix : {"_q1.bin", "_q1.json", "_q2.bin", "_q2.json"})
        emitted.push_back(std::string(tag) + suffix);
      std::snprintf(tag, sizeof tag, "zonal_%06zu.csv", snap_index);
      emitted.push_back(tag);
      ++snap_index;
    };

    const qg2l::RunSummary sum = qg2l::run(q0, cfg.model, lat, cfg.stepper, sinks, shift_ptr);
    diag_csv.close();

    ordered_json sj;
    sj["t_final"] = sum.final_state.t;
    sj["steps"] = sum.steps;
    sj["sup_E"] = sum.sup_E;
    sj["sup_W"] = sum.sup_W;
    sj["mean_W_final_third"] = sum.mean_W_final_third;
    sj["avg_h1"] = sum.avg_h1;
    if (sum.blowup) {
      sj["blowup"] = {{"t", sum.blowup->t},
                      {"k1", sum.blowup->k1},
                      {"k2", sum.blowup->k2},
                      {"magnitude", sum.blowup->magnitude}};
    } else {
      sj["blowup"] = nullptr;
    }
    {
      std::ofstream out(fs::path(cfg.outputs.dir) / "summary.json", std::ios::trunc);
      out << sj.dump(2) << "\n";
      if (!out) throw std::runtime_error("summary write failed");
    }
    emitted.push_back("summary.json");

    man.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    qg2l::write_manifest(cfg.outputs.dir, man, emitted);

    if (sum.blowup) {
      emit_error("blowup", "integration aborted: blow-up detected",
                 {{"t", sum.blowup->t},
                  {"k1", sum.blowup->k1},
                  {"k2", sum.blowup->k2},
                  {"magnitude", sum.blowup->magnitude}});
      return kExitBlowup;
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    emit_error("config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    // disk-write and other runtime failures: leave a partial-output manifest behind
    man.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    try {
      qg2l::write_manifest(cfg.outputs.dir, man, emitted);
    } catch (...) {
    }
    emit_error("runtime", e.what());
    return kExitRuntime;
  }
}

int cmd_linstab(const std::string& params_path, int K, const std::string& out_path) {
  qg2l::ModelParams p;
  try {
    p = qg2l::parse_model_params(slurp(params_path));
    if (K < 1) throw qg2l::ConfigError("K: must be >= 1");
  } catch (const std::exception& e) {
    emit_error("config", e.what());
    return kExitConfig;
  }
  try {
    const qg2l::ScanResult scan = qg2l::instability_scan(p, K);
    std::ostringstream csv;
    csv << "k1,k2,re_lambda_max,im_lambda_max,disc_re,alpha_k,gamma_k,is_argmax\n";
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
      const qg2l::ScanRow& r = scan.rows[i];
      csv << r.k1 << ',' << r.k2 << ',' << fmt(r.re_lambda_max) << ',' << fmt(r.im_lambda_max)
          << ',' << fmt(r.disc_re) << ',' << fmt(r.alpha) << ',' << fmt(r.gamma) << ','
          << (i == scan.argmax ? 1 : 0) << "\n";
    }
    if (out_path.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream out(out_path, std::ios::trunc);
      out << csv.str();
      if (!out) throw std::runtime_error("cannot write " + out_path);
    }
    return 0;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
    return kExitRuntime;
  }
}

int cmd_bounds(const std::string& params_path, double C, double C_lt) {
  qg2l::ModelParams p;
  try {
    p = qg2l::parse_model_params(slurp(params_path));
  } catch (const std::exception& e) {
    emit_error("config", e.what());
    return kExitConfig;
  }
  try {
    const qg2l::ConstantsLedger led = qg2l::constants_ledger(p, C, C_lt);
    std::cout << qg2l::ledger_json(led) << std::endl;
    return 0;
  } catch (const std::invalid_argument& e) {
    emit_error("config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
    return kExitRuntime;
  }
}

int cmd_lt_check(const std::string& params_path, int K, int kmax, int trials,
                 std::uint64_t seed) {
  double L = 2.0 * qg2l::pi;
  try {
    if (!params_path.empty()) L = qg2l::parse_model_params(slurp(params_path)).L;
    if (K < 1 || kmax < 1 || trials < 1) throw qg2l::ConfigError("K, kmax, trials must be >= 1");
  } catch (const std::exception& e) {
    emit_error("config", e.what());
    return kExitConfig;
  }
  try {
    const qg2l::Lattice lat = qg2l::wavenumber_lattice(L, K);

    // single-mode calibration family: theta = c (cos, cos) at k = (1,0), unit pair norm
    std::pair<qg2l::SpectralField, qg2l::SpectralField> cal{qg2l::SpectralField(lat),
                                                            qg2l::SpectralField(lat)};
    const double c0 = 1.0 / (2.0 * L);  // 4 modes of weight c0 -> L^2 * 4 c0^2 = 1
    for (qg2l::SpectralField* f : {&cal.first, &cal.second}) {
      f->at(1, 0) = c0;
      f->at(-1, 0) = c0;
    }
    const double calibration = qg2l::lieb_thirring_ratio({cal});

    std::uint64_t draw = 0;
    ordered_json per_k = ordered_json::array();
    double max_ratio = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      std::vector<double> ratios;
      ratios.reserve(static_cast<std::size_t>(trials));
      for (int t = 0; t < trials; ++t) {
        const auto fam = qg2l::random_orthonormal_family(lat, k, seed + 1000003 * draw++);
        ratios.push_back(qg2l::lieb_thirring_ratio(fam));
      }
      std::sort(ratios.begin(), ratios.end());
      const double median = ratios[ratios.size() / 2];
      const double kmaxr = ratios.back();
      max_ratio = std::max(max_ratio, kmaxr);
      per_k.push_back({{"k", k}, {"median", median}, {"max", kmaxr}});
    }

    ordered_json out;
    out["L"] = L;
    out["K"] = K;
    out["trials"] = trials;
    out["seed"] = seed;
    out["calibration_single_mode"] = calibration;
    out["max_ratio"] = max_ratio;
    out["bound_4x_calibration"] = 4.0 * calibration;
    out["within_bound"] = max_ratio <= 4.0 * calibration;
    out["per_k"] = per_k;
    std::cout << out.dump(2) << std::endl;
    return out["within_bound"].get<bool>() ? 0 : kExitRuntime;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-layer quasi-geostrophic spectral toolkit"};
  app.set_version_flag("--version", qg2l::version);
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "integrate a configured model run");
  run->add_option("--config", config_path, "run configuration JSON")->required();

  std::string params_path, linstab_out;
  int scanK = 16;
  CLI::App* linstab = app.add_subcommand("linstab", "growth-rate scan of the linearization");
  linstab->add_option("--params", params_path, "ModelParams JSON")->required();
  linstab->add_option("--K", scanK, "scan |k_i| <= K");
  linstab->add_option("--out", linstab_out, "CSV path (default stdout)");

  std::string bounds_params;
  double C = 1.0, C_lt = 1.0;
  CLI::App* bounds = app.add_subcommand("bounds", "constants ledger / dimension bound");
  bounds->add_option("--params", bounds_params, "ModelParams JSON")->required();
  bounds->add_option("--C", C, "absolute constant of the estimates");
  bounds->add_option("--C-lt", C_lt, "Lieb-Thirring constant");

  std::string lt_params;
  int ltK = 8, lt_kmax = 16, lt_trials = 20;
  std::uint64_t lt_seed = 0;
  CLI::App* lt = app.add_subcommand("lt-check", "empirical Lieb-Thirring ratio sweep");
  lt->add_option("--params", lt_params, "ModelParams JSON (only L is used)");
  lt->add_option("--K", ltK, "lattice truncation");
  lt->add_option("--kmax", lt_kmax, "largest family size");
  lt->add_option("--trials", lt_trials, "trials per family size");
  lt->add_option("--seed", lt_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::ostringstream msg;
    msg << e.what();
    emit_error("config", msg.str());
    return kExitConfig;
  }

  if (run->parsed()) return cmd_run(config_path);
  if (linstab->parsed()) return cmd_linstab(params_path, scanK, linstab_out);
  if (bounds->parsed()) return cmd_bounds(bounds_params, C, C_lt);
  if (lt->parsed()) return cmd_lt_check(lt_params, ltK, lt_kmax, lt_trials, lt_seed);
  emit_error("config", "unknown subcommand");
  return kExitConfig;
}
