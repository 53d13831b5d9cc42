#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qg2l/lattice.hpp"
#include "qg2l/model.hpp"
#include "qg2l/stepper.hpp"

namespace qg2l {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputConfig {
  std::string dir = "out";
  std::string diagnostics_csv = "diagnostics.csv";
  std::string snapshot_format = "raw";
};

struct DiagnosticsConfig {
  // when set (and the model admits it), E is reported against the background shift built
  // with this absolute constant C
  std::optional<double> background_shift_C;
};

struct RunConfig {
  ModelParams model;
  int K = 0;
  int N = 0;  // 0 -> 3K
  StepperConfig stepper;
  OutputConfig outputs;
  DiagnosticsConfig diagnostics;
  std::string mode = "run";
  int threads = 1;  // recorded in the manifest; this build is single-threaded

  Lattice make_lattice() const { return wavenumber_lattice(model.L, K, N); }
};

// Strict JSON: unknown keys are rejected with their full path ("model.Lx: unknown key"),
// as are type and domain violations ("model.L must be >= 1").  Defaults are filled in.
RunConfig parse_config(const std::string& json_text);

// Canonical serialization; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& c);

// strict parse of a bare ModelParams object (the --params file of linstab/bounds)
ModelParams parse_model_params(const std::string& json_text);

}  // namespace qg2l
