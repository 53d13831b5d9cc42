#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qg2l/diagnostics.hpp"
#include "qg2l/jacobian.hpp"
#include "qg2l/linstab.hpp"
#include "qg2l/model.hpp"
#include "qg2l/phi.hpp"
#include "qg2l/pv_inversion.hpp"

namespace qg2l {

enum class Scheme { ETDRK4, IMEX_CNAB2 };

struct StepperConfig {
  Scheme scheme = Scheme::ETDRK4;
  double dt = 0.01;  // step size; acts as the ceiling when adaptive
  bool adaptive = false;
  double cfl_target = 0.5;
  double t_end = 100.0;
  double snapshot_interval = 0.0;  // 0 disables snapshots
  double diagnostics_interval = 0.1;
  std::uint64_t seed = 0;
  double init_amplitude = 1e-3;            // sqrt(W) of the band-noise initial state
  int init_band_lo = 1, init_band_hi = 4;  // |k| band for the noise
  bool odd_symmetry = true;
  std::optional<std::pair<int, int>> init_mode;  // seed the growing eigenvector of this mode

  void validate() const;
};

struct BlowupInfo {
  double t = 0;
  int k1 = 0, k2 = 0;
  double magnitude = 0;
};

struct BlowupError : std::runtime_error {
  explicit BlowupError(const BlowupInfo& i) : std::runtime_error("blow-up detected"), info(i) {}
  BlowupInfo info;
};

// Full semi-discrete right-hand side dq/dt = M_k q + N(q) (linear blocks + dealiased
// advection).  Standalone version for tests and budget checks.
std::pair<SpectralField, SpectralField> tendency(const LayerState& s, const ModelParams& p);

// Single-step integrator with per-mode exponential tables.  ETDRK4 treats the whole 2x2
// linear block exactly; IMEX-CNAB2 is Crank-Nicolson on the nu A^m dissipation block and
// AB2 on everything else (restarted with an Euler step whenever dt changes).
class Stepper {
 public:
  Stepper(const ModelParams& p, const Lattice& lat, const StepperConfig& cfg);

  void step(LayerState& s);
  double dt() const { return dt_; }
  void set_dt(double h);

  double last_max_grad() const { return maxgrad_; }      // from the step's first stage
  double last_cfl() const;                               // (maxgrad+1) dt / dx
  void set_blowup_threshold(double thr) { blowup_thr_ = thr; }

  // max |grad psi_i| of a state without stepping (initial CFL report)
  double probe_max_grad(const LayerState& s);

 private:
  void build_tables();
  void nonlinear(const SpectralField& q1, const SpectralField& q2, SpectralField& n1,
                 SpectralField& n2, bool record_grad);
  void check_blowup(const LayerState& s);

  ModelParams p_;
  Lattice lat_;
  StepperConfig cfg_;
  double dt_;
  std::vector<Mat2> Mk_;                          // per-mode linear blocks (zero block at k=0)
  std::vector<Mat2> E_, E2_, Q_, F1_, F2_, F3_;   // ETDRK4 tables for the current dt
  std::vector<Mat2> impinv_, impfwd_, Rk_;        // CNAB2 tables
  JacobianWorkspace jac_;
  bool have_prev_ = false;
  SpectralField fprev1_, fprev2_;                 // CNAB2 explicit history
  double maxgrad_ = 0.0;
  double blowup_thr_ = 0.0;  // 0 = only NaN/Inf checks
};

// Band-limited Hermitian white noise scaled so sqrt(W) = cfg.init_amplitude, odd-projected
// when cfg.odd_symmetry (error if projection empties the band).
LayerState band_noise_state(const Lattice& lat, const StepperConfig& cfg);

// Growing eigenvector of M_k at coefficient amplitude amp, completed to a real (and, when
// odd, odd-in-y) state.  Odd seeding needs k2 != 0.
LayerState mode_seed_state(const Lattice& lat, const ModelParams& p, int k1, int k2, double amp,
                           bool odd);

// initial state per cfg: init_mode if set, else band noise
LayerState initial_state(const Lattice& lat, const ModelParams& p, const StepperConfig& cfg);

struct RunSinks {
  std::function<void(const DiagnosticsRecord&)> on_diagnostics;
  std::function<void(const LayerState&)> on_snapshot;
};

struct RunSummary {
  LayerState final_state;
  std::vector<DiagnosticsRecord> records;
  double sup_E = 0, sup_W = 0;
  double mean_W_final_third = 0;
  double avg_h1 = 0;  // trapezoid mean of h1_q over [t_end/3, t_end]
  std::optional<BlowupInfo> blowup;
  std::uint64_t steps = 0;
  double wall_seconds = 0;
};

// Integrate q0 to cfg.t_end, emitting diagnostics/snapshots at the configured intervals
// (always at t=0 and t_end).  Adaptive mode rescales dt toward cfg.cfl_target with
// hysteresis and rebuilds the exponential tables on change.  On blow-up the summary carries
// the structured report and the partial records.
RunSummary run(const LayerState& q0, const ModelParams& p, const Lattice& lat,
               const StepperConfig& cfg, const RunSinks& sinks = {},
               const BackgroundShift* shift = nullptr);

// nu such that the damping rate nu * mu_K^{m-1} of the highest retained mode is `rate`
// (used to "size nu to resolve dissipation" at a given truncation)
double resolve_dissipation_nu(double L, int K, double m, double rate = 100.0);

}  // namespace qg2l
