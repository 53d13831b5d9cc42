#include "qg2l/stepper.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace qg2l {

void StepperConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("stepper.dt must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("stepper.t_end must be > 0");
  if (!(cfl_target > 0.0)) throw std::invalid_argument("stepper.cfl_target must be > 0");
  if (snapshot_interval < 0.0)
    throw std::invalid_argument("stepper.snapshot_interval must be >= 0");
  if (snapshot_interval > 0.0 && snapshot_interval < dt)
    throw std::invalid_argument("stepper.snapshot_interval must be >= dt");
  if (!(diagnostics_interval >= dt))
    throw std::invalid_argument("stepper.diagnostics_interval must be >= dt");
  if (init_band_lo < 1 || init_band_hi < init_band_lo)
    throw std::invalid_argument("stepper.init_band must satisfy 1 <= lo <= hi");
  if (!(init_amplitude > 0.0)) throw std::invalid_argument("stepper.init_amplitude must be > 0");
}

std::pair<SpectralField, SpectralField> tendency(const LayerState& s, const ModelParams& p) {
  const Lattice& lat = s.lattice();
  if (lat.L != p.L) throw std::invalid_argument("tendency: lattice/model L mismatch");
  const StreamPair sp = invert_pv(s);
  JacobianWorkspace jac(lat);
  SpectralField d1 = jac.apply(sp.psi1, s.q1);
  SpectralField d2 = jac.apply(sp.psi2, s.q2);
  d1 *= -1.0;
  d2 *= -1.0;
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const LinearBlock blk = linear_block(k1, k2, p);
      const cplx a = s.q1.at(k1, k2), b = s.q2.at(k1, k2);
      d1.at(k1, k2) += blk.a * a + blk.b * b;
      d2.at(k1, k2) += blk.c * a + blk.d * b;
    }
  return {std::move(d1), std::move(d2)};
}

// ---- per-mode tables ---------------------------------------------------------------------

Stepper::Stepper(const ModelParams& p, const Lattice& lat, const StepperConfig& cfg)
    : p_(p), lat_(lat), cfg_(cfg), dt_(cfg.dt), jac_(lat) {
  p_.validate();
  cfg_.validate();
  if (lat.L != p.L) throw std::invalid_argument("stepper: lattice/model L mismatch");
  Mk_.assign(lat.coeff_count(), Mat2{});
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const LinearBlock b = linear_block(k1, k2, p_);
      Mk_[SpectralField(lat).index(k1, k2)] = Mat2{b.a, b.b, b.c, b.d};
    }
  build_tables();
}

void Stepper::build_tables() {
  const std::size_t n = Mk_.size();
  const bool etd = cfg_.scheme == Scheme::ETDRK4;
  if (etd) {
    E_.assign(n, Mat2::identity());
    E2_.assign(n, Mat2::identity());
    Q_.assign(n, Mat2{});
    F1_.assign(n, Mat2{});
    F2_.assign(n, Mat2{});
    F3_.assign(n, Mat2{});
  } else {
    impinv_.assign(n, Mat2::identity());
    impfwd_.assign(n, Mat2::identity());
    Rk_.assign(n, Mat2{});
  }
  const SpectralField probe(lat_);  // only for index()
  for (int k1 = -lat_.K; k1 <= lat_.K; ++k1)
    for (int k2 = -lat_.K; k2 <= lat_.K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const std::size_t i = probe.index(k1, k2);
      const Mat2 M = Mk_[i];
      if (etd) {
        const PhiSet full = phi_functions(M * dt_);
        const PhiSet half = phi_functions(M * (0.5 * dt_));
        E_[i] = full.e;
        E2_[i] = half.e;
        Q_[i] = half.phi1 * (0.5 * dt_);
        F1_[i] = (full.phi1 - full.phi2 * 3.0 + full.phi3 * 4.0) * dt_;
        F2_[i] = (full.phi2 * 2.0 - full.phi3 * 4.0) * dt_;
        F3_[i] = (full.phi3 * 4.0 - full.phi2) * dt_;
      } else {
        // implicit block: the nu A^m R dissipation, D = -nu mu^m [[alpha,gamma],[gamma,alpha]]
        const auto [alpha, gamma] = inversion_coefficients(k1, k2, p_.L);
        const double diss = p_.nu * std::pow(lat_.mu(k1, k2), p_.m);
        const Mat2 D{cplx{-diss * alpha, 0}, cplx{-diss * gamma, 0}, cplx{-diss * gamma, 0},
                     cplx{-diss * alpha, 0}};
        const Mat2 I = Mat2::identity();
        impfwd_[i] = I + D * (0.5 * dt_);
        impinv_[i] = (I - D * (0.5 * dt_)).inverse();
        Rk_[i] = M - D;
      }
    }
}

void Stepper::set_dt(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("stepper: dt must be > 0");
  if (h == dt_) return;
  dt_ = h;
  have_prev_ = false;  // AB2 history is invalid across a step-size change
  build_tables();
}

double Stepper::last_cfl() const { return (maxgrad_ + 1.0) * dt_ / lat_.dx(); }

void Stepper::nonlinear(const SpectralField& q1, const SpectralField& q2, SpectralField& n1,
                        SpectralField& n2, bool record_grad) {
  const StreamPair sp = invert_pv(q1, q2);
  n1 = jac_.apply(sp.psi1, q1);
  const double g1 = jac_.last_max_grad();
  n2 = jac_.apply(sp.psi2, q2);
  const double g2 = jac_.last_max_grad();
  n1 *= -1.0;
  n2 *= -1.0;
  if (record_grad) maxgrad_ = std::max(g1, g2);
}

double Stepper::probe_max_grad(const LayerState& s) {
  const StreamPair sp = invert_pv(s);
  (void)jac_.apply(sp.psi1, s.q1);
  const double g1 = jac_.last_max_grad();
  (void)jac_.apply(sp.psi2, s.q2);
  maxgrad_ = std::max(g1, jac_.last_max_grad());
  return maxgrad_;
}

// y_i := T_k x_i per retained mode
static void apply_table(const std::vector<Mat2>& T, const SpectralField& x1,
                        const SpectralField& x2, SpectralField& y1, SpectralField& y2) {
  const cplx* a = x1.data();
  const cplx* b = x2.data();
  cplx* u = y1.data();
  cplx* v = y2.data();
  for (std::size_t i = 0; i < T.size(); ++i) {
    const Mat2& t = T[i];
    u[i] = t.a * a[i] + t.b * b[i];
    v[i] = t.c * a[i] + t.d * b[i];
  }
}

static void add_table(const std::vector<Mat2>& T, const SpectralField& x1,
                      const SpectralField& x2, SpectralField& y1, SpectralField& y2) {
  const cplx* a = x1.data();
  const cplx* b = x2.data();
  cplx* u = y1.data();
  cplx* v = y2.data();
  for (std::size_t i = 0; i < T.size(); ++i) {
    const Mat2& t = T[i];
    u[i] += t.a * a[i] + t.b * b[i];
    v[i] += t.c * a[i] + t.d * b[i];
  }
}

void Stepper::check_blowup(const LayerState& s) {
  if (all_finite(s.q1) && all_finite(s.q2)) {
    if (blowup_thr_ <= 0.0) return;
    if (max_abs_coeff(s.q1) <= blowup_thr_ && max_abs_coeff(s.q2) <= blowup_thr_) return;
  }
  BlowupInfo info;
  info.t = s.t;
  double worst = -1.0;
  for (int k1 = -lat_.K; k1 <= lat_.K; ++k1)
    for (int k2 = -lat_.K; k2 <= lat_.K; ++k2) {
      for (const SpectralField* f : {&s.q1, &s.q2}) {
        const double a = std::abs(f->at(k1, k2));
        if (!std::isfinite(a)) {
          info.k1 = k1;
          info.k2 = k2;
          info.magnitude = a;
          throw BlowupError(info);
        }
        if (a > worst) {
          worst = a;
          info.k1 = k1;
          info.k2 = k2;
          info.magnitude = a;
        }
      }
    }
  throw BlowupError(info);
}

void Stepper::step(LayerState& s) {
  const Lattice& lat = lat_;
  if (s.lattice() != lat) throw std::invalid_argument("stepper: state lattice mismatch");

  if (cfg_.scheme == Scheme::ETDRK4) {
    SpectralField nu1(lat), nu2(lat), a1(lat), a2(lat), na1(lat), na2(lat);
    SpectralField b1(lat), b2(lat), nb1(lat), nb2(lat), c1(lat), c2(lat), nc1(lat), nc2(lat);

    nonlinear(s.q1, s.q2, nu1, nu2, /*record_grad=*/true);

    apply_table(E2_, s.q1, s.q2, a1, a2);
    add_table(Q_, nu1, nu2, a1, a2);
    nonlinear(a1, a2, na1, na2, false);

    apply_table(E2_, s.q1, s.q2, b1, b2);
    add_table(Q_, na1, na2, b1, b2);
    nonlinear(b1, b2, nb1, nb2, false);

    apply_table(E2_, a1, a2, c1, c2);
    {
      SpectralField t1 = nb1, t2 = nb2;
      t1 *= 2.0;
      t2 *= 2.0;
      t1 -= nu1;
      t2 -= nu2;
      add_table(Q_, t1, t2, c1, c2);
    }
    nonlinear(c1, c2, nc1, nc2, false);

    SpectralField r1(lat), r2(lat);
    apply_table(E_, s.q1, s.q2, r1, r2);
    add_table(F1_, nu1, nu2, r1, r2);
    na1 += nb1;
    na2 += nb2;
    add_table(F2_, na1, na2, r1, r2);
    add_table(F3_, nc1, nc2, r1, r2);
    s.q1 = std::move(r1);
    s.q2 = std::move(r2);
  } else {
    // CNAB2: (I - h/2 D) q+ = (I + h/2 D) q + h (3/2 F - 1/2 F_prev), F = R q + N(q)
    SpectralField f1(lat), f2(lat);
    nonlinear(s.q1, s.q2, f1, f2, true);
    add_table(Rk_, s.q1, s.q2, f1, f2);
    if (!have_prev_) {
      fprev1_ = f1;
      fprev2_ = f2;
      have_prev_ = true;
    }
    SpectralField rhs1(lat), rhs2(lat);
    apply_table(impfwd_, s.q1, s.q2, rhs1, rhs2);
    SpectralField g1 = f1, g2 = f2;
    g1 *= 1.5 * dt_;
    g2 *= 1.5 * dt_;
    SpectralField h1 = fprev1_, h2 = fprev2_;
    h1 *= 0.5 * dt_;
    h2 *= 0.5 * dt_;
    g1 -= h1;
    g2 -= h2;
    rhs1 += g1;
    rhs2 += g2;
    apply_table(impinv_, rhs1, rhs2, s.q1, s.q2);
    fprev1_ = std::move(f1);
    fprev2_ = std::move(f2);
  }

  if (cfg_.odd_symmetry) {
    s.q1 = project_odd_y(s.q1);
    s.q2 = project_odd_y(s.q2);
  }
  s.q1.zero_mean();
  s.q2.zero_mean();
  s.t += dt_;
  check_blowup(s);
}

// ---- initial data ------------------------------------------------------------------------

LayerState band_noise_state(const Lattice& lat, const StepperConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  LayerState s(lat);
  const double lo = cfg.init_band_lo, hi = cfg.init_band_hi;
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
      if (!(k1 > 0 || (k1 == 0 && k2 > 0))) continue;  // canonical half-lattice
      const double kk = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
      if (kk < lo || kk > hi) continue;
      for (SpectralField* f : {&s.q1, &s.q2}) {
        const cplx z{gauss(rng), gauss(rng)};
        f->at(k1, k2) = z;
        f->at(-k1, -k2) = std::conj(z);
      }
    }
  if (cfg.odd_symmetry) {
    s.q1 = project_odd_y(s.q1);
    s.q2 = project_odd_y(s.q2);
  }
  const double w = std::sqrt(energy_W(s));
  if (!(w > 0.0))
    throw std::invalid_argument("initial data: band is empty (after odd projection)");
  const double scale = cfg.init_amplitude / w;
  s.q1 *= scale;
  s.q2 *= scale;
  return s;
}

LayerState mode_seed_state(const Lattice& lat, const ModelParams& p, int k1, int k2, double amp,
                           bool odd) {
  if (std::abs(k1) > lat.K || std::abs(k2) > lat.K)
    throw std::invalid_argument("initial data: seed mode outside the lattice");
  if (odd && k2 == 0)
    throw std::invalid_argument("initial data: odd seeding needs k2 != 0");
  const ModeEigen me = dominant_mode(linear_block(k1, k2, p));
  LayerState s(lat);
  const cplx v1 = amp * me.v1, v2 = amp * me.v2;
  s.q1.at(k1, k2) = v1;
  s.q2.at(k1, k2) = v2;
  s.q1.at(-k1, -k2) = std::conj(v1);
  s.q2.at(-k1, -k2) = std::conj(v2);
  if (odd) {
    // the block depends on k only through k1 and |k|, so the odd partner is an eigenvector
    // of the same block: u_(k1,-k2) = -u_(k1,k2)
    s.q1.at(k1, -k2) = -v1;
    s.q2.at(k1, -k2) = -v2;
    s.q1.at(-k1, k2) = -std::conj(v1);
    s.q2.at(-k1, k2) = -std::conj(v2);
  }
  return s;
}

LayerState initial_state(const Lattice& lat, const ModelParams& p, const StepperConfig& cfg) {
  if (cfg.init_mode)
    return mode_seed_state(lat, p, cfg.init_mode->first, cfg.init_mode->second,
                           cfg.init_amplitude, cfg.odd_symmetry);
  return band_noise_state(lat, cfg);
}

// ---- run loop ----------------------------------------------------------------------------

double resolve_dissipation_nu(double L, int K, double m, double rate) {
  const double muK = std::pow(2.0 * pi * K / L, 2.0);
  return rate / std::pow(muK, m - 1.0);
}

RunSummary run(const LayerState& q0, const ModelParams& p, const Lattice& lat,
               const StepperConfig& cfg, const RunSinks& sinks, const BackgroundShift* shift) {
  const auto wall0 = std::chrono::steady_clock::now();
  RunSummary out;
  Stepper st(p, lat, cfg);

  LayerState state = q0;
  const double W0 = energy_W(state);
  st.set_blowup_threshold(1e12 * (W0 > 0.0 ? W0 : 1.0));

  auto emit = [&](const LayerState& prev, const LayerState& cur) {
    const DiagnosticsRecord r =
        diagnostics_record(prev, cur, p, st.last_cfl(), st.dt(), shift);
    out.records.push_back(r);
    if (sinks.on_diagnostics) sinks.on_diagnostics(r);
  };

  st.probe_max_grad(state);
  emit(state, state);
  if (sinks.on_snapshot && cfg.snapshot_interval > 0.0) sinks.on_snapshot(state);

  double next_diag = cfg.diagnostics_interval;
  double next_snap = cfg.snapshot_interval > 0.0 ? cfg.snapshot_interval : -1.0;
  const double t_eps = 1e-9 * cfg.t_end;

  LayerState prev = state;
  try {
    while (state.t < cfg.t_end - t_eps) {
      if (cfg.adaptive) {
        // hysteresis: shrink when over target, grow when well under; ceiling cfg.dt
        const double umax = st.last_max_grad() + 1.0;
        const double desired = cfg.cfl_target * lat.dx() / umax;
        if (st.last_cfl() > cfg.cfl_target && desired < st.dt())
          st.set_dt(std::max(desired, 1e-6 * cfg.dt));
        else if (st.dt() < 0.5 * std::min(desired, cfg.dt))
          st.set_dt(std::min(desired, cfg.dt));
      }
      if (state.t + st.dt() > cfg.t_end) st.set_dt(cfg.t_end - state.t);
      prev = state;
      st.step(state);
      ++out.steps;
      if (state.t >= next_diag - t_eps) {
        emit(prev, state);
        while (next_diag <= state.t + t_eps) next_diag += cfg.diagnostics_interval;
      }
      if (next_snap > 0.0 && state.t >= next_snap - t_eps) {
        if (sinks.on_snapshot) sinks.on_snapshot(state);
        while (next_snap <= state.t + t_eps) next_snap += cfg.snapshot_interval;
      }
    }
    if (out.records.empty() || out.records.back().t < state.t - t_eps) emit(prev, state);
  } catch (const BlowupError& e) {
    out.blowup = e.info;
  }

  out.final_state = std::move(state);
  for (const auto& r : out.records) {
    out.sup_E = std::max(out.sup_E, r.E);
    out.sup_W = std::max(out.sup_W, r.W);
  }
  double wsum = 0;
  std::size_t wcnt = 0;
  for (const auto& r : out.records)
    if (r.t >= 2.0 * cfg.t_end / 3.0 - t_eps) {
      wsum += r.W;
      ++wcnt;
    }
  out.mean_W_final_third = wcnt ? wsum / wcnt : 0.0;
  if (!out.blowup && out.records.size() >= 2) {
    try {
      out.avg_h1 = time_average_h1(out.records, cfg.t_end / 3.0);
    } catch (const std::invalid_argument&) {
      out.avg_h1 = 0.0;
    }
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return out;
}

}  // namespace qg2l
