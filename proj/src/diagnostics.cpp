#include "qg2l/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qg2l/field.hpp"

namespace qg2l {

static std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string diagnostics_csv_header() {
  return "t,E,W,ke1,ke2,enstrophy1,enstrophy2,baroclinic,h1_q,cfl,dt,odd_residual,"
         "budget_residual";
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
  std::string s;
  const double v[] = {r.t,          r.E,   r.W,  r.ke1,          r.ke2,
                      r.enstrophy1, r.enstrophy2, r.baroclinic, r.h1_q,
                      r.cfl,        r.dt,  r.odd_residual,       r.budget_residual};
  for (std::size_t i = 0; i < sizeof(v) / sizeof(v[0]); ++i) {
    if (i) s += ',';
    s += fmt(v[i]);
  }
  return s;
}

// ---- background shift -----------------------------------------------------------------

// sum_{j=1}^{M} 1/j^2, with the pi^2/6 tail expansion above the loop cutoff
static double partial_zeta2(double M) {
  if (M <= 2'000'000) {
    double s = 0.0;
    for (std::int64_t j = static_cast<std::int64_t>(M); j >= 1; --j)
      s += 1.0 / (static_cast<double>(j) * j);
    return s;
  }
  const double tail = 1.0 / M - 1.0 / (2 * M * M) + 1.0 / (6 * M * M * M);
  return pi * pi / 6.0 - tail;
}

// sum_{j=1}^{M} j^p for real p > 0; Euler-Maclaurin above the loop cutoff (the constant
// zeta(-p) term is negligible relative to M^{p+1} there)
static double power_sum(double M, double p) {
  if (M <= 2'000'000) {
    double s = 0.0;
    const std::int64_t top = static_cast<std::int64_t>(M);
    for (std::int64_t j = 1; j <= top; ++j) s += std::pow(static_cast<double>(j), p);
    return s;
  }
  return std::pow(M, p + 1) / (p + 1) + 0.5 * std::pow(M, p) +
         p / 12.0 * std::pow(M, p - 1) - p * (p - 1) * (p - 2) / 720.0 * std::pow(M, p - 3);
}

BackgroundShift build_background(double L, double m, double nu, double C) {
  if (!(L >= 1.0)) throw std::invalid_argument("background: L must be >= 1");
  if (!(m > 2.5)) throw std::invalid_argument("background: requires m > 5/2");
  if (!(nu > 0.0)) throw std::invalid_argument("background: requires nu > 0");
  if (!(C > 0.0)) throw std::invalid_argument("background: requires C > 0");

  // smallest M with C L^{2m-4} sqrt(1+L^4) M^{5/2-m} < nu/4 (strict).  The closed-form
  // estimate is polished by direct scanning; the comparison carries a 1e-12 relative margin
  // so exact-equality boundaries (which the strict inequality excludes) are rejected.
  const double lhs0 = C * std::pow(L, 2 * m - 4) * std::sqrt(1 + L * L * L * L);
  const double target = nu / 4.0;
  auto ok = [&](double M) { return lhs0 * std::pow(M, 2.5 - m) <= target * (1.0 - 1e-12); };
  const double guess = std::pow(lhs0 / target, 1.0 / (m - 2.5));
  if (!std::isfinite(guess)) throw std::invalid_argument("background: M diverges");
  double M = std::max(1.0, std::floor(guess) - 2.0);
  // below 2^53 this scans consecutive integers exactly; above, consecutive representable
  // doubles (the integer-minimality distinction is sub-ULP there)
  while (!ok(M)) M = (M < 9.0e15) ? M + 1.0 : std::nextafter(M * (1.0 + 1e-12), INFINITY);

  BackgroundShift bg;
  bg.M = M;
  bg.L = L;
  bg.m = m;
  bg.nu = nu;
  bg.C = C;
  // coefficients i L/(2 pi j) at (0, +-j):  |c_j|^2 = L^2/(4 pi^2 j^2)
  const double base = L * L * L * L / (2.0 * pi * pi);  // L^2 * 2 * L^2/(4 pi^2)
  bg.l2_sq = base * partial_zeta2(M);
  bg.h1_sq = 2.0 * L * L * M;  // exact: closed form of the power sum
  bg.hm_sq = base * std::pow(2.0 * pi / L, 2.0 * m) * power_sum(M, 2.0 * m - 2.0);
  return bg;
}

cplx BackgroundShift::coeff(int j) const {
  if (j < 1 || static_cast<double>(j) > M) return {0.0, 0.0};
  return {0.0, L / (2.0 * pi * static_cast<double>(j))};
}

SpectralField BackgroundShift::psi_bar_field(const Lattice& lat) const {
  if (lat.L != L) throw std::invalid_argument("background: lattice L mismatch");
  SpectralField f(lat);
  const int top = static_cast<int>(std::min<double>(M, lat.K));
  for (int j = 1; j <= top; ++j) {
    const cplx c = coeff(j);
    f.at(0, j) = c;
    f.at(0, -j) = std::conj(c);
  }
  return f;
}

SpectralField BackgroundShift::q_bar_field(const Lattice& lat) const {
  // q_bar = -A_y psi_bar - psi_bar/2 (barotropic-side PV of the x-independent shift)
  SpectralField f = psi_bar_field(lat);
  for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
    if (k2 == 0) continue;
    const double mu = lat.mu(0, k2);
    f.at(0, k2) *= -(mu + 0.5);
  }
  return f;
}

// ---- energies ---------------------------------------------------------------------------

double energy_E(const LayerState& s) {
  const StreamPair p = invert_pv(s);
  const SpectralField hat = baroclinic_part(p);
  const double a = sobolev_norm(p.psi1, 1.0), b = sobolev_norm(p.psi2, 1.0),
               h = sobolev_norm(hat, 0.0);
  return a * a + b * b + 2.0 * h * h;
}

double energy_E(const LayerState& s, const BackgroundShift& bg) {
  const Lattice& lat = s.lattice();
  if (lat.L != bg.L) throw std::invalid_argument("energy_E: shift L mismatch");
  const StreamPair p = invert_pv(s);
  const SpectralField hat = baroclinic_part(p);
  const double a2 = std::pow(sobolev_norm(p.psi1, 1.0), 2);
  const double b2 = std::pow(sobolev_norm(p.psi2, 1.0), 2);
  const double h2 = std::pow(sobolev_norm(hat, 0.0), 2);
  // cross terms against the (finite trig series) shift are exact through modes j <= K;
  // higher shift modes contribute only their own norm
  double cross_h1 = 0.0, cross_l2 = 0.0;
  const int top = static_cast<int>(std::min<double>(bg.M, lat.K));
  for (int j = 1; j <= top; ++j) {
    const cplx c = bg.coeff(j);
    const double mu = lat.mu(0, j);
    cross_h1 += 2.0 * mu * (p.psi1.at(0, j) * std::conj(c)).real();
    cross_l2 += 2.0 * (hat.at(0, j) * std::conj(c)).real();
  }
  const double L2 = lat.L * lat.L;
  cross_h1 *= L2;
  cross_l2 *= L2;
  // ||A^{1/2}(psi1 - psi_bar)||^2 + ||A^{1/2} psi2||^2 + 2 ||psi_hat - psi_bar/2||^2
  return (a2 - 2.0 * cross_h1 + bg.h1_sq) + b2 + 2.0 * (h2 - cross_l2 + 0.25 * bg.l2_sq);
}

double energy_W(const LayerState& s) {
  const StreamPair p = invert_pv(s);
  const SpectralField hat = baroclinic_part(p);
  const double q1 = sobolev_norm(s.q1, 0.0), q2 = sobolev_norm(s.q2, 0.0);
  const double a = sobolev_norm(p.psi1, 1.0), b = sobolev_norm(p.psi2, 1.0),
               h = sobolev_norm(hat, 0.0);
  return q1 * q1 + q2 * q2 + a * a + b * b + 2.0 * h * h;
}

// ---- budgets ----------------------------------------------------------------------------

static double sq(double x) { return x * x; }

double budget_residual(const LayerState& prev, const LayerState& next, const ModelParams& p) {
  const double dt = next.t - prev.t;
  if (!(dt > 0.0)) throw std::invalid_argument("budget: states must be one step apart");
  const Lattice& lat = prev.lattice();
  if (lat != next.lattice()) throw std::invalid_argument("budget: lattice mismatch");

  const StreamPair sp0 = invert_pv(prev), sp1 = invert_pv(next);
  const SpectralField hat0 = baroclinic_part(sp0), hat1 = baroclinic_part(sp1);

  // midpoint state (second-order quadrature of the balance over the step)
  LayerState mid(lat);
  mid.q1 = prev.q1 + next.q1;
  mid.q1 *= 0.5;
  mid.q2 = prev.q2 + next.q2;
  mid.q2 *= 0.5;
  const StreamPair spm = invert_pv(mid);
  const SpectralField hatm = baroclinic_part(spm);

  const double tiny = 1e-300;

  // (4.3): d/dt (1/2)(||A^{1/2}psi1||^2 + ||A^{1/2}psi2||^2 + 2||psi_hat||^2)
  //        = -nu sum ||A^{m/2}psi_i||^2 - 2 kT ||psi_hat||^2 - kM ||A^{1/2}psi2||^2
  //          + <d_x q1, psi1>
  const double e0 = 0.5 * (sq(sobolev_norm(sp0.psi1, 1)) + sq(sobolev_norm(sp0.psi2, 1)) +
                           2.0 * sq(sobolev_norm(hat0, 0)));
  const double e1 = 0.5 * (sq(sobolev_norm(sp1.psi1, 1)) + sq(sobolev_norm(sp1.psi2, 1)) +
                           2.0 * sq(sobolev_norm(hat1, 0)));
  const double lhsE = (e1 - e0) / dt;
  const double tE1 = -p.nu * (sq(sobolev_norm(spm.psi1, p.m)) + sq(sobolev_norm(spm.psi2, p.m)));
  const double tE2 = -2.0 * p.kappa_T * sq(sobolev_norm(hatm, 0));
  const double tE3 = -p.kappa_M * sq(sobolev_norm(spm.psi2, 1));
  const double tE4 = l2_inner(deriv_x(mid.q1), spm.psi1);
  const double rhsE = tE1 + tE2 + tE3 + tE4;
  const double scaleE = std::max({std::abs(lhsE), std::abs(tE1), std::abs(tE2), std::abs(tE3),
                                  std::abs(tE4), tiny});
  const double resE = std::abs(lhsE - rhsE) / scaleE;

  // (4.10) equality form: d/dt (1/2) sum ||q_i||^2
  //   = -(beta+1/2)<d_x psi1, q1> - (beta-1/2)<d_x psi2, q2>
  //     - 2 kT ||A^{1/2}psi_hat||^2 - 2 kT ||psi_hat||^2
  //     - kM ||A psi2||^2 + kM <A psi2, psi_hat>
  //     - nu sum ||A^{(m+1)/2}psi_i||^2 - 2 nu ||A^{m/2}psi_hat||^2
  const double z0 = 0.5 * (sq(sobolev_norm(prev.q1, 0)) + sq(sobolev_norm(prev.q2, 0)));
  const double z1 = 0.5 * (sq(sobolev_norm(next.q1, 0)) + sq(sobolev_norm(next.q2, 0)));
  const double lhsZ = (z1 - z0) / dt;
  const double tZ1 = -(p.beta + 0.5) * l2_inner(deriv_x(spm.psi1), mid.q1);
  const double tZ2 = -(p.beta - 0.5) * l2_inner(deriv_x(spm.psi2), mid.q2);
  const double tZ3 = -2.0 * p.kappa_T * sq(sobolev_norm(hatm, 1));
  const double tZ4 = -2.0 * p.kappa_T * sq(sobolev_norm(hatm, 0));
  const double tZ5 = -p.kappa_M * sq(sobolev_norm(spm.psi2, 2));
  const double tZ6 = p.kappa_M * l2_inner(apply_fractional_power(spm.psi2, 2.0), hatm);
  const double tZ7 =
      -p.nu * (sq(sobolev_norm(spm.psi1, p.m + 1)) + sq(sobolev_norm(spm.psi2, p.m + 1)));
  const double tZ8 = -2.0 * p.nu * sq(sobolev_norm(hatm, p.m));
  const double rhsZ = tZ1 + tZ2 + tZ3 + tZ4 + tZ5 + tZ6 + tZ7 + tZ8;
  const double scaleZ =
      std::max({std::abs(lhsZ), std::abs(tZ1), std::abs(tZ2), std::abs(tZ3), std::abs(tZ4),
                std::abs(tZ5), std::abs(tZ6), std::abs(tZ7), std::abs(tZ8), tiny});
  const double resZ = std::abs(lhsZ - rhsZ) / scaleZ;

  return std::max(resE, resZ);
}

// ---- profiles & averages ----------------------------------------------------------------

ZonalProfiles zonal_mean_profiles(const LayerState& s) {
  const Lattice& lat = s.lattice();
  const StreamPair p = invert_pv(s);
  ZonalProfiles z;
  z.y.resize(lat.N);
  z.u1.assign(lat.N, 0.0);
  z.u2.assign(lat.N, 0.0);
  for (int j = 0; j < lat.N; ++j) z.y[j] = -0.5 * lat.L + lat.L * j / lat.N;
  // x-average keeps only k1 = 0; u = -d/dy psi
  for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
    if (k2 == 0) continue;
    const cplx f1 = -cplx{0.0, lat.wavenumber(k2)} * p.psi1.at(0, k2);
    const cplx f2 = -cplx{0.0, lat.wavenumber(k2)} * p.psi2.at(0, k2);
    for (int j = 0; j < lat.N; ++j) {
      const double th = 2.0 * pi * k2 * z.y[j] / lat.L;
      const cplx ph{std::cos(th), std::sin(th)};
      z.u1[j] += (f1 * ph).real();
      z.u2[j] += (f2 * ph).real();
    }
  }
  return z;
}

std::string zonal_csv(const ZonalProfiles& z) {
  std::string s = "y,u1,u2\n";
  for (std::size_t j = 0; j < z.y.size(); ++j)
    s += fmt(z.y[j]) + "," + fmt(z.u1[j]) + "," + fmt(z.u2[j]) + "\n";
  return s;
}

double time_average_h1(const std::vector<DiagnosticsRecord>& recs, double t_start) {
  std::vector<const DiagnosticsRecord*> win;
  for (const auto& r : recs)
    if (r.t >= t_start - 1e-12) win.push_back(&r);
  if (win.size() < 2) throw std::invalid_argument("time_average: window has < 2 records");
  double integral = 0.0;
  for (std::size_t i = 1; i < win.size(); ++i)
    integral += 0.5 * (win[i]->h1_q + win[i - 1]->h1_q) * (win[i]->t - win[i - 1]->t);
  const double span = win.back()->t - win.front()->t;
  if (!(span > 0.0)) throw std::invalid_argument("time_average: empty window");
  return integral / span;
}

DiagnosticsRecord diagnostics_record(const LayerState& prev, const LayerState& cur,
                                     const ModelParams& p, double cfl, double dt,
                                     const BackgroundShift* shift) {
  const StreamPair sp = invert_pv(cur);
  const SpectralField hat = baroclinic_part(sp);
  DiagnosticsRecord r;
  r.t = cur.t;
  r.E = shift ? energy_E(cur, *shift) : energy_E(cur);
  r.ke1 = 0.5 * sq(sobolev_norm(sp.psi1, 1));
  r.ke2 = 0.5 * sq(sobolev_norm(sp.psi2, 1));
  r.enstrophy1 = 0.5 * sq(sobolev_norm(cur.q1, 0));
  r.enstrophy2 = 0.5 * sq(sobolev_norm(cur.q2, 0));
  r.baroclinic = sq(sobolev_norm(hat, 0));
  r.W = 2.0 * (r.enstrophy1 + r.enstrophy2) + 2.0 * (r.ke1 + r.ke2) + 2.0 * r.baroclinic;
  r.h1_q = sq(sobolev_norm(cur.q1, 1)) + sq(sobolev_norm(cur.q2, 1));
  r.cfl = cfl;
  r.dt = dt;
  r.odd_residual = odd_residual(cur.q1, cur.q2);
  r.budget_residual = (cur.t > prev.t) ? budget_residual(prev, cur, p) : 0.0;
  return r;
}

}  // namespace qg2l
