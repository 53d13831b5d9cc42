#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qg2l/model.hpp"
#include "qg2l/pv_inversion.hpp"

namespace qg2l {

// One row of the run diagnostics CSV (column order is part of the file format).
struct DiagnosticsRecord {
  double t = 0, E = 0, W = 0;
  double ke1 = 0, ke2 = 0;                  // (1/2) ||A^{1/2} psi_i||^2
  double enstrophy1 = 0, enstrophy2 = 0;    // (1/2) ||q_i||^2
  double baroclinic = 0;                    // ||psi_hat||^2
  double h1_q = 0;                          // ||A^{1/2} q_1||^2 + ||A^{1/2} q_2||^2
  double cfl = 0, dt = 0;
  double odd_residual = 0, budget_residual = 0;
};

std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

// Zonal-mean background shift psi_bar(y) = -(L/pi) sum_{j<=M} sin(2 pi j y / L)/j, the
// term-wise zero-mean antiderivative of psi_bar'(y) = -2 sum_{j<=M} cos(2 pi j y / L).
// M is the smallest positive integer with C L^{2m-4} (1+L^4)^{1/2} M^{5/2-m} < nu/4
// (strict; needs m > 5/2).  Norms are evaluated from the series, not from a lattice, since
// M can be astronomically large at physical parameters; M is held as a double (exact
// integer below 2^53, nearest representable above, where the norms are asymptotic anyway).
struct BackgroundShift {
  double M = 0;
  double L = 1, m = 3, nu = 1, C = 1;
  double l2_sq = 0;   // ||psi_bar||^2
  double h1_sq = 0;   // ||A^{1/2} psi_bar||^2 = 2 L^2 M (exact)
  double hm_sq = 0;   // ||A_y^{m/2} psi_bar||^2

  // Eq. (5.19): gamma_bar = kappa_T ||psi_bar||^2 + 2 nu ||A_y^{m/2} psi_bar||^2
  double gamma_bar(double kappa_T) const { return kappa_T * l2_sq + 2.0 * nu * hm_sq; }

  // Fourier coefficient of psi_bar at mode (0, j), j >= 1:  i L / (2 pi j)
  cplx coeff(int j) const;

  // materializations for tests/inspection (modes j <= min(M, K))
  SpectralField psi_bar_field(const Lattice& lat) const;
  SpectralField q_bar_field(const Lattice& lat) const;
};

BackgroundShift build_background(double L, double m, double nu, double C = 1.0);

// Shifted energy functional (5.16): E = ||A^{1/2} Psi1||^2 + ||A^{1/2} psi2||^2 + 2 ||Psi_hat||^2
// with Psi1 = psi1 - psi_bar, Psi_hat = (Psi1 - psi2)/2; without a shift, Psi1 = psi1.
double energy_E(const LayerState& s);
double energy_E(const LayerState& s, const BackgroundShift& bg);

// W (5.21) = sum ||q_i||^2 + sum ||A^{1/2} psi_i||^2 + 2 ||psi_hat||^2
double energy_W(const LayerState& s);

// Relative residual of the exact energy (4.3) and enstrophy (4.10, pre-Cauchy-Schwarz
// equality form) balances across one step: |dX/dt - RHS(midpoint state)| / max term.
// Returns the worse of the two.  Zero-duration input is an error.
double budget_residual(const LayerState& prev, const LayerState& next, const ModelParams& p);

struct ZonalProfiles {
  std::vector<double> y, u1, u2;  // u_i = -d/dy of the x-averaged psi_i
};
ZonalProfiles zonal_mean_profiles(const LayerState& s);
std::string zonal_csv(const ZonalProfiles& z);

// Trapezoid mean of h1_q over records with t in [t_start, end]; needs >= 2 records there.
double time_average_h1(const std::vector<DiagnosticsRecord>& recs, double t_start);

// Full record assembly for one emission (budget from the (prev, cur) step pair; prev == cur
// at t0 gives budget 0).
DiagnosticsRecord diagnostics_record(const LayerState& prev, const LayerState& cur,
                                     const ModelParams& p, double cfl, double dt,
                                     const BackgroundShift* shift = nullptr);

}  // namespace qg2l
