#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qg2l/diagnostics.hpp"
#include "qg2l/model.hpp"

namespace qg2l {

// Every constant of the long-time theory in one auditable record.  C is the absolute
// constant left unspecified by the estimates (caller-supplied, default 1); C_lt is the
// Lieb-Thirring constant entering C7.  When a constant's hypothesis fails (nu = 0,
// kappa_T = 0, m <= 5/2) the dependent entries are NaN, `computable` is false and `flags`
// says why; consumers treat that as a flagged report, not an error.
struct ConstantsLedger {
  double C = 1.0, C_lt = 1.0;
  double M = 0;                // background modes, Eq. (5.12); huge at physical parameters
  double C1 = 0;               // C (1+L^4) L^{2m-4} / nu                       (4.5)
  double C2 = 0;               // max{(|beta|+1)^2, 1, |kM/2 - 2 kT|}           (4.12)
  double C3 = 0;               // min{kT, nu / (C L^{2(m-1)})}                  (5.18)
  double C4 = 0;               // min{nu/(C(1+L^4)L^{2(m-1)}), nu/(C L^{2m})}   (5.23)
  double C5 = 0;               // (beta^2+1) + C(1+L^4)^2 L^{2(m-3)}/nu + C L^{2m}|kM/2-2kT| (5.24)
  double C6 = 0;               // min{C3, C4}
  double C7 = 0;               // C_lt |kM^2/(4 kT) - kM|                       (6.21)
  double gamma_bar = 0;        // (5.19)
  double rho_sq = 0;           // radius^2 of the absorbing ball, 2 gamma_bar C5 / C6^2 (5.30)
  double zeta = 0;             // time-average bound (5.31)/(6.27)
  double B = 0;                // dimension functional (6.31)
  double d = 0;                // ceil(B^{1/m}), floored at 1 (integer-valued while B^{1/m} < 2^53)
  double d_fractal = 0;        // 2 d
  bool computable = true;
  std::vector<std::string> flags;
};

ConstantsLedger constants_ledger(const ModelParams& p, double C = 1.0, double C_lt = 1.0);

// zeta = C C5 (1+L^4) L^{2(m-2)} / nu * (||A^{1/2} psi_bar||^2 + gamma_bar / C6)
double zeta_bound(const ModelParams& p, const ConstantsLedger& led);

struct DimensionBound {
  double B = 0, d = 0, d_fractal = 0;
};
// B per (6.31) from the ledger's C and C7; d the smallest integer with B^{1/m} <= d (>= 1)
DimensionBound dimension_bound(const ModelParams& p, const ConstantsLedger& led, double zeta);

// Empirical check of Lemma 8.1: for a family {theta_j} orthonormal in the L^2 pair inner
// product (verified to 1e-10), solve (8.2) gamma_j = R theta_j (= invert_pv) and return
//   sup_x sum_j |A^{1/2} gamma_j(x)|^2  /  ( L * (sum_j ||A^{3/2} gamma_j||^2)^{1/2} ).
double lieb_thirring_ratio(const std::vector<std::pair<SpectralField, SpectralField>>& family);

// Random orthonormal family of size k covering the k gravest wavevectors (ties at the
// cutoff broken at random), one single-mode pair per member with random phase and layer
// mix.  The ratio above depends only on the span of the family (both sums are invariant
// under orthogonal rotations of the members), so the low-mode spans are the ones the
// inequality is about; dense random spans sit far below the bound and are not probed here.
std::vector<std::pair<SpectralField, SpectralField>> random_orthonormal_family(
    const Lattice& lat, int k, std::uint64_t seed);

std::string ledger_json(const ConstantsLedger& led);

}  // namespace qg2l
