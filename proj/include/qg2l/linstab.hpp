#pragma once

#include <complex>
#include <vector>

#include "qg2l/model.hpp"
#include "qg2l/pv_inversion.hpp"

namespace qg2l {

// Per-mode linearization about the zero state: d/dt (q1_k, q2_k) = M_k (q1_k, q2_k) with
//   a = -i w (1 - (beta+1/2) alpha) - (kT/2)(alpha-gamma) - nu mu^m alpha
//   b =  i w (beta+1/2) gamma       + (kT/2)(alpha-gamma) - nu mu^m gamma
//   c =  i w (beta-1/2) gamma       + (kT/2)(alpha-gamma) - kM mu gamma - nu mu^m gamma
//   d =  i w (beta-1/2) alpha       - (kT/2)(alpha-gamma) - kM mu alpha - nu mu^m alpha
// where w = 2 pi k1 / L and mu = (2 pi |k| / L)^2.
struct LinearBlock {
  cplx a, b, c, d;

  cplx trace() const { return a + d; }
  cplx det() const { return a * d - b * c; }
  // full complex discriminant tr^2 - 4 det; its real part is the printed closed form
  cplx discriminant() const {
    const cplx t = trace();
    return t * t - 4.0 * det();
  }
  std::pair<cplx, cplx> eigenvalues() const;
};

LinearBlock linear_block(int k1, int k2, const ModelParams& p);

// max Re of the two eigenvalues, via the exact complex square root of the discriminant
double growth_rate(int k1, int k2, const ModelParams& p);

// inviscid closed form: Delta_k = w^2 gamma_k^2 [(1 - 4 beta^2) - (2 mu^2 - 1)^2]
// valid when kappa_T = kappa_M = nu = 0 (error otherwise)
double discriminant_closed_form(int k1, int k2, const ModelParams& p);

// dominant eigenvalue and its eigenvector (for seeding the nonlinear integrator)
struct ModeEigen {
  cplx lambda;
  cplx v1, v2;  // eigenvector components (q1, q2), normalized |v| = 1
};
ModeEigen dominant_mode(const LinearBlock& blk);

struct ScanRow {
  int k1, k2;
  double re_lambda_max, im_lambda_max, disc_re, alpha, gamma;
};

struct ScanResult {
  std::vector<ScanRow> rows;   // k1 outer, k2 inner, k=0 skipped
  std::size_t argmax = 0;      // index of the row with largest re_lambda_max
  double sigma_star = 0.0;     // max growth rate over the scan
  int k1_star = 0, k2_star = 0;
};

// dense scan over k in [-K,K]^2 \ {0}
ScanResult instability_scan(const ModelParams& p, int K);

}  // namespace qg2l
