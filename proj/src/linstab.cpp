#include "qg2l/linstab.hpp"

#include <cmath>
#include <stdexcept>

namespace qg2l {

std::pair<cplx, cplx> LinearBlock::eigenvalues() const {
  const cplx t = trace();
  const cplx s = std::sqrt(discriminant());
  return {0.5 * (t - s), 0.5 * (t + s)};
}

LinearBlock linear_block(int k1, int k2, const ModelParams& p) {
  p.validate();
  if (k1 == 0 && k2 == 0) throw std::invalid_argument("linstab: k = 0 excluded");
  const auto [alpha, gamma] = inversion_coefficients(k1, k2, p.L);
  const double w = 2.0 * pi * k1 / p.L;
  const double mu = (2.0 * pi / p.L) * (2.0 * pi / p.L) *
                    (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  const double diss = p.nu * std::pow(mu, p.m);  // nu * (2 pi |k| / L)^{2m}
  const double relax = 0.5 * p.kappa_T * (alpha - gamma);
  const double drag = p.kappa_M * mu;
  const cplx iw{0.0, w};

  LinearBlock blk;
  blk.a = -iw * (1.0 - (p.beta + 0.5) * alpha) - relax - diss * alpha;
  blk.b = iw * (p.beta + 0.5) * gamma + relax - diss * gamma;
  blk.c = iw * (p.beta - 0.5) * gamma + relax - drag * gamma - diss * gamma;
  blk.d = iw * (p.beta - 0.5) * alpha - relax - drag * alpha - diss * alpha;
  return blk;
}

double growth_rate(int k1, int k2, const ModelParams& p) {
  const auto [lm, lp] = linear_block(k1, k2, p).eigenvalues();
  return std::max(lm.real(), lp.real());
}

double discriminant_closed_form(int k1, int k2, const ModelParams& p) {
  if (p.kappa_T != 0.0 || p.kappa_M != 0.0 || p.nu != 0.0)
    throw std::invalid_argument("closed-form discriminant requires the inviscid case");
  const auto [alpha, gamma] = inversion_coefficients(k1, k2, p.L);
  (void)alpha;
  const double w = 2.0 * pi * k1 / p.L;
  const double mu = (2.0 * pi / p.L) * (2.0 * pi / p.L) *
                    (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  const double band = (1.0 - 4.0 * p.beta * p.beta) - (2.0 * mu * mu - 1.0) * (2.0 * mu * mu - 1.0);
  return w * w * gamma * gamma * band;
}

ModeEigen dominant_mode(const LinearBlock& blk) {
  const auto [lm, lp] = blk.eigenvalues();
  const cplx lambda = (lp.real() >= lm.real()) ? lp : lm;
  // rows of (M - lambda I) are proportional; the eigenvector is orthogonal to either row
  cplx v1 = blk.b, v2 = lambda - blk.a;
  const cplx w1 = lambda - blk.d, w2 = blk.c;
  if (std::abs(w1) + std::abs(w2) > std::abs(v1) + std::abs(v2)) {
    v1 = w1;
    v2 = w2;
  }
  const double n = std::sqrt(std::norm(v1) + std::norm(v2));
  if (n == 0.0) return {lambda, cplx{1.0, 0.0}, cplx{0.0, 0.0}};  // lambda I block
  return {lambda, v1 / n, v2 / n};
}

ScanResult instability_scan(const ModelParams& p, int K) {
  if (K < 1) throw std::invalid_argument("linstab: K must be >= 1");
  ScanResult res;
  res.rows.reserve(static_cast<std::size_t>(2 * K + 1) * (2 * K + 1) - 1);
  double best = -1e300;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const LinearBlock blk = linear_block(k1, k2, p);
      const auto [lm, lp] = blk.eigenvalues();
      const cplx lam = (lp.real() >= lm.real()) ? lp : lm;
      const auto [alpha, gamma] = inversion_coefficients(k1, k2, p.L);
      res.rows.push_back({k1, k2, lam.real(), lam.imag(), blk.discriminant().real(), alpha, gamma});
      if (lam.real() > best) {
        best = lam.real();
        res.argmax = res.rows.size() - 1;
      }
    }
  const ScanRow& r = res.rows[res.argmax];
  res.sigma_star = r.re_lambda_max;
  res.k1_star = r.k1;
  res.k2_star = r.k2;
  return res;
}

}  // namespace qg2l
