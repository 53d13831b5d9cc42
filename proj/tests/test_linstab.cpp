#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qg2l/linstab.hpp"

using namespace qg2l;

namespace {

ModelParams inviscid(double beta, double L) { return ModelParams{beta, 0.0, 0.0, 0.0, 3.0, L}; }

double block_norm(const LinearBlock& b) {
  return std::max({std::abs(b.a), std::abs(b.b), std::abs(b.c), std::abs(b.d)});
}

}  // namespace

TEST_CASE("block entries at the mu = 1 example point") {
  // L = 2 pi, k = (1,0): mu = 1, w = 1, alpha = 3/4, gamma = 1/4
  const double beta = 0.1;
  const LinearBlock b = linear_block(1, 0, inviscid(beta, 2.0 * pi));
  CHECK(b.a.real() == 0.0);  // real parts vanish inviscid
  CHECK(b.a.imag() == doctest::Approx(-(1.0 - (beta + 0.5) * 0.75)).epsilon(1e-15));
  CHECK(b.b.imag() == doctest::Approx((beta + 0.5) * 0.25).epsilon(1e-15));
  CHECK(b.c.imag() == doctest::Approx((beta - 0.5) * 0.25).epsilon(1e-15));
  CHECK(b.d.imag() == doctest::Approx((beta - 0.5) * 0.75).epsilon(1e-15));

  // damping terms move the real parts exactly as written
  ModelParams p = inviscid(beta, 2.0 * pi);
  p.kappa_T = 0.02;
  p.kappa_M = 0.06;
  p.nu = 1e-3;
  const LinearBlock d = linear_block(1, 0, p);
  const double am = 0.5;  // alpha - gamma = 1/(mu+1)
  CHECK(d.a.real() == doctest::Approx(-0.01 * am - 1e-3 * 0.75).epsilon(1e-12));
  CHECK(d.b.real() == doctest::Approx(0.01 * am - 1e-3 * 0.25).epsilon(1e-12));
  CHECK(d.c.real() == doctest::Approx(0.01 * am - 0.06 * 0.25 - 1e-3 * 0.25).epsilon(1e-12));
  CHECK(d.d.real() == doctest::Approx(-0.01 * am - 0.06 * 0.75 - 1e-3 * 0.75).epsilon(1e-12));
  // the advective imaginary parts are untouched by damping
  CHECK(d.a.imag() == b.a.imag());
  CHECK(d.d.imag() == b.d.imag());
}

TEST_CASE("eigenvalues satisfy the characteristic polynomial") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ub(-1.0, 1.0), ud(0.0, 0.1), uL(1.0, 12.0);
  std::uniform_int_distribution<int> uk(-6, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const ModelParams p{ub(rng), ud(rng), ud(rng), ud(rng) * 1e-3, 3.0, uL(rng)};
    int k1 = uk(rng), k2 = uk(rng);
    if (k1 == 0 && k2 == 0) k1 = 1;
    const LinearBlock b = linear_block(k1, k2, p);
    const auto [l1, l2] = b.eigenvalues();
    const double scale = std::max(1.0, block_norm(b));
    CHECK(std::abs(l1 + l2 - b.trace()) / scale < 1e-13);
    CHECK(std::abs(l1 * l2 - b.det()) / (scale * scale) < 1e-13);
    // each root annihilates lambda^2 - tr lambda + det
    for (const cplx l : {l1, l2})
      CHECK(std::abs(l * l - b.trace() * l + b.det()) / (scale * scale) < 1e-12);
    CHECK(growth_rate(k1, k2, p) ==
          doctest::Approx(std::max(l1.real(), l2.real())).epsilon(1e-15));
  }
}

TEST_CASE("dominant eigenvector solves the block to roundoff") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ub(-1.0, 1.0), ud(0.0, 0.05), uL(1.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelParams p{ub(rng), ud(rng), ud(rng), ud(rng) * 1e-2, 3.0, uL(rng)};
    const LinearBlock b = linear_block(1 + trial % 3, trial % 2, p);
    const ModeEigen e = dominant_mode(b);
    CHECK(std::abs(e.v1) * std::abs(e.v1) + std::abs(e.v2) * std::abs(e.v2) ==
          doctest::Approx(1.0).epsilon(1e-13));
    const cplx r1 = b.a * e.v1 + b.b * e.v2 - e.lambda * e.v1;
    const cplx r2 = b.c * e.v1 + b.d * e.v2 - e.lambda * e.v2;
    const double scale = std::max(1.0, block_norm(b));
    CHECK(std::abs(r1) / scale < 1e-12);
    CHECK(std::abs(r2) / scale < 1e-12);
  }
}

TEST_CASE("reflection symmetries of the growth rate") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ub(-1.0, 1.0), ud(0.0, 0.1), uL(1.0, 12.0);
  std::uniform_int_distribution<int> uk(-8, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelParams p{ub(rng), ud(rng), ud(rng), ud(rng) * 1e-3, 3.0, uL(rng)};
    int k1 = uk(rng), k2 = uk(rng);
    if (k1 == 0 && k2 == 0) k2 = 2;
    const double s = growth_rate(k1, k2, p);
    CHECK(growth_rate(-k1, -k2, p) == doctest::Approx(s).epsilon(1e-13));
    CHECK(growth_rate(k1, -k2, p) == doctest::Approx(s).epsilon(1e-13));
  }
}

TEST_CASE("zonal modes are neutral inviscid and damped otherwise") {
  for (int k2 : {1, 2, 5}) {
    CHECK(growth_rate(0, k2, inviscid(0.3, 7.0)) == 0.0);
    ModelParams p = inviscid(0.3, 7.0);
    p.kappa_T = 0.01;
    p.nu = 1e-4;
    CHECK(growth_rate(0, k2, p) < 0.0);
  }
}

TEST_CASE("closed-form discriminant against the exact eigensolve") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ub(-1.2, 1.2), uL(1.0, 12.0);
  std::uniform_int_distribution<int> uk(-8, 8);
  for (int trial = 0; trial < 400; ++trial) {
    const ModelParams p = inviscid(ub(rng), uL(rng));
    int k1 = uk(rng), k2 = uk(rng);
    if (k1 == 0 && k2 == 0) k1 = 3;
    const double closed = discriminant_closed_form(k1, k2, p);
    const cplx exact = linear_block(k1, k2, p).discriminant();
    const double scale = std::max(1.0, std::abs(exact));
    CHECK(std::abs(exact.real() - closed) / scale < 1e-13);
    CHECK(std::abs(exact.imag()) / scale < 1e-13);  // inviscid discriminant is real
  }
  CHECK_THROWS(discriminant_closed_form(1, 0, ModelParams{0.1, 0.01, 0.0, 0.0, 3.0, 6.0}));
}

TEST_CASE("instability requires |beta| < 1/2 inviscid") {
  for (double beta : {0.5, 0.6, -0.75, 1.0}) {
    for (double L : {2.0, 6.847, 11.0}) {
      const ScanResult scan = instability_scan(inviscid(beta, L), 6);
      CHECK(scan.sigma_star <= 1e-12);
    }
  }
  // and just inside the stable boundary some scale is unstable for suitable L
  const ScanResult scan = instability_scan(inviscid(0.1, 2.0 * pi * std::pow(8.0 / 3.0, 0.25)), 6);
  CHECK(scan.sigma_star > 0.1);
}

TEST_CASE("criterion-2 recipe: only the gravest zonal pair is unstable") {
  const double L = 2.0 * pi * std::pow(8.0 / 3.0, 0.25);
  const ModelParams p{0.1, 1e-6, 1e-6, 1e-6, 3.0, L};
  const ScanResult scan = instability_scan(p, 8);
  CHECK(scan.sigma_star > 0.18);
  CHECK(std::abs(scan.k1_star) == 1);
  CHECK(scan.k2_star == 0);
  for (const ScanRow& r : scan.rows) {
    const bool grave = std::abs(r.k1) == 1 && r.k2 == 0;
    if (!grave) CHECK(r.re_lambda_max < 0.0);
  }
  // hand value of the inviscid rate at the seeded mode: w gamma sqrt(0.96 - 1/16) / 2
  const double mu = std::sqrt(3.0 / 8.0);
  const double w = 2.0 * pi / L;
  const double gamma = 0.5 / (mu * mu + mu);
  const double sigma_inviscid = 0.5 * w * gamma * std::sqrt(0.96 - 1.0 / 16.0);
  CHECK(scan.sigma_star == doctest::Approx(sigma_inviscid).epsilon(1e-4));  // tiny damping shift
}

TEST_CASE("derived neutral-threshold rate at mu^2 = 1/2") {
  // beta = 0 inviscid, L = 2 pi 2^{1/4}: mu = 2^{-1/2} at k=(1,0), Delta = w^2 gamma^2,
  // growth = w gamma / 2 = (2^{1/4} - 2^{-1/4})/2
  const double L = 2.0 * pi * std::pow(2.0, 0.25);
  const double want = 0.5 * (std::pow(2.0, 0.25) - std::pow(2.0, -0.25));
  const double sigma = growth_rate(1, 0, inviscid(0.0, L));
  CHECK(sigma == doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(0.174155).epsilon(1e-5));
  // closed form route agrees with the eigensolve route
  const double disc = discriminant_closed_form(1, 0, inviscid(0.0, L));
  CHECK(0.5 * std::sqrt(disc) == doctest::Approx(sigma).epsilon(1e-13));
}

TEST_CASE("scan layout: every mode once, argmax flagged, coefficient columns faithful") {
  const ModelParams p{0.2, 0.01, 0.02, 1e-5, 3.0, 9.0};
  const int K = 5;
  const ScanResult scan = instability_scan(p, K);
  const int n = 2 * K + 1;
  CHECK(scan.rows.size() == static_cast<std::size_t>(n * n - 1));

  std::size_t idx = 0;
  double best = -1e300;
  std::size_t best_idx = 0;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const ScanRow& r = scan.rows[idx];
      CHECK(r.k1 == k1);
      CHECK(r.k2 == k2);
      const LinearBlock b = linear_block(k1, k2, p);
      const auto [l1, l2] = b.eigenvalues();
      CHECK(r.re_lambda_max == doctest::Approx(std::max(l1.real(), l2.real())).epsilon(1e-14));
      CHECK(r.disc_re == doctest::Approx(b.discriminant().real()).epsilon(1e-14));
      const InversionCoefficients c = inversion_coefficients(k1, k2, p.L);
      CHECK(r.alpha == doctest::Approx(c.alpha).epsilon(1e-15));
      CHECK(r.gamma == doctest::Approx(c.gamma).epsilon(1e-15));
      if (r.re_lambda_max > best) {
        best = r.re_lambda_max;
        best_idx = idx;
      }
      ++idx;
    }
  CHECK(scan.argmax == best_idx);
  CHECK(scan.sigma_star == doctest::Approx(best).epsilon(1e-15));
  CHECK(scan.k1_star == scan.rows[best_idx].k1);
  CHECK(scan.k2_star == scan.rows[best_idx].k2);
}
