#include "qg2l/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "qg2l/transforms.hpp"

namespace qg2l {

static const double NaN = std::numeric_limits<double>::quiet_NaN();

ConstantsLedger constants_ledger(const ModelParams& p, double C, double C_lt) {
  p.validate();
  if (!(C > 0.0) || !(C_lt > 0.0))
    throw std::invalid_argument("bounds: constants C, C_lt must be > 0");
  ConstantsLedger led;
  led.C = C;
  led.C_lt = C_lt;
  const double L = p.L, nu = p.nu, m = p.m, kT = p.kappa_T, kM = p.kappa_M, b = p.beta;
  const double L4 = 1.0 + L * L * L * L;

  led.C2 = std::max({(std::abs(b) + 1.0) * (std::abs(b) + 1.0), 1.0,
                     std::abs(0.5 * kM - 2.0 * kT)});

  if (nu > 0.0) {
    led.C1 = C * L4 * std::pow(L, 2 * m - 4) / nu;
    led.C3 = std::min(kT, nu / (C * std::pow(L, 2 * (m - 1))));
    led.C4 = std::min(nu / (C * L4 * std::pow(L, 2 * (m - 1))), nu / (C * std::pow(L, 2 * m)));
    led.C5 = (b * b + 1.0) + C * L4 * L4 * std::pow(L, 2 * (m - 3)) / nu +
             C * std::pow(L, 2 * m) * std::abs(0.5 * kM - 2.0 * kT);
    led.C6 = std::min(led.C3, led.C4);
  } else {
    led.flags.push_back("nu = 0: dissipation-dependent constants unavailable");
    led.C1 = led.C3 = led.C4 = led.C5 = led.C6 = NaN;
  }

  if (kT > 0.0) {
    led.C7 = C_lt * std::abs(kM * kM / (4.0 * kT) - kM);
  } else {
    led.flags.push_back("kappa_T = 0: C7 and the absorbing-ball radius are undefined");
    led.C7 = NaN;
  }

  if (nu > 0.0 && m > 2.5) {
    try {
      const BackgroundShift bg = build_background(p.L, p.m, p.nu, C);
      led.M = bg.M;
      led.gamma_bar = bg.gamma_bar(kT);
    } catch (const std::invalid_argument& e) {
      led.flags.push_back(std::string("background: ") + e.what());
      led.gamma_bar = NaN;
    }
  } else {
    if (!(m > 2.5)) led.flags.push_back("m <= 5/2: background construction unavailable");
    led.gamma_bar = NaN;
  }

  if (std::isfinite(led.gamma_bar) && led.C6 > 0.0) {
    led.rho_sq = 2.0 * led.gamma_bar * led.C5 / (led.C6 * led.C6);
    led.zeta = zeta_bound(p, led);
  } else {
    if (led.C6 == 0.0)
      led.flags.push_back("C6 = 0: absorbing estimate degenerates (kappa_T = 0?)");
    led.rho_sq = led.zeta = NaN;
  }

  if (std::isfinite(led.zeta) && std::isfinite(led.C7)) {
    const DimensionBound db = dimension_bound(p, led, led.zeta);
    led.B = db.B;
    led.d = db.d;
    led.d_fractal = db.d_fractal;
  } else {
    led.B = led.d = led.d_fractal = NaN;
  }

  led.computable = led.flags.empty();
  return led;
}

double zeta_bound(const ModelParams& p, const ConstantsLedger& led) {
  if (!(p.nu > 0.0) || !(p.m > 2.5))
    throw std::invalid_argument("zeta: requires nu > 0 and m > 5/2");
  const BackgroundShift bg = build_background(p.L, p.m, p.nu, led.C);
  const double gb = bg.gamma_bar(p.kappa_T);
  const double C6 = led.C6;
  if (!(C6 > 0.0)) throw std::invalid_argument("zeta: requires C6 > 0");
  const double L4 = 1.0 + std::pow(p.L, 4.0);
  return led.C * led.C5 * L4 * std::pow(p.L, 2 * (p.m - 2)) / p.nu * (bg.h1_sq + gb / C6);
}

DimensionBound dimension_bound(const ModelParams& p, const ConstantsLedger& led, double zeta) {
  if (!(p.nu > 0.0)) throw std::invalid_argument("dimension: requires nu > 0");
  if (!std::isfinite(led.C7)) throw std::invalid_argument("dimension: C7 undefined");
  if (!(zeta >= 0.0)) throw std::invalid_argument("dimension: zeta must be >= 0");
  const double L = p.L, nu = p.nu, m = p.m, C = led.C;
  const double L4 = 1.0 + L * L * L * L;
  DimensionBound db;
  db.B = L4 * led.C7 * led.C7 * std::pow(L, 4 * m) / (C * nu * nu) +
         C * std::pow(L4, 1.5) * std::pow(L, 4 * m - 4) *
             (zeta + L * L * (std::abs(p.beta) + 1.0) * (std::abs(p.beta) + 1.0)) / (nu * nu);
  const double root = std::pow(db.B, 1.0 / m);
  db.d = std::max(1.0, std::ceil(root));
  db.d_fractal = 2.0 * db.d;
  return db;
}

double lieb_thirring_ratio(
    const std::vector<std::pair<SpectralField, SpectralField>>& family) {
  if (family.empty()) throw std::invalid_argument("lt: empty family");
  const Lattice lat = family.front().first.lattice();
  for (const auto& th : family)
    if (th.first.lattice() != lat || th.second.lattice() != lat)
      throw std::invalid_argument("lt: lattice mismatch in family");

  // orthonormality in the pair inner product, to 1e-10
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i; j < family.size(); ++j) {
      const double g = l2_inner(family[i].first, family[j].first) +
                       l2_inner(family[i].second, family[j].second);
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-10)
        throw std::invalid_argument("lt: family is not orthonormal");
    }

  GridTransform t(lat.N);
  std::vector<double> sum(static_cast<std::size_t>(lat.N) * lat.N, 0.0);
  double collective = 0.0;
  for (const auto& th : family) {
    const StreamPair g = invert_pv(th.first, th.second);
    for (const SpectralField* f : {&g.psi1, &g.psi2}) {
      t.to_grid(apply_fractional_power(*f, 1.0));
      const double* v = t.grid();
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i] * v[i];
      const double h3 = sobolev_norm(*f, 3.0);
      collective += h3 * h3;
    }
  }
  double lhs = 0.0;
  for (double v : sum) lhs = std::max(lhs, v);
  const double rhs = lat.L * std::sqrt(collective);
  if (!(rhs > 0.0)) throw std::invalid_argument("lt: degenerate family");
  return lhs / rhs;
}

std::vector<std::pair<SpectralField, SpectralField>> random_orthonormal_family(
    const Lattice& lat, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("lt: family size must be >= 1");
  // canonical half-lattice representatives, gravest first
  std::vector<std::pair<int, int>> modes;
  for (int k1 = 0; k1 <= lat.K; ++k1)
    for (int k2 = (k1 == 0 ? 1 : -lat.K); k2 <= lat.K; ++k2) modes.emplace_back(k1, k2);
  if (static_cast<std::size_t>(k) > modes.size())
    throw std::invalid_argument("lt: family size exceeds the lattice mode count");
  std::stable_sort(modes.begin(), modes.end(), [&](const auto& a, const auto& b) {
    return lat.mu(a.first, a.second) < lat.mu(b.first, b.second);
  });

  std::mt19937_64 rng(seed);
  // ties at the cutoff share mu exactly; pick the cut members at random within the group
  const double mu_cut = lat.mu(modes[k - 1].first, modes[k - 1].second);
  const auto lo = std::find_if(modes.begin(), modes.end(), [&](const auto& m) {
    return lat.mu(m.first, m.second) == mu_cut;
  });
  const auto hi = std::find_if(lo, modes.end(), [&](const auto& m) {
    return lat.mu(m.first, m.second) != mu_cut;
  });
  std::shuffle(lo, hi, rng);

  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  const double amp = 1.0 / (std::sqrt(2.0) * lat.L);  // unit pair L2 norm for a conjugate pair
  std::vector<std::pair<SpectralField, SpectralField>> fam;
  fam.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const auto [m1, m2] = modes[static_cast<std::size_t>(j)];
    const cplx c = std::polar(amp, angle(rng));
    const double chi = angle(rng);
    std::pair<SpectralField, SpectralField> th{SpectralField(lat), SpectralField(lat)};
    th.first.at(m1, m2) = std::cos(chi) * c;
    th.first.at(-m1, -m2) = std::conj(std::cos(chi) * c);
    th.second.at(m1, m2) = std::sin(chi) * c;
    th.second.at(-m1, -m2) = std::conj(std::sin(chi) * c);
    fam.push_back(std::move(th));
  }
  return fam;
}

std::string ledger_json(const ConstantsLedger& led) {
  nlohmann::ordered_json j;
  j["C"] = led.C;
  j["C_lt"] = led.C_lt;
  if (led.M == std::floor(led.M) && led.M < 9.0e15)
    j["M"] = static_cast<std::int64_t>(led.M);
  else
    j["M"] = led.M;
  j["C1"] = led.C1;
  j["C2"] = led.C2;
  j["C3"] = led.C3;
  j["C4"] = led.C4;
  j["C5"] = led.C5;
  j["C6"] = led.C6;
  j["C7"] = led.C7;
  j["gamma_bar"] = led.gamma_bar;
  j["rho_sq"] = led.rho_sq;
  j["zeta"] = led.zeta;
  j["B"] = led.B;
  j["d"] = led.d;
  j["d_fractal"] = led.d_fractal;
  j["computable"] = led.computable;
  j["flags"] = led.flags;
  return j.dump(2);
}

}  // namespace qg2l
