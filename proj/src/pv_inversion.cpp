#include "qg2l/pv_inversion.hpp"

namespace qg2l {

InversionCoefficients inversion_coefficients(int k1, int k2, double L) {
  if (k1 == 0 && k2 == 0) throw std::invalid_argument("inversion: k = 0 excluded");
  const double f = 2.0 * pi / L;
  const double mu = f * f * (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  const double den = mu * mu + mu;
  return {(mu + 0.5) / den, 0.5 / den};
}

StreamPair invert_pv(const SpectralField& q1, const SpectralField& q2) {
  if (q1.lattice() != q2.lattice()) throw std::invalid_argument("inversion: lattice mismatch");
  const Lattice& lat = q1.lattice();
  StreamPair p{SpectralField(lat), SpectralField(lat)};
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const auto [alpha, gamma] = inversion_coefficients(k1, k2, lat.L);
      const cplx a = q1.at(k1, k2), b = q2.at(k1, k2);
      p.psi1.at(k1, k2) = -alpha * a - gamma * b;
      p.psi2.at(k1, k2) = -gamma * a - alpha * b;
    }
  return p;
}

StreamPair invert_pv(const LayerState& s) { return invert_pv(s.q1, s.q2); }

std::pair<SpectralField, SpectralField> pv_from_streamfunction(const SpectralField& psi1,
                                                               const SpectralField& psi2) {
  if (psi1.lattice() != psi2.lattice())
    throw std::invalid_argument("inversion: lattice mismatch");
  const Lattice& lat = psi1.lattice();
  SpectralField q1(lat), q2(lat);
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const double mu = lat.mu(k1, k2);
      const cplx p1 = psi1.at(k1, k2), p2 = psi2.at(k1, k2);
      const cplx hat = 0.5 * (p1 - p2);
      q1.at(k1, k2) = -mu * p1 - hat;
      q2.at(k1, k2) = -mu * p2 + hat;
    }
  return {std::move(q1), std::move(q2)};
}

SpectralField baroclinic_part(const StreamPair& p) {
  SpectralField h = p.psi1;
  h -= p.psi2;
  h *= 0.5;
  return h;
}

}  // namespace qg2l
