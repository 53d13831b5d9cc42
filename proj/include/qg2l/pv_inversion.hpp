#pragma once

#include <utility>

#include "qg2l/field.hpp"

namespace qg2l {

// Prognostic state: layer potential vorticities and time.
struct LayerState {
  SpectralField q1, q2;
  double t = 0.0;

  LayerState() = default;
  LayerState(const Lattice& lat, double t0 = 0.0) : q1(lat), q2(lat), t(t0) {}
  const Lattice& lattice() const { return q1.lattice(); }
};

// Streamfunction pair: psi1, psi2 with psi_hat = (psi1 - psi2)/2.
struct StreamPair {
  SpectralField psi1, psi2;
};

// Per-mode inversion weights for q = -A psi -+ psi_hat:
//   alpha_k = (mu + 1/2)/(mu^2 + mu),  gamma_k = (1/2)/(mu^2 + mu),  mu = (2 pi |k| / L)^2.
// Identities: alpha + gamma = 1/mu, 0 < alpha - gamma = 1/(mu+1) < 1.
struct InversionCoefficients {
  double alpha = 0.0;
  double gamma = 0.0;
};

InversionCoefficients inversion_coefficients(int k1, int k2, double L);

// psi1_k = -alpha q1_k - gamma q2_k, psi2_k = -gamma q1_k - alpha q2_k  (mean modes zero)
StreamPair invert_pv(const SpectralField& q1, const SpectralField& q2);
StreamPair invert_pv(const LayerState& s);

// forward map: q1 = -A psi1 - (psi1-psi2)/2, q2 = -A psi2 + (psi1-psi2)/2
std::pair<SpectralField, SpectralField> pv_from_streamfunction(const SpectralField& psi1,
                                                               const SpectralField& psi2);

// psi_hat = (psi1 - psi2)/2
SpectralField baroclinic_part(const StreamPair& p);

}  // namespace qg2l
