#pragma once

#include <complex>
#include <vector>

#include "qg2l/lattice.hpp"

namespace qg2l {

using cplx = std::complex<double>;

// Zero-mean scalar field stored as Fourier coefficients u_k for k in [-K,K]^2, row-major in
// k1 then k2 (index (k1+K)*(2K+1) + (k2+K)).  Real fields satisfy u_{-k} = conj(u_k); the
// mean coefficient u_0 is identically zero.  All reported norms use the physical measure:
// ||u||_{L2}^2 = L^2 * sum_k |u_k|^2 (Parseval factor L^2, written to snapshot sidecars).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Lattice& lat) : lat_(lat), c_(lat.coeff_count(), cplx{0.0, 0.0}) {}

  const Lattice& lattice() const { return lat_; }
  std::size_t size() const { return c_.size(); }

  cplx& at(int k1, int k2) { return c_[index(k1, k2)]; }
  const cplx& at(int k1, int k2) const { return c_[index(k1, k2)]; }
  cplx* data() { return c_.data(); }
  const cplx* data() const { return c_.data(); }

  std::size_t index(int k1, int k2) const {
    return static_cast<std::size_t>(k1 + lat_.K) * lat_.modes_per_axis() + (k2 + lat_.K);
  }

  void zero_mean() { c_[index(0, 0)] = cplx{0.0, 0.0}; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

 private:
  Lattice lat_;
  std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// u_k := (u_k + conj(u_{-k}))/2 and u_0 := 0; idempotent, makes the grid values real.
void enforce_hermitian(SpectralField& u);
double hermitian_residual(const SpectralField& u);

// Multiply coefficients by (2*pi*|k|/L)^s, i.e. apply A^{s/2}; the zero mode stays zero.
SpectralField apply_fractional_power(const SpectralField& u, double s);

// || A^{s/2} u ||_{L2} = (L^2 sum_k (2*pi*|k|/L)^{2s} |u_k|^2)^{1/2}
double sobolev_norm(const SpectralField& u, double s);

// L2(Omega) inner product Re <u, v> = L^2 Re sum_k u_k conj(v_k)
double l2_inner(const SpectralField& u, const SpectralField& v);

// d/dx and d/dy: multiply by (2*pi*i*k_i/L)
SpectralField deriv_x(const SpectralField& u);
SpectralField deriv_y(const SpectralField& u);

// Projection onto fields odd in y: u_k := (u_{(k1,k2)} - u_{(k1,-k2)})/2; kills all k2 = 0
// modes and is idempotent.
SpectralField project_odd_y(const SpectralField& u);

// ||even part|| / ||u|| (0 for the zero field)
double odd_residual(const SpectralField& u);
double odd_residual(const SpectralField& u1, const SpectralField& u2);

double max_abs_coeff(const SpectralField& u);
bool all_finite(const SpectralField& u);

}  // namespace qg2l
