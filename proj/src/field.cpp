#include "qg2l/field.hpp"

#include <cmath>
#include <stdexcept>

namespace qg2l {

static void check_same(const SpectralField& a, const SpectralField& b) {
  if (a.lattice() != b.lattice()) throw std::invalid_argument("field: lattice mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

void enforce_hermitian(SpectralField& u) {
  const int K = u.lattice().K;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
      const cplx h = 0.5 * (u.at(k1, k2) + std::conj(u.at(-k1, -k2)));
      u.at(k1, k2) = h;
      u.at(-k1, -k2) = std::conj(h);
    }
  u.zero_mean();
}

double hermitian_residual(const SpectralField& u) {
  const int K = u.lattice().K;
  double num = 0.0, den = 0.0;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      den += std::norm(u.at(k1, k2));
      num += std::norm(u.at(k1, k2) - std::conj(u.at(-k1, -k2)));
    }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

SpectralField apply_fractional_power(const SpectralField& u, double s) {
  const Lattice& lat = u.lattice();
  SpectralField r(lat);
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      r.at(k1, k2) = std::pow(lat.kmag(k1, k2), s) * u.at(k1, k2);
    }
  return r;
}

double sobolev_norm(const SpectralField& u, double s) {
  const Lattice& lat = u.lattice();
  double sum = 0.0;
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const double w = (s == 0.0) ? 1.0 : std::pow(lat.mu(k1, k2), s);
      sum += w * std::norm(u.at(k1, k2));
    }
  return lat.L * std::sqrt(sum);
}

double l2_inner(const SpectralField& u, const SpectralField& v) {
  check_same(u, v);
  const Lattice& lat = u.lattice();
  double sum = 0.0;
  const cplx* a = u.data();
  const cplx* b = v.data();
  for (std::size_t i = 0; i < u.size(); ++i)
    sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return lat.L * lat.L * sum;
}

SpectralField deriv_x(const SpectralField& u) {
  const Lattice& lat = u.lattice();
  SpectralField r(lat);
  for (int k1 = -lat.K; k1 <= lat.K; ++k1) {
    const cplx iw{0.0, lat.wavenumber(k1)};
    for (int k2 = -lat.K; k2 <= lat.K; ++k2) r.at(k1, k2) = iw * u.at(k1, k2);
  }
  return r;
}

SpectralField deriv_y(const SpectralField& u) {
  const Lattice& lat = u.lattice();
  SpectralField r(lat);
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2)
      r.at(k1, k2) = cplx{0.0, lat.wavenumber(k2)} * u.at(k1, k2);
  return r;
}

SpectralField project_odd_y(const SpectralField& u) {
  const Lattice& lat = u.lattice();
  SpectralField r(lat);
  for (int k1 = -lat.K; k1 <= lat.K; ++k1)
    for (int k2 = -lat.K; k2 <= lat.K; ++k2)
      r.at(k1, k2) = 0.5 * (u.at(k1, k2) - u.at(k1, -k2));
  r.zero_mean();
  return r;
}

static double even_part_sq(const SpectralField& u) {
  const int K = u.lattice().K;
  double s = 0.0;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      s += std::norm(0.5 * (u.at(k1, k2) + u.at(k1, -k2)));
    }
  return s;
}

static double total_sq(const SpectralField& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::norm(u.data()[i]);
  return s;
}

double odd_residual(const SpectralField& u) {
  const double tot = total_sq(u);
  return tot > 0.0 ? std::sqrt(even_part_sq(u) / tot) : 0.0;
}

double odd_residual(const SpectralField& u1, const SpectralField& u2) {
  const double tot = total_sq(u1) + total_sq(u2);
  return tot > 0.0 ? std::sqrt((even_part_sq(u1) + even_part_sq(u2)) / tot) : 0.0;
}

double max_abs_coeff(const SpectralField& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u.data()[i]));
  return m;
}

bool all_finite(const SpectralField& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const cplx v = u.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace qg2l
