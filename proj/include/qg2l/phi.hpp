#pragma once

#include <complex>

namespace qg2l {

// Dense 2x2 complex matrix [[a,b],[c,d]] with just enough algebra for the per-mode
// exponential integrator tables.
struct Mat2 {
  std::complex<double> a{0, 0}, b{0, 0}, c{0, 0}, d{0, 0};

  static Mat2 identity() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }

  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator*(std::complex<double> s) const { return {s * a, s * b, s * c, s * d}; }
  Mat2 operator*(double s) const { return {s * a, s * b, s * c, s * d}; }

  void apply(std::complex<double>& x, std::complex<double>& y) const {
    const std::complex<double> nx = a * x + b * y;
    y = c * x + d * y;
    x = nx;
  }

  double max_abs() const;
  Mat2 inverse() const;
};

// exp(A) and the first three phi functions phi_j(A) = sum_n A^n / (n+j)!, evaluated together
// by Taylor series below norm 1e-2 and scaling-and-squaring (with the phi doubling formulas)
// above it.
struct PhiSet {
  Mat2 e, phi1, phi2, phi3;
};

PhiSet phi_functions(const Mat2& A);
Mat2 expm(const Mat2& A);

}  // namespace qg2l
