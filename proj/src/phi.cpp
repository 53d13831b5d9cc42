#include "qg2l/phi.hpp"

#include <cmath>
#include <stdexcept>

namespace qg2l {

double Mat2::max_abs() const {
  return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
}

Mat2 Mat2::inverse() const {
  const std::complex<double> det = a * d - b * c;
  if (std::abs(det) == 0.0) throw std::runtime_error("mat2: singular");
  const std::complex<double> i = 1.0 / det;
  return {d * i, -b * i, -c * i, a * i};
}

// Taylor series for exp and phi_1..3 at small argument; terms fall by ||B|| <= 1e-2 each, so
// a fixed 12 terms reach well below double roundoff.
static PhiSet phi_series(const Mat2& B) {
  const Mat2 I = Mat2::identity();
  PhiSet s{I, I, I * 0.5, I * (1.0 / 6.0)};
  Mat2 term = I;  // B^n / n!
  for (int n = 1; n <= 12; ++n) {
    term = term * B;
    term = term * (1.0 / n);
    s.e = s.e + term;
    s.phi1 = s.phi1 + term * (1.0 / (n + 1));
    s.phi2 = s.phi2 + term * (1.0 / ((n + 1.0) * (n + 2.0)));
    s.phi3 = s.phi3 + term * (1.0 / ((n + 1.0) * (n + 2.0) * (n + 3.0)));
  }
  return s;
}

PhiSet phi_functions(const Mat2& A) {
  const double norm = A.max_abs();
  if (!std::isfinite(norm)) throw std::invalid_argument("phi: non-finite matrix");
  int s = 0;
  if (norm > 1e-2) s = static_cast<int>(std::ceil(std::log2(norm / 1e-2)));
  if (s > 80) throw std::invalid_argument("phi: matrix norm too large");
  PhiSet r = phi_series(A * std::ldexp(1.0, -s));
  const Mat2 I = Mat2::identity();
  for (int j = 0; j < s; ++j) {
    // doubling: phi3(2A) = (phi2*(phi1+I) + 2 phi3)/8, phi2(2A) = (phi1^2 + 2 phi2)/4,
    //           phi1(2A) = (e+I)*phi1/2, e(2A) = e^2   (order matters: use old values)
    const Mat2 p3 = (r.phi2 * (r.phi1 + I) + r.phi3 * 2.0) * 0.125;
    const Mat2 p2 = (r.phi1 * r.phi1 + r.phi2 * 2.0) * 0.25;
    const Mat2 p1 = ((r.e + I) * r.phi1) * 0.5;
    r.e = r.e * r.e;
    r.phi1 = p1;
    r.phi2 = p2;
    r.phi3 = p3;
  }
  return r;
}

Mat2 expm(const Mat2& A) { return phi_functions(A).e; }

}  // namespace qg2l
