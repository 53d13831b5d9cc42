#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace qg2l {

inline constexpr double pi = 3.14159265358979323846;

// Square periodic domain of side L, spectral truncation |k_i| <= K, N x N collocation grid.
// Physical wavenumber of integer mode k is 2*pi*k/L; the mean mode k=0 is excluded from all
// dynamics (fields are zero-mean).
struct Lattice {
  double L = 1.0;
  int K = 0;
  int N = 0;

  int modes_per_axis() const { return 2 * K + 1; }
  std::size_t coeff_count() const {
    return static_cast<std::size_t>(modes_per_axis()) * modes_per_axis();
  }
  double dx() const { return L / N; }
  // physical wavenumber component
  double wavenumber(int k) const { return 2.0 * pi * k / L; }
  // mu = (2*pi*|k|/L)^2, the eigenvalue of A = -Laplacian on mode k
  double mu(int k1, int k2) const {
    const double f = 2.0 * pi / L;
    return f * f * (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  }
  double kmag(int k1, int k2) const { return std::sqrt(mu(k1, k2)); }

  bool operator==(const Lattice& o) const { return L == o.L && K == o.K && N == o.N; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }
};

// Smallest 5-smooth (factors 2,3,5 only) integer >= n; FFT-friendly padded transform sizes.
inline int next_fft_size(int n) {
  auto smooth = [](int v) {
    for (int p : {2, 3, 5})
      while (v % p == 0) v /= p;
    return v == 1;
  };
  while (!smooth(n)) ++n;
  return n;
}

// Padded transform size for exactly dealiased quadratic products: modes |k_i| <= K interact
// into |k_i| <= 2K, and a grid of size >= 3K+1 keeps every alias image outside the retained
// band (3K exactly still aliases the corner k1+k2 = +-2K onto -+K).
inline int dealias_grid_size(int K) { return next_fft_size(3 * K + 1); }

inline Lattice wavenumber_lattice(double L, int K, int N = 0) {
  if (!(L >= 1.0)) throw std::invalid_argument("lattice: L must be >= 1");
  if (K < 1) throw std::invalid_argument("lattice: K must be >= 1");
  if (N == 0) N = 3 * K;
  if (N < 3 * K) throw std::invalid_argument("lattice: N must be >= 3K");
  return Lattice{L, K, N};
}

}  // namespace qg2l
