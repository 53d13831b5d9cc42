#include "qg2l/transforms.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace qg2l {

// FFTW planning is not reentrant; the solver is single-threaded by design (documented), so
// plans are created with FFTW_ESTIMATE for run-to-run determinism.

GridTransform::GridTransform(int P) : P_(P) {
  if (P < 3) throw std::invalid_argument("transform: grid size too small");
  real_ = fftw_alloc_real(static_cast<std::size_t>(P) * P);
  half_ = fftw_alloc_complex(static_cast<std::size_t>(P) * (P / 2 + 1));
  auto* h = static_cast<fftw_complex*>(half_);
  plan_c2r_ = fftw_plan_dft_c2r_2d(P, P, h, real_, FFTW_ESTIMATE);
  plan_r2c_ = fftw_plan_dft_r2c_2d(P, P, real_, h, FFTW_ESTIMATE);
  if (!plan_c2r_ || !plan_r2c_) throw std::runtime_error("transform: fftw plan failed");
}

GridTransform::~GridTransform() {
  if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
  if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  if (real_) fftw_free(real_);
  if (half_) fftw_free(static_cast<fftw_complex*>(half_));
}

void GridTransform::load_half_spectrum(const SpectralField& u) {
  const Lattice& lat = u.lattice();
  const int K = lat.K;
  if (P_ < 2 * K + 1) throw std::invalid_argument("transform: grid cannot hold the band");
  auto* h = static_cast<fftw_complex*>(half_);
  const int W = P_ / 2 + 1;
  std::memset(h, 0, sizeof(fftw_complex) * static_cast<std::size_t>(P_) * W);
  // r2c half-spectrum stores k2 in [0, P/2]; k2 < 0 is implied by Hermitian symmetry
  for (int k1 = -K; k1 <= K; ++k1) {
    const int p = (k1 + P_) % P_;
    for (int k2 = 0; k2 <= K; ++k2) {
      const cplx v = u.at(k1, k2);
      h[static_cast<std::size_t>(p) * W + k2][0] = v.real();
      h[static_cast<std::size_t>(p) * W + k2][1] = v.imag();
    }
  }
}

void GridTransform::to_grid(const SpectralField& u) {
  load_half_spectrum(u);
  fftw_execute(static_cast<fftw_plan>(plan_c2r_));
}

SpectralField GridTransform::from_grid(const Lattice& lat) {
  const int K = lat.K;
  if (P_ < 2 * K + 1) throw std::invalid_argument("transform: grid cannot hold the band");
  fftw_execute(static_cast<fftw_plan>(plan_r2c_));
  auto* h = static_cast<fftw_complex*>(half_);
  const int W = P_ / 2 + 1;
  const double inv = 1.0 / (static_cast<double>(P_) * P_);
  SpectralField u(lat);
  for (int k1 = -K; k1 <= K; ++k1) {
    const int p = (k1 + P_) % P_;
    for (int k2 = 0; k2 <= K; ++k2) {
      const std::size_t i = static_cast<std::size_t>(p) * W + k2;
      const cplx v{h[i][0] * inv, h[i][1] * inv};
      u.at(k1, k2) = v;
      if (k2 > 0) u.at(-k1, -k2) = std::conj(v);
    }
  }
  u.zero_mean();
  return u;
}

SpectralField GridTransform::from_grid(const Lattice& lat, const double* g) {
  std::memcpy(real_, g, sizeof(double) * static_cast<std::size_t>(P_) * P_);
  return from_grid(lat);
}

std::vector<double> grid_values(const SpectralField& u) {
  GridTransform t(u.lattice().N);
  t.to_grid(u);
  return std::vector<double>(t.grid(), t.grid() + static_cast<std::size_t>(t.P()) * t.P());
}

}  // namespace qg2l
