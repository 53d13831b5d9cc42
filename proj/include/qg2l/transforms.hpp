#pragma once

#include <vector>

#include "qg2l/field.hpp"

namespace qg2l {

// FFTW-backed grid <-> coefficient transforms on a P x P collocation grid (P may exceed the
// lattice N for dealiased products).  Grid points are x_i = i*L/P, y_j = j*L/P; grid storage
// is row-major g[i*P + j].  Coefficients outside the lattice band are zero-padded going to
// the grid and discarded coming back.  The field must be Hermitian (real-valued): transforms
// use the real r2c/c2r pair.
class GridTransform {
 public:
  explicit GridTransform(int P);
  ~GridTransform();
  GridTransform(const GridTransform&) = delete;
  GridTransform& operator=(const GridTransform&) = delete;

  int P() const { return P_; }
  double* grid() { return real_; }           // P*P scratch, result of to_grid
  const double* grid() const { return real_; }

  // inverse DFT of the zero-padded coefficients into grid()
  void to_grid(const SpectralField& u);
  // forward DFT of grid() truncated onto the lattice band; drops the mean
  SpectralField from_grid(const Lattice& lat);
  // forward DFT of an external real array (size P*P), truncated onto the lattice band
  SpectralField from_grid(const Lattice& lat, const double* g);

 private:
  void load_half_spectrum(const SpectralField& u);

  int P_;
  double* real_ = nullptr;  // P*P
  void* half_ = nullptr;    // fftw_complex P*(P/2+1)
  void* plan_c2r_ = nullptr;
  void* plan_r2c_ = nullptr;
};

// Evaluate u on its lattice's own N x N grid (convenience for diagnostics and checks).
std::vector<double> grid_values(const SpectralField& u);

}  // namespace qg2l
