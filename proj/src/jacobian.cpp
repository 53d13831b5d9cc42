#include "qg2l/jacobian.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace qg2l {

JacobianWorkspace::JacobianWorkspace(const Lattice& lat) : lat_(lat) {
  if (lat.N < 3 * lat.K)
    throw std::invalid_argument("jacobian: insufficient N for dealiasing (need N >= 3K)");
  const int P = dealias_grid_size(lat.K);
  fwd_ = std::make_unique<GridTransform>(P);
  const std::size_t n = static_cast<std::size_t>(P) * P;
  px_.resize(n);
  py_.resize(n);
  qx_.resize(n);
}

SpectralField JacobianWorkspace::apply(const SpectralField& psi, const SpectralField& q) {
  if (psi.lattice() != lat_ || q.lattice() != lat_)
    throw std::invalid_argument("jacobian: lattice mismatch");
  const std::size_t n = px_.size();
  const std::size_t bytes = n * sizeof(double);

  fwd_->to_grid(deriv_x(psi));
  std::memcpy(px_.data(), fwd_->grid(), bytes);
  fwd_->to_grid(deriv_y(psi));
  std::memcpy(py_.data(), fwd_->grid(), bytes);

  double g2max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g2 = px_[i] * px_[i] + py_[i] * py_[i];
    if (g2 > g2max) g2max = g2;
  }
  max_grad_ = std::sqrt(g2max);

  fwd_->to_grid(deriv_x(q));
  std::memcpy(qx_.data(), fwd_->grid(), bytes);
  fwd_->to_grid(deriv_y(q));

  double* g = fwd_->grid();  // currently q_y
  for (std::size_t i = 0; i < n; ++i) g[i] = px_[i] * g[i] - py_[i] * qx_[i];
  return fwd_->from_grid(lat_);
}

SpectralField jacobian(const SpectralField& psi, const SpectralField& q) {
  JacobianWorkspace ws(psi.lattice());
  return ws.apply(psi, q);
}

}  // namespace qg2l
