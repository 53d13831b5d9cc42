#pragma once

#include <memory>

#include "qg2l/field.hpp"
#include "qg2l/transforms.hpp"

namespace qg2l {

// Dealiased pseudo-spectral Jacobian J(psi,q) = psi_x q_y - psi_y q_x.  Products are formed
// on an internal grid of size >= 3K+1 so the retained band is alias-free exactly; this is
// what makes the discrete skew identities <J(psi,q),q> = 0 and <J(psi,q),psi> = 0 hold to
// roundoff, which the energy budgets depend on.  Requires lattice N >= 3K.
class JacobianWorkspace {
 public:
  explicit JacobianWorkspace(const Lattice& lat);

  SpectralField apply(const SpectralField& psi, const SpectralField& q);

  // max_x |grad psi| recorded during the most recent apply() (used for CFL control)
  double last_max_grad() const { return max_grad_; }

 private:
  Lattice lat_;
  std::unique_ptr<GridTransform> fwd_;   // pads to the dealias grid
  std::vector<double> px_, py_, qx_;     // grid scratch
  double max_grad_ = 0.0;
};

// one-shot convenience (builds a workspace per call)
SpectralField jacobian(const SpectralField& psi, const SpectralField& q);

}  // namespace qg2l
