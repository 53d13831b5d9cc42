#pragma once

#include <stdexcept>

namespace qg2l {

// Nondimensional two-layer parameters.  beta: planetary vorticity gradient; kappa_T:
// temperature (thickness) relaxation; kappa_M: bottom Ekman drag; nu, m: hyperviscosity
// nu*A^m acting on the streamfunctions (m = 3 is triharmonic); L: domain side.
struct ModelParams {
  double beta = 0.0;
  double kappa_T = 0.0;
  double kappa_M = 0.0;
  double nu = 0.0;
  double m = 3.0;
  double L = 2.0 * 3.14159265358979323846;

  void validate() const {
    if (!(L >= 1.0)) throw std::invalid_argument("model.L must be >= 1");
    if (!(m > 0.0)) throw std::invalid_argument("model.m must be > 0");
    if (kappa_T < 0.0) throw std::invalid_argument("model.kappa_T must be >= 0");
    if (kappa_M < 0.0) throw std::invalid_argument("model.kappa_M must be >= 0");
    if (nu < 0.0) throw std::invalid_argument("model.nu must be >= 0");
  }
};

}  // namespace qg2l
