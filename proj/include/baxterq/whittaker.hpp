#pragma once

// gl_1 and gl_2 Whittaker functions and the finite-difference Toda check.

#include <span>
#include <vector>

#include "baxterq/specfn.hpp"
#include "baxterq/types.hpp"

namespace baxterq::whittaker {

// K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt, z > 0. Exact 0 once
// z > 700.
Complex kbessel(Complex nu, double z);

// e^{i lam x}.
Complex whittaker_gl1(double lam, double x);

// Psi(x) = e^{i(l1+l2)(x1+x2)/2} K_{i(l1-l2)/2}(2 pi e^{x2-x1}), the decaying
// eigenfunction of H2 = -1/2 (d1^2 + d2^2) + 4 pi^2 e^{2(x2-x1)} with
// eigenvalue (l1^2 + l2^2)/2.
Complex whittaker_gl2(const specfn::SpectralParams& lam, double x1, double x2);

// Phi = e^{-<rho,x>} Psi, the common eigenfunction of the Baxter kernels.
Complex whittaker_gl2_rescaled(const specfn::SpectralParams& lam, double x1, double x2);

// Psi for rank 0 or 1 of GL at x (length l+1).
Complex whittaker_psi(const specfn::SpectralParams& lam, std::span<const double> x);
// Phi for rank 0 or 1.
Complex whittaker_phi(const specfn::SpectralParams& lam, std::span<const double> x);

using TorusPoint = std::vector<double>;

// max over the grid of |H^{(h)} Psi - E Psi| / |Psi| with central second
// differences of step h (H = -1/2 d^2 for rank 0, H2 for rank 1). Throws
// StepTooLargeError if halving h does not reduce the residual.
double toda_h2_residual(const specfn::SpectralParams& lam, const std::vector<TorusPoint>& grid,
                        double h);

// Residual at h and h/2 without the shrink check.
struct TodaConvergence {
  double at_h = 0.0;
  double at_half_h = 0.0;
  double ratio() const { return at_h / at_half_h; }
};
TodaConvergence toda_h2_convergence(const specfn::SpectralParams& lam,
                                    const std::vector<TorusPoint>& grid, double h);

// (l_1^2 + ... )/2.
double toda_energy(const specfn::SpectralParams& lam);

}  // namespace baxterq::whittaker
