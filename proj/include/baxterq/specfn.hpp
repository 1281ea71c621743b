#pragma once

// Complex Gamma, the completed real Gamma factor and local Archimedean
// L-factor products.

#include <vector>

#include "baxterq/matgrp.hpp"
#include "baxterq/types.hpp"

namespace baxterq::specfn {

/// The Baxter parameter s. Every Gamma product and integral here needs
/// Re(i s) > 0.
struct SpectralPoint {
  Complex s;

  Complex is() const { return kI * s; }
  bool converges() const { return is().real() > 0.0; }
  /// Throws DomainError unless Re(i s) > bound.
  void require_convergent(double bound = 0.0) const;
};

/// Real principal-series parameters lambda_1..lambda_m; m = l+1 for GL and
/// m = l for SO_{2l} and Sp_{2l}.
struct SpectralParams {
  std::vector<double> entries;
  matgrp::GroupTag group;

  SpectralParams(std::vector<double> entries, matgrp::GroupTag group);

  SpectralParams negated() const;
};

/// Eigenvalues of rho_V(t_infinity) for the standard representation of the
/// dual group: lambda (GL), (lambda, -lambda) (SO_{2l}), (0, lambda, -lambda)
/// (Sp_{2l}, dual SO_{2l+1}).
struct DualWeight {
  std::vector<double> entries;
};

DualWeight dual_weight(const SpectralParams& lam);

/// Principal branch of log Gamma(z) (Lanczos, g = 7, with reflection for
/// Re z < 1/2). Throws PoleError at non-positive integers.
Complex log_gamma(Complex z);
Complex gamma(Complex z);

/// Gamma_R(z) = pi^{-z/2} Gamma(z/2).
Complex gamma_r(Complex z);

/// prod_j Gamma_R(i s - i mu_j).
Complex l_factor_dual(const SpectralPoint& s, const DualWeight& mu);

/// L(s, lambda) = prod_j Gamma_R(i s - i lambda_j) for GL_{l+1}.
Complex l_factor_gl(const SpectralPoint& s, const SpectralParams& lam);

/// prod_i Gamma_R(is - i lambda_i) Gamma_R(is + i lambda_i), with the extra
/// Gamma_R(is) for Sp_{2l}.
Complex l_factor_classical(const SpectralPoint& s, const SpectralParams& lam);

/// d_{SO_{2l}}(s) = prod_{j=0,2,..,2l-2} Gamma_R(2is - j),
/// d_{Sp_{2l}}(s) = prod_{j=2,4,..,2l} Gamma_R(2is - j).
Complex d_factor(const matgrp::GroupTag& group, const SpectralPoint& s);

}  // namespace baxterq::specfn
