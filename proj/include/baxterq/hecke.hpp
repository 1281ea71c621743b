#pragma once

// Group-level layer: Gaussian Hecke elements on GL_{l+1}, spherical
// functions, eigenvalue integrals, the matrix integrals R_G and the
// classical-group elements built from them.

#include <cstdint>

#include "baxterq/matgrp.hpp"
#include "baxterq/quad.hpp"
#include "baxterq/specfn.hpp"
#include "baxterq/types.hpp"

namespace baxterq::hecke {

// Sample count, seed and quadrature tolerance shared by the MC and
// quadrature paths.
struct Effort {
  std::int64_t samples = 200'000;
  RandomSeed seed{20240917};
  double rel_tol = 1e-9;
};

// Qgl(g,s) = 2^{l+1} |det g|^{is+l/2} e^{-pi Tr g^t g}, g in GL_{l+1}.
Complex q_group_gl(const RealMatrix& g, const specfn::SpectralPoint& s);

// Qgl~(g,s) = Qgl(g^{-1}, s).
Complex q_group_gl_tilde(const RealMatrix& g, const specfn::SpectralPoint& s);

// Iwasawa Haar measure dg = delta(a) dn d^x a dk (int_K dk = 1) relative to
// dZ_Leb / |det Z|^n on GL_n: dZ_Leb/|det Z|^n = c_n dg with
// c_n = 2^n / prod_{m<=n} Gamma_R(m).
double haar_constant(int n);

// The convolution Qgl~ * Qgl at g^{-1}:
//   4^{l+1} |det g|^{is+l/2} int e^{-pi Tr Z(g g^t + 1)Z^t} |det Z|^{2is+l} dZ
// with dZ the Iwasawa Haar measure. Argument is the point h = g^{-1}.
// l = 0 by quadrature, l >= 1 by importance-sampled Monte Carlo.
// Requires Re(2is) > 1.
quad::IntegralResult q2_group(const RealMatrix& h, const specfn::SpectralPoint& s,
                              const Effort& effort = {});

// phi_lambda(g) = int_K e^{<h(kg), i lambda - rho>} dk by MC over K, in the
// torus coordinates of the group tag carried by lam.
quad::IntegralResult spherical_function(const RealMatrix& g, const specfn::SpectralParams& lam,
                                        const Effort& effort = {});

enum class HeckeKind { GlGaussian, GlGaussianTilde, GlSquared, Classical };

struct HeckeElement {
  matgrp::GroupTag group;
  HeckeKind kind;
  specfn::SpectralPoint s;
  Effort effort;

  // Value at g (exact kinds report error_estimate 0).
  quad::IntegralResult evaluate(const RealMatrix& g) const;
};

// Lambda(lambda) = int_G phi(g^{-1}) phi_lambda(g) dg, reduced through the
// Iwasawa parametrization to int_{A} int_{N_-} phi(a^{-1} n^{-1})
// e^{<log a, i lambda - rho>} delta(a) dn da.
// GL elements: quadrature (GL_1, and GL_2 for the exact kinds).
// Classical elements of rank 1: a fixed trapezoid grid over (t, n) whose
// node values share one set of Gaussian matrix samples; the error estimate
// is the delta-method standard error of the resulting MC ratio.
quad::IntegralResult hecke_eigenvalue(const HeckeElement& elem, const specfn::SpectralParams& lam);

// (a * b)(h) = int_{GL_1} a(h u^{-1}) b(u) du in the Iwasawa Haar measure.
quad::IntegralResult convolve_gl1(const HeckeElement& a, const HeckeElement& b, double h,
                                  double rel_tol);

// R_G(g,s) = int_{GL_{2l}} e^{-pi Tr Z^t(g^t g + 1)Z} |det Z|^{is} dZ_Leb/|det Z|^{2l},
// importance sampled with Z ~ e^{-pi Tr Z^t Z}. Requires Re(is) > 2l - 1.
quad::IntegralResult r_g(const RealMatrix& g, const specfn::SpectralPoint& s,
                         const matgrp::GroupTag& group, const Effort& effort = {});

// Q_G(g,s) = d_G(s) R_G(g,s) / R_G(0,s), with both integrals estimated from
// the same samples.
quad::IntegralResult q_group_classical(const RealMatrix& g, const specfn::SpectralPoint& s,
                                       const matgrp::GroupTag& group, const Effort& effort = {});

// Q_{SO_2}(diag(e^t, e^{-t}), s) = Gamma_R(2is) (e^t + e^{-t})^{-is}.
Complex q_so2_closed(double t, const specfn::SpectralPoint& s);

// 2 int e^{-i lam t} Q_{SO_2}(g(t), s) dt by quadrature.
quad::IntegralResult l_so2_integral(const specfn::SpectralPoint& s, double lam,
                                    double rel_tol = 1e-12);

// diag(e^{t_1..t_l}, e^{-t_l..-t_1}).
RealMatrix classical_torus(const std::vector<double>& t);

}  // namespace baxterq::hecke
