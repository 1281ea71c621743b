#include <random>

#include "baxterq/errors.hpp"
#include "baxterq/hecke.hpp"
#include "baxterq/quad.hpp"
#include "helpers.hpp"

using namespace baxterq;
using namespace baxterq::hecke;

namespace {

const auto GL1 = matgrp::GroupTag::gl(0);
const auto GL2 = matgrp::GroupTag::gl(1);
const auto SO2 = matgrp::GroupTag::so_even(1);
const auto SP2 = matgrp::GroupTag::sp(1);

RealMatrix scalar(double v) {
  RealMatrix g(1, 1);
  g(0, 0) = v;
  return g;
}

RealMatrix m2(double a, double b, double c, double d) {
  RealMatrix g(2, 2);
  g << a, b, c, d;
  return g;
}

}  // namespace

TEST_CASE("Gaussian elements on GL") {
  const specfn::SpectralPoint s{Complex(0.3, -2)};
  const Complex is = s.is();
  CHECK_REL(q_group_gl(RealMatrix::Identity(2, 2), s), Complex(4.0 * std::exp(-2.0 * kPi)), 1e-15);
  CHECK_REL(q_group_gl(scalar(2.0), s), 2.0 * std::pow(2.0, is) * std::exp(-4.0 * kPi), 1e-14);
  CHECK_REL(q_group_gl_tilde(scalar(2.0), s), 2.0 * std::pow(2.0, -is) * std::exp(-kPi / 4.0), 1e-14);
  CHECK_REL(q_group_gl_tilde(RealMatrix::Identity(3, 3), s), q_group_gl(RealMatrix::Identity(3, 3), s),
            1e-15);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    const RealMatrix g = matgrp::random_group_element(GL2, rng, 0.6);
    const RealMatrix k1 = matgrp::draw_orthogonal(2, rng), k2 = matgrp::draw_orthogonal(2, rng);
    CHECK_REL(q_group_gl(k1 * g * k2, s), q_group_gl(g, s), 1e-12);
    CHECK_REL(q_group_gl_tilde(g.inverse(), s), q_group_gl(g, s), 1e-12);
  }
  CHECK_THROWS_AS(q_group_gl_tilde(m2(1, 1, 1, 1), s), SingularMatrixError);
  // Schwarz decay along a diagonal ray
  double prev = std::abs(q_group_gl(RealMatrix::Identity(2, 2), s));
  for (double t : {1.5, 2.0, 3.0}) {
    const double v = std::abs(q_group_gl(t * RealMatrix::Identity(2, 2), s));
    CHECK(v < prev * std::pow(t, -10.0));
    prev = v;
  }
}

TEST_CASE("Haar constant against Gaussian moments") {
  // I(sigma) = int e^{-pi Tr Z Z^t} |det Z|^sigma dZ_Leb/|det Z|^n equals the
  // Gaussian determinant moment prod_m pi^{-p/2} Gamma((m+p)/2)/Gamma(m/2),
  // p = sigma - n. In Iwasawa coordinates Z = n a k the n-entries of column j
  // integrate to e^{-(n-j) u_j}, leaving prod_j 1/2 pi^{-nu/2} Gamma(nu/2)
  // with nu = sigma + 1 - j. Their ratio is c_n.
  CHECK(haar_constant(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(haar_constant(2) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
  auto lg = [](double x) { return specfn::log_gamma(x).real(); };
  for (int n = 1; n <= 4; ++n) {
    for (double sigma : {n + 0.5, n + 1.5, n + 3.0}) {
      const double p = sigma - n;
      double log_leb = 0.0, log_iw = 0.0;
      for (int m = 1; m <= n; ++m) log_leb += -0.5 * p * std::log(kPi) + lg(0.5 * (m + p)) - lg(0.5 * m);
      for (int j = 1; j <= n; ++j) {
        const double nu = sigma + 1 - j;
        log_iw += std::log(0.5) - 0.5 * nu * std::log(kPi) + lg(0.5 * nu);
      }
      CHECK(std::exp(log_leb - log_iw) == doctest::Approx(haar_constant(n)).epsilon(1e-12));
    }
    // the importance sampler reproduces the Lebesgue side
    const double sigma = n + 1.5, p = 1.5;
    double leb = 1.0;
    for (int m = 1; m <= n; ++m)
      leb *= std::pow(kPi, -0.5 * p) * std::exp(lg(0.5 * (m + p)) - lg(0.5 * m));
    const auto mc = quad::mc_integrate(
        [&](std::mt19937_64& rng) -> Complex {
          const auto z = matgrp::draw_gl_gaussian(n, rng);
          if (z.rejected) return 0.0;
          return z.weight * std::exp(-kPi * z.z.squaredNorm()) * std::pow(z.abs_det, sigma);
        },
        200000, {31u + n});
    CHECK(std::abs(mc.value.real() - leb) < 4.0 * mc.error_estimate);
  }
}

TEST_CASE("squared element on GL_1") {
  const specfn::SpectralPoint s{Complex(0.2, -2.0)};
  // g = 1: |det g| = 1, so the value is 4 int e^{-2 pi z^2} |z|^{2is} dz/|z| (Haar, even in z)
  quad::Options o;
  o.rel_tol = 1e-12;
  o.initial_intervals = 128;
  const Complex is = s.is();
  const auto oracle = quad::integrate_1d(
      [&](double u) { return std::exp(2.0 * is * u - 2.0 * kPi * std::exp(2.0 * u)); }, -40.0, 3.0, o);
  CHECK_REL(q2_group(scalar(1.0), s).value, 4.0 * oracle.value, 1e-10);
  // closed form 2 |g|^{is} (pi (1 + g^2))^{-is} Gamma(is) at g = 1/h
  for (double h : {0.5, 2.0, -3.0}) {
    const double g = 1.0 / h;
    const Complex closed = 2.0 * std::pow(std::abs(g), is) * std::pow(kPi * (1.0 + g * g), -is) *
                           specfn::gamma(is);
    CHECK_REL(q2_group(scalar(h), s).value, closed, 1e-9);
  }
  // convolution of the two Gaussian elements
  const HeckeElement plain{GL1, HeckeKind::GlGaussian, s, {}};
  const HeckeElement tilde{GL1, HeckeKind::GlGaussianTilde, s, {}};
  for (double h : {0.4, 1.7}) {
    CHECK_REL(convolve_gl1(tilde, plain, h, 1e-11).value, q2_group(scalar(h), s).value, 1e-8);
  }
  CHECK_THROWS_AS(q2_group(scalar(1.0), {Complex(0, -0.4)}), DomainError);
}

TEST_CASE("GL_2 squared element by Monte Carlo") {
  const specfn::SpectralPoint s{Complex(0, -3)};
  Effort e;
  e.samples = 100000;
  const RealMatrix h = m2(0.9, 0.2, -0.3, 1.1);
  const auto a = q2_group(h, s, e);
  // K-biinvariance within MC error
  std::mt19937_64 rng(12);
  const RealMatrix k1 = matgrp::draw_orthogonal(2, rng), k2 = matgrp::draw_orthogonal(2, rng);
  const auto b = q2_group(k1 * h * k2, s, e);
  CHECK(std::abs(a.value - b.value) < 4.0 * std::hypot(a.error_estimate, b.error_estimate));
  // determinism
  CHECK(q2_group(h, s, e).value == a.value);
}

TEST_CASE("spherical functions") {
  Effort e;
  e.samples = 20000;
  const specfn::SpectralParams l2({0.6, -0.2}, GL2);
  const auto at_e = spherical_function(RealMatrix::Identity(2, 2), l2, e);
  CHECK(std::abs(at_e.value - 1.0) < 1e-14);
  const specfn::SpectralParams l1({1.1}, GL1);
  CHECK_REL(spherical_function(scalar(-2.5), l1, e).value, std::pow(Complex(2.5), kI * 1.1), 1e-14);
  std::mt19937_64 rng(6);
  const RealMatrix g = m2(1.4, 0.3, -0.2, 0.8);
  const RealMatrix k1 = matgrp::draw_orthogonal(2, rng), k2 = matgrp::draw_orthogonal(2, rng);
  const auto a = spherical_function(g, l2, e);
  const auto b = spherical_function(k1 * g * k2, l2, e);
  CHECK(std::abs(a.value - b.value) < 4.0 * std::hypot(a.error_estimate, b.error_estimate));
  // SO_2: phi(diag(e^t, e^-t)) = e^{i lam t}, K finite
  const specfn::SpectralParams so({0.8}, SO2);
  CHECK_REL(spherical_function(classical_torus({0.5}), so, e).value, std::exp(kI * 0.4), 1e-12);
  CHECK_THROWS_AS(spherical_function(m2(2, 0, 0, 1), specfn::SpectralParams({0.3}, SP2), e),
                  DomainError);
}

TEST_CASE("eigenvalues on GL") {
  for (double lam : {0.0, 0.9}) {
    const specfn::SpectralParams p({lam}, GL1);
    const specfn::SpectralPoint s{Complex(0.4, -2.0)};
    const HeckeElement plain{GL1, HeckeKind::GlGaussian, s, {}};
    const HeckeElement tilde{GL1, HeckeKind::GlGaussianTilde, s, {}};
    const HeckeElement sq{GL1, HeckeKind::GlSquared, s, {}};
    const Complex a = hecke_eigenvalue(plain, p).value, b = hecke_eigenvalue(tilde, p).value;
    CHECK_REL(a, specfn::l_factor_gl(s, p), 1e-8);
    CHECK_REL(b, specfn::l_factor_gl(s, p.negated()), 1e-8);
    // character of the Hecke algebra: the eigenvalue of Q~ * Q is the product
    CHECK_REL(hecke_eigenvalue(sq, p).value, a * b, 1e-8);
  }
  const specfn::SpectralParams l2({1.0, -1.0}, GL2);
  const HeckeElement t2{GL2, HeckeKind::GlGaussianTilde, {Complex(0, -4)}, {}};
  CHECK_REL(hecke_eigenvalue(t2, l2).value, specfn::l_factor_gl({Complex(0, -4)}, l2.negated()), 1e-8);
  CHECK_THROWS_AS(hecke_eigenvalue(t2, specfn::SpectralParams({1.0}, GL1)), ShapeError);
}

TEST_CASE("classical elements") {
  const specfn::SpectralPoint s{Complex(0, -2)};
  Effort e;
  e.samples = 200000;
  // R(g)/R(0) = det(g^t g + 1)^{-is/2} by the Gaussian change of variables
  for (const auto& g : {classical_torus({0.6}), m2(1.0, 0.7, 0.0, 1.0)}) {
    const auto tag = g(0, 1) == 0.0 ? SO2 : SP2;
    const auto q = q_group_classical(g, s, tag, e);
    const RealMatrix m = g.transpose() * g + RealMatrix::Identity(2, 2);
    const Complex expect = specfn::d_factor(tag, s) * std::pow(m.determinant(), -0.5 * s.is());
    CHECK(std::abs(q.value - expect) < 4.0 * q.error_estimate);
  }
  // SO_2 closed form at t = 0 and symmetry
  CHECK_REL(q_so2_closed(0.0, s), Complex(1.0 / (4.0 * kPi * kPi)), 1e-14);
  CHECK_REL(q_so2_closed(-1.3, s), q_so2_closed(1.3, s), 1e-15);
  CHECK(std::abs(q_so2_closed(30.0, s)) < std::exp(-2.0 * 30.0));
  // ratio of ratios: R(g(t))/R(g(0)) = (cosh t)^{-is}
  const auto rt = r_g(classical_torus({0.9}), s, SO2, e);
  const auto r0 = r_g(classical_torus({0.0}), s, SO2, e);
  const auto rz = r_g(RealMatrix::Zero(2, 2), s, SO2, e);
  CHECK(std::abs(rt.value / r0.value - std::pow(std::cosh(0.9), -s.is())) < 0.02);
  CHECK(std::abs(r0.value / rz.value - std::pow(2.0, -s.is())) < 0.02);
  // orthogonal invariance of the ratio
  std::mt19937_64 rng(8);
  const RealMatrix k = matgrp::draw_orthogonal(2, rng);
  const RealMatrix g = m2(1.2, 0.4, -0.5, 0.7);
  const auto a = r_g(g, s, SO2, e), b = r_g(k * g * k.transpose(), s, SO2, e);
  CHECK(std::abs(a.value - b.value) < 4.0 * std::hypot(a.error_estimate, b.error_estimate));
  CHECK_THROWS_AS(r_g(g, {Complex(0, -0.5)}, SO2, e), DomainError);
  CHECK_THROWS_AS(q_group_classical(g, s, GL2, e), DomainError);
}

TEST_CASE("SO_2 L-factor integral") {
  for (double lam : {0.0, 0.8}) {
    const specfn::SpectralPoint s{Complex(0.3, -2.5)};
    const auto r = l_so2_integral(s, lam);
    CHECK_REL(r.value, specfn::l_factor_classical(s, specfn::SpectralParams({lam}, SO2)), 1e-10);
    CHECK_REL(l_so2_integral(s, -lam).value, r.value, 1e-12);
  }
}

TEST_CASE("SO_2 eigenvalue by Monte Carlo") {
  Effort e;
  e.samples = 20000;
  const HeckeElement q{SO2, HeckeKind::Classical, {Complex(0, -2)}, e};
  const specfn::SpectralParams p({0.5}, SO2);
  const auto r = hecke_eigenvalue(q, p);
  const Complex expect = specfn::l_factor_classical({Complex(0, -2)}, p);
  CHECK(std::abs(r.value - expect) < 4.0 * r.error_estimate);
}

TEST_CASE("Sp_2 element: spherical transform has shifted Gamma arguments") {
  // With R against Haar dZ the Sp_2 element is d(s) (2 cosh r)^{-is}; its
  // spherical transform is c(s) Gamma_R(is-1-i lam) Gamma_R(is-1+i lam).
  // Freeze that structure with deterministic quadrature of the exact ratio.
  const specfn::SpectralPoint s{Complex(0, -4)};
  const Complex is = s.is();
  auto transform = [&](double lam) {
    quad::Options o;
    o.rel_tol = 1e-9;
    o.initial_intervals = 64;
    o.max_levels = 9;
    const double t = 44.0 / 4.0 + 2.0, w = 44.0 / 3.0 + 2.0;
    return quad::integrate(
               [&](std::span<const double> v) {
                 const double nv = std::exp(-v[0]) * std::sinh(v[1]);
                 const RealMatrix g = m2(std::exp(-v[0]), 0.0, -std::exp(v[0]) * nv, std::exp(v[0]));
                 const RealMatrix m = g.transpose() * g + RealMatrix::Identity(2, 2);
                 return std::exp(-0.5 * is * std::log(m.determinant()) + kI * lam * v[0]) *
                        std::cosh(v[1]);
               },
               quad::Box{{-t, -w}, {t, w}}, o)
               .value *
           specfn::d_factor(SP2, s);
  };
  auto shifted = [&](double lam) {
    return specfn::gamma_r(is - 1.0 - kI * lam) * specfn::gamma_r(is - 1.0 + kI * lam);
  };
  const Complex c0 = transform(0.0) / shifted(0.0);
  for (double lam : {0.5, 1.3}) CHECK_REL(transform(lam) / shifted(lam), c0, 1e-7);
  CHECK_REL(c0, Complex(kPi / 4.0), 1e-7);
}
