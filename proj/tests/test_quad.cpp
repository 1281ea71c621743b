#include <cstdlib>

#include "baxterq/errors.hpp"
#include "baxterq/quad.hpp"
#include "helpers.hpp"

using namespace baxterq;
using namespace baxterq::quad;

TEST_CASE("decay-driven integration") {
  auto r = integrate([](std::span<const double> v) { return std::exp(-kPi * v[0] * v[0]); }, 1,
                     {{0.0}, 1.0, DecayKind::Gaussian}, 1e-12);
  CHECK_REL(r.value, Complex(1.0), 1e-12);
  CHECK(r.evaluations > 0);
  CHECK(r.error_estimate >= 0.0);

  r = integrate([](std::span<const double> v) { return std::exp(2.0 * v[0] - kPi * std::exp(2.0 * v[0])); },
                1, {{-0.5 * std::log(kPi)}, 0.5, DecayKind::DoubleExponential}, 1e-12);
  CHECK_REL(r.value, Complex(1.0 / (2.0 * kPi)), 1e-12);

  r = integrate(
      [](std::span<const double> v) {
        return std::exp(-kPi * (v[0] * v[0] + v[1] * v[1])) * std::cos(2.0 * kPi * v[0]);
      },
      2, {{0.0, 0.0}, 1.0, DecayKind::Gaussian}, 1e-11);
  CHECK_REL(r.value, Complex(std::exp(-kPi)), 1e-11);
}

TEST_CASE("three and four dimensions") {
  auto gauss = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return Complex(std::exp(-kPi * s));
  };
  CHECK_REL(integrate(gauss, 3, {{}, 1.0, DecayKind::Gaussian}, 1e-10).value, Complex(1.0), 1e-10);
  const auto r4 = integrate(
      [](std::span<const double> v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::exp(-kPi * s + Complex(0, 1.0) * v[3]);
      },
      4, {{}, 1.0, DecayKind::Gaussian}, 1e-9);
  CHECK_REL(r4.value, Complex(std::exp(-1.0 / (4.0 * kPi))), 1e-9);
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
  const auto r = integrate_tanh_sinh([](double x) { return Complex(1.0 / std::sqrt(x)); }, 0.0, 1.0,
                                     1e-10);
  CHECK_REL(r.value, Complex(2.0), 1e-9);
  const auto r2 = integrate_tanh_sinh([](double x) { return Complex(std::log(x)); }, 0.0, 1.0, 1e-10);
  CHECK_REL(r2.value, Complex(-1.0), 1e-9);
}

TEST_CASE("non-convergence is reported") {
  Options o;
  o.max_levels = 3;
  o.rel_tol = 1e-14;
  CHECK_THROWS_AS(integrate_1d([](double x) { return Complex(std::sin(200.0 * x * x)); }, 0.0, 10.0, o),
                  ConvergenceError);
  CHECK_THROWS_AS(integrate([](std::span<const double>) { return Complex(1.0); }, 5,
                            {{}, 1.0, DecayKind::Gaussian}, 1e-8),
                  ShapeError);
  CHECK_THROWS_AS(window_from_decay({{}, -1.0, DecayKind::Gaussian}, 1), DomainError);
}

TEST_CASE("truncation window") {
  const Box b = window_from_decay({{1.0}, 2.0, DecayKind::Gaussian}, 1);
  // e^{-pi (w/scale)^2} = e^{-40} at the edge
  CHECK(kPi * std::pow((b.hi[0] - 1.0) / 2.0, 2) == doctest::Approx(40.0));
  const Box d = window_from_decay({{0.0, 0.0}, 0.5, DecayKind::DoubleExponential}, 2);
  CHECK((d.hi[1] - 0.0) / 0.5 == doctest::Approx(40.0));
}

TEST_CASE("Monte Carlo contract") {
  const auto one = mc_integrate([](std::mt19937_64&) { return Complex(1.0); }, 5000, {1});
  CHECK(one.value == Complex(1.0));
  CHECK(one.error_estimate == 0.0);
  CHECK(one.evaluations == 5000);

  auto uniform = [](std::mt19937_64& rng) {
    return Complex(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  };
  const auto a = mc_integrate(uniform, 40000, {2});
  const auto b = mc_integrate(uniform, 40000, {2});
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(std::abs(a.value - 0.5) < 3.0 * a.error_estimate);
  // SE scales like 1/sqrt(n)
  const auto c = mc_integrate(uniform, 80000, {3});
  CHECK(a.error_estimate / c.error_estimate == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));

  // same result regardless of the worker count
  setenv("BAXTERQ_THREADS", "1", 1);
  const auto single = mc_integrate(uniform, 40000, {2});
  setenv("BAXTERQ_THREADS", "3", 1);
  const auto three = mc_integrate(uniform, 40000, {2});
  unsetenv("BAXTERQ_THREADS");
  CHECK(single.value == a.value);
  CHECK(three.value == a.value);
}

TEST_CASE("degenerate weights are flagged") {
  // Mass concentrated on about 1 in 1e4 draws.
  const auto r = mc_integrate(
      [](std::mt19937_64& rng) {
        return Complex(std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 1e-4 ? 1e9 : 1e-6);
      },
      200000, {4});
  CHECK(r.degenerate);
  const auto ok = mc_integrate(
      [](std::mt19937_64& rng) { return Complex(std::uniform_real_distribution<double>(0.0, 1.0)(rng)); },
      20000, {4});
  CHECK_FALSE(ok.degenerate);
}

TEST_CASE("joint estimates and ratios") {
  // X uniform, A = X + 1, B = X: ratio of means (3/2)/(1/2) = 3.
  const auto est = mc_joint(
      [](std::mt19937_64& rng, std::span<Complex> out) {
        const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        out[0] = x + 1.0;
        out[1] = x;
      },
      2, 100000, {8});
  CHECK(est.covariance.rows() == 2);
  CHECK(std::abs(est.covariance(0, 1) - est.covariance(0, 0)) < 1e-12);
  const auto r = ratio(est, 0, 1);
  CHECK(std::abs(r.value - 3.0) < 3.0 * r.error_estimate);
  // delta method: var(A/B) with A = B + 1, d/dB (B+1)/B = -1/B^2; var(X)/n = 1/12/n
  CHECK(r.error_estimate == doctest::Approx(4.0 * std::sqrt(1.0 / 12.0 / 100000)).epsilon(0.05));
}
