#include <random>

#include "baxterq/errors.hpp"
#include "baxterq/matgrp.hpp"
#include "baxterq/quad.hpp"
#include "helpers.hpp"

using namespace baxterq;
using namespace baxterq::matgrp;

namespace {

RealMatrix m2(double a, double b, double c, double d) {
  RealMatrix g(2, 2);
  g << a, b, c, d;
  return g;
}

// g g^t = L D L^t by the textbook recurrence; then n = L, a = sqrt(D).
void ldlt(const RealMatrix& p, RealMatrix& l, RealVector& d) {
  const int n = static_cast<int>(p.rows());
  l = RealMatrix::Identity(n, n);
  d = RealVector::Zero(n);
  for (int j = 0; j < n; ++j) {
    double s = p(j, j);
    for (int k = 0; k < j; ++k) s -= l(j, k) * l(j, k) * d(k);
    d(j) = s;
    for (int i = j + 1; i < n; ++i) {
      double t = p(i, j);
      for (int k = 0; k < j; ++k) t -= l(i, k) * l(j, k) * d(k);
      l(i, j) = t / d(j);
    }
  }
}

RealMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  RealMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = z(rng);
  return g;
}

}  // namespace

TEST_CASE("Iwasawa examples") {
  auto f = iwasawa_decompose(RealMatrix::Identity(3, 3));
  CHECK(f.n_lower.isApprox(RealMatrix::Identity(3, 3)));
  CHECK(f.a_log.norm() < 1e-15);
  CHECK(f.k_orth.isApprox(RealMatrix::Identity(3, 3)));

  f = iwasawa_decompose(m2(1, 0, 1, 1));
  CHECK((f.n_lower - m2(1, 0, 1, 1)).norm() < 1e-14);
  CHECK(f.a_log.norm() < 1e-14);
  CHECK((f.k_orth - RealMatrix::Identity(2, 2)).norm() < 1e-14);

  f = iwasawa_decompose(m2(2, 0, 1, 1));
  CHECK((f.n_lower - m2(1, 0, 0.5, 1)).norm() < 1e-14);
  CHECK(std::abs(f.a_log(0) - std::log(2.0)) < 1e-14);
  CHECK(std::abs(f.a_log(1)) < 1e-14);
  CHECK((f.k_orth - RealMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("Iwasawa against an LDL^t oracle and reconstruction") {
  std::mt19937_64 rng(3);
  int tested = 0;
  for (int n = 1; n <= 5; ++n) {
    for (int k = 0; k < 40; ++k) {
      const RealMatrix g = random_matrix(n, rng);
      Eigen::JacobiSVD<RealMatrix> svd(g);
      const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
      if (!(cond < 1e6)) continue;
      ++tested;
      const auto f = iwasawa_decompose(g);
      RealMatrix l;
      RealVector d;
      ldlt(g * g.transpose(), l, d);
      CHECK((f.n_lower - l).norm() <= 1e-9 * std::max(1.0, l.norm()));
      for (int i = 0; i < n; ++i) CHECK(std::abs(f.a_log(i) - 0.5 * std::log(d(i))) < 1e-9);
      CHECK((f.k_orth * f.k_orth.transpose() - RealMatrix::Identity(n, n)).norm() < 1e-12);
      CHECK((f.reconstruct() - g).norm() <= 1e-10 * g.norm());
      for (int i = 0; i < n; ++i) {
        CHECK(f.n_lower(i, i) == 1.0);
        for (int j = i + 1; j < n; ++j) CHECK(f.n_lower(i, j) == 0.0);
      }
      CHECK(modular_delta(f.a_log) > 0.0);
    }
  }
  CHECK(tested > 150);
  CHECK_THROWS_AS(iwasawa_decompose(m2(1, 2, 2, 4)), SingularMatrixError);
}

TEST_CASE("modular function") {
  CHECK(modular_delta(RealVector::Zero(3)) == doctest::Approx(1.0));
  RealVector y(2);
  y << 1, 0;
  CHECK(modular_delta(y) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  RealVector y3(3);
  y3 << 1, 0, -1;
  CHECK(modular_delta(y3) == doctest::Approx(std::exp(4.0)).epsilon(1e-14));
}

TEST_CASE("unipotent character") {
  CHECK(std::abs(unipotent_character(RealMatrix::Identity(3, 3)) - 1.0) < 1e-15);
  CHECK(std::abs(unipotent_character(m2(1, 0, 0.5, 1)) + 1.0) < 1e-15);
  RealMatrix n = RealMatrix::Identity(3, 3);
  n(1, 0) = 0.25;
  n(2, 1) = 0.25;
  n(2, 0) = 17.3;
  CHECK(std::abs(unipotent_character(n) + 1.0) < 1e-14);
  CHECK_THROWS_AS(unipotent_character(m2(1, 1, 0, 1)), ShapeError);
}

TEST_CASE("involutions") {
  const auto sp2 = GroupTag::sp(1);
  const auto so2 = GroupTag::so_even(1);
  CHECK((involution_star(RealMatrix::Identity(2, 2), sp2) - RealMatrix::Identity(2, 2)).norm() <
        1e-15);
  const RealMatrix g = m2(1.3, -0.4, 0.7, 2.1);
  const double det = g.determinant();
  CHECK((involution_star(g, sp2) - g / det).norm() < 1e-14);
  std::mt19937_64 rng(9);
  for (const auto& tag : {sp2, so2, GroupTag::sp(2), GroupTag::so_even(2), GroupTag::sp(3)}) {
    for (int k = 0; k < 10; ++k) {
      const RealMatrix h = random_matrix(tag.size(), rng);
      CHECK((involution_star(involution_star(h, tag), tag) - h).norm() <= 1e-12 * h.norm());
    }
  }
  CHECK_THROWS_AS(involution_star(g, GroupTag::gl(1)), DomainError);
  CHECK_THROWS_AS(involution_star(m2(1, 2, 2, 4), sp2), SingularMatrixError);
}

TEST_CASE("embedding data") {
  for (int l = 1; l <= 4; ++l) {
    const auto sp = GroupTag::sp(l), so = GroupTag::so_even(l);
    CHECK((sp.omega() + sp.omega().transpose()).norm() == 0.0);
    CHECK((so.omega() - so.omega().transpose()).norm() == 0.0);
    for (const auto& t : {sp, so}) {
      const RealMatrix s = t.s_matrix(), j = t.j_matrix();
      CHECK((s * s - RealMatrix::Identity(2 * l, 2 * l)).norm() == 0.0);
      CHECK((j * j - RealMatrix::Identity(2 * l, 2 * l)).norm() == 0.0);
    }
  }
  CHECK(GroupTag::gl(2).rho() == std::vector<double>{1.0, 0.0, -1.0});
}

TEST_CASE("membership and closure") {
  const auto sp2 = GroupTag::sp(1), so2 = GroupTag::so_even(1);
  CHECK(is_member(RealMatrix::Identity(2, 2), sp2, 1e-12));
  CHECK(is_member(RealMatrix::Identity(4, 4), GroupTag::so_even(2), 1e-12));
  CHECK(is_member(m2(1, 1, 0, 1), sp2, 1e-12));
  CHECK_FALSE(is_member(m2(2, 0, 0, 1), sp2, 1e-9));
  CHECK(is_member(m2(std::exp(0.8), 0, 0, std::exp(-0.8)), so2, 1e-12));
  std::mt19937_64 rng(21);
  for (const auto& tag : {sp2, so2, GroupTag::sp(2), GroupTag::so_even(2), GroupTag::sp(3)}) {
    for (int k = 0; k < 10; ++k) {
      const RealMatrix g = random_group_element(tag, rng, 0.5);
      const RealMatrix h = random_group_element(tag, rng, 0.5);
      CHECK(is_member(g, tag, 1e-9));
      CHECK(is_member(g * h, tag, 1e-9));
      CHECK(is_member(g.inverse(), tag, 1e-9));
      const RealMatrix k1 = draw_maximal_compact(tag, rng);
      CHECK(is_member(k1, tag, 1e-9));
      CHECK((k1 * k1.transpose() - RealMatrix::Identity(tag.size(), tag.size())).norm() < 1e-12);
    }
  }
}

TEST_CASE("Haar orthogonal sampling") {
  const RealMatrix k = sample_orthogonal(4, {42});
  CHECK((k * k.transpose() - RealMatrix::Identity(4, 4)).norm() < 1e-12);
  CHECK((sample_orthogonal(4, {42}) - k).norm() == 0.0);
  // E[k_11^2] = 1/n; Var(k_11^2) = 2(n-1)/(n^2(n+2)).
  for (int n : {2, 3, 5}) {
    GroupSampler gs({1234u + n});
    const int m = 100000;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const RealMatrix q = gs.orthogonal(n);
      sum += q(0, 0) * q(0, 0);
    }
    const double se = std::sqrt(2.0 * (n - 1) / (double(n) * n * (n + 2)) / m);
    CHECK(std::abs(sum / m - 1.0 / n) < 3.0 * se);
  }
}

TEST_CASE("Gaussian GL sampler") {
  // n = 1: int e^{-pi z^2} |z|^2 dz/|z| = 1/pi.
  const auto r = quad::mc_integrate(
      [](std::mt19937_64& rng) -> Complex {
        const auto s = draw_gl_gaussian(1, rng);
        return s.weight * s.abs_det * s.abs_det * std::exp(-kPi * s.abs_det * s.abs_det);
      },
      200000, {17});
  CHECK(std::abs(r.value - 1.0 / kPi) < 3.0 * r.error_estimate);

  const auto a = sample_gl_gaussian(3, {5});
  const auto b = sample_gl_gaussian(3, {5});
  CHECK((a.z - b.z).norm() == 0.0);
  CHECK(a.weight == b.weight);

  // Rejection rate at the default threshold.
  for (int n = 1; n <= 4; ++n) {
    std::mt19937_64 rng(77 + n);
    int rejected = 0;
    const int m = 100000;
    for (int i = 0; i < m; ++i) rejected += draw_gl_gaussian(n, rng).rejected;
    CHECK(rejected < m / 1000);
  }
}
