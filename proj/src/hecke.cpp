#include "baxterq/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "baxterq/errors.hpp"

namespace baxterq::hecke {

namespace {

constexpr double kTailDepth = 44.0;

void require_square_size(const RealMatrix& g, int n, const char* what) {
  if (g.rows() != g.cols() || (n > 0 && g.rows() != n)) {
    std::ostringstream os;
    os << what << ": expected a " << n << "x" << n << " matrix, got " << g.rows() << "x"
       << g.cols();
    throw ShapeError(os.str());
  }
  if (!g.allFinite()) throw DomainError(std::string(what) + ": non-finite entries");
}

double log_abs_det(const RealMatrix& g, const char* what) {
  const double det = g.determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw SingularMatrixError(std::string(what) + ": matrix is singular");
  }
  return std::log(std::abs(det));
}

RealMatrix inverse(const RealMatrix& g, const char* what) {
  Eigen::FullPivLU<RealMatrix> lu(g);
  if (!lu.isInvertible()) throw SingularMatrixError(std::string(what) + ": matrix is singular");
  return lu.inverse();
}

// e^{-pi Tr Z^t M Z} |det Z|^{power} * weight for one Gaussian sample.
Complex gaussian_term(const RealMatrix& zzt, const RealMatrix& m, double log_abs_det_z,
                      Complex power, double weight) {
  const double trace = (m.array() * zzt.array()).sum();  // Tr Z^t M Z = <M, Z Z^t>
  return weight * std::exp(-kPi * trace + power * log_abs_det_z);
}

}  // namespace

Complex q_group_gl(const RealMatrix& g, const specfn::SpectralPoint& s) {
  require_square_size(g, 0, "q_group_gl");
  const int n = static_cast<int>(g.rows());
  const double l = n - 1;
  const double ld = log_abs_det(g, "q_group_gl");
  return std::exp(n * std::log(2.0) + (s.is() + 0.5 * l) * ld - kPi * g.squaredNorm());
}

Complex q_group_gl_tilde(const RealMatrix& g, const specfn::SpectralPoint& s) {
  require_square_size(g, 0, "q_group_gl_tilde");
  return q_group_gl(inverse(g, "q_group_gl_tilde"), s);
}

double haar_constant(int n) {
  if (n < 1) throw DomainError("haar_constant: n must be >= 1");
  double c = std::ldexp(1.0, n);
  for (int m = 1; m <= n; ++m) c /= specfn::gamma_r(double(m)).real();
  return c;
}

quad::IntegralResult q2_group(const RealMatrix& h, const specfn::SpectralPoint& s,
                              const Effort& effort) {
  require_square_size(h, 0, "q2_group");
  s.require_convergent(0.5);  // Re(2is) > 1
  const int n = static_cast<int>(h.rows());
  const double l = n - 1;
  const RealMatrix g = inverse(h, "q2_group");
  const Complex is = s.is();
  const Complex prefactor =
      std::exp(2.0 * n * std::log(2.0) + (is + 0.5 * l) * log_abs_det(g, "q2_group"));
  const RealMatrix m = g * g.transpose() + RealMatrix::Identity(n, n);

  if (n == 1) {
    // Z = +-e^u; the integrand is even, so the Iwasawa measure gives du.
    const double a = kPi * m(0, 0);
    const double center = -0.5 * std::log(a);
    const double rate = 2.0 * is.real();
    quad::Options opts;
    opts.rel_tol = effort.rel_tol;
    opts.initial_intervals = 32;
    opts.min_levels = 3;
    auto r = quad::integrate_1d(
        [&](double u) { return std::exp(2.0 * is * u - a * std::exp(2.0 * u)); },
        center - kTailDepth / rate - 1.0, center + 2.5, opts);
    r.value *= prefactor;
    r.error_estimate *= std::abs(prefactor);
    return r;
  }

  const Complex power = 2.0 * is + l;
  const double c_n = haar_constant(n);
  auto r = quad::mc_integrate(
      [&](std::mt19937_64& rng) -> Complex {
        const auto sample = matgrp::draw_gl_gaussian(n, rng);
        if (sample.rejected) return 0.0;
        const RealMatrix zt_z = sample.z.transpose() * sample.z;  // Tr Z M Z^t = <M, Z^t Z>
        return gaussian_term(zt_z, m, std::log(sample.abs_det), power, sample.weight);
      },
      effort.samples, effort.seed);
  r.value *= prefactor / c_n;
  r.error_estimate *= std::abs(prefactor) / c_n;
  return r;
}

quad::IntegralResult spherical_function(const RealMatrix& g, const specfn::SpectralParams& lam,
                                        const Effort& effort) {
  const auto& group = lam.group;
  require_square_size(g, group.size(), "spherical_function");
  if (!matgrp::is_member(g, group, 1e-9)) {
    throw DomainError("spherical_function: g is not in the group");
  }
  const int m = group.spectral_dim();
  const auto& rho = group.rho();
  return quad::mc_integrate(
      [&](std::mt19937_64& rng) -> Complex {
        const RealMatrix k = matgrp::draw_maximal_compact(group, rng);
        const RealVector h = matgrp::iwasawa_log_a(k * g);
        Complex e = 0.0;
        for (int j = 0; j < m; ++j) e += (kI * lam.entries[j] - rho[j]) * h(j);
        return std::exp(e);
      },
      effort.samples, effort.seed);
}

quad::IntegralResult HeckeElement::evaluate(const RealMatrix& g) const {
  quad::IntegralResult r;
  r.evaluations = 1;
  switch (kind) {
    case HeckeKind::GlGaussian:
      r.value = q_group_gl(g, s);
      return r;
    case HeckeKind::GlGaussianTilde:
      r.value = q_group_gl_tilde(g, s);
      return r;
    case HeckeKind::GlSquared:
      return q2_group(g, s, effort);
    case HeckeKind::Classical:
      return q_group_classical(g, s, group, effort);
  }
  return r;
}

namespace {

quad::IntegralResult eigenvalue_gl(const HeckeElement& elem, const specfn::SpectralParams& lam) {
  const int l = elem.group.rank();
  const double r = elem.s.is().real();
  const Effort& effort = elem.effort;
  // Window along each torus coordinate: double-exponential on one side for
  // the Gaussian kinds, exponential with rate Re(is) otherwise.
  double lo = -(kTailDepth / r + 2.0), hi = kTailDepth / r + 2.0;
  if (elem.kind == HeckeKind::GlGaussianTilde) hi = 2.5;
  if (elem.kind == HeckeKind::GlGaussian) lo = -2.5;

  quad::Options opts;
  opts.rel_tol = effort.rel_tol;
  opts.min_levels = 3;

  if (l == 0) {
    const double lam1 = lam.entries[0];
    opts.initial_intervals = 64;
    opts.max_levels = 12;
    HeckeElement inner = elem;
    inner.effort.rel_tol = effort.rel_tol * 0.01;
    return quad::integrate_1d(
        [&](double x) {
          RealMatrix g(1, 1);
          g(0, 0) = std::exp(-x);
          return inner.evaluate(g).value * std::exp(kI * lam1 * x);
        },
        lo, hi, opts);
  }
  if (l == 1 && elem.kind == HeckeKind::GlGaussianTilde) {
    // phi(a^{-1} n^{-1}) = Qgl(n a): entry (2,1) is n e^{x1}; n = e^{-x1} m.
    const auto& rho = elem.group.rho();
    opts.initial_intervals = 16;
    opts.max_levels = 8;
    quad::Box box{{lo, lo, -4.0}, {hi, hi, 4.0}};
    return quad::integrate(
        [&](std::span<const double> v) {
          const double x1 = v[0], x2 = v[1];
          const double nv = std::exp(-x1) * v[2];
          RealMatrix na(2, 2);
          na << std::exp(x1), 0.0, nv * std::exp(x1), std::exp(x2);
          const Complex torus = std::exp((kI * lam.entries[0] - rho[0]) * x1 +
                                         (kI * lam.entries[1] - rho[1]) * x2);
          const double delta = std::exp(x1 - x2);
          return q_group_gl(na, elem.s) * torus * delta * std::exp(-x1);
        },
        box, opts);
  }
  throw DomainError("hecke_eigenvalue: GL quadrature covers GL_1 and the Qgl~ element on GL_2");
}

// Rank-1 classical groups: a trapezoid grid whose node values are built from
// common Gaussian samples, Lambda = d_G * A / B with A = sum_i w_i R-integrand
// at g_i and B the R-integrand at 0.
quad::IntegralResult eigenvalue_classical(const HeckeElement& elem,
                                          const specfn::SpectralParams& lam) {
  const auto& group = elem.group;
  if (group.rank() != 1) {
    throw DomainError("hecke_eigenvalue: classical groups are supported at rank 1 only");
  }
  const specfn::SpectralPoint& s = elem.s;
  const Complex is = s.is();
  const double r = is.real();
  if (!(r > 1.0)) throw DomainError("hecke_eigenvalue: classical rank 1 needs Re(is) > 1");
  const double lam1 = lam.entries[0];

  struct Node {
    RealMatrix m;  // g^t g + 1
    Complex weight;
  };
  std::vector<Node> nodes;
  const double t_max = kTailDepth / r + 2.0;
  const double ht = 0.1;
  if (group.kind() == matgrp::GroupKind::SOEven) {
    // One torus coordinate, trivial N_-; the factor 2 sums the two
    // components of the split group met by diag(+-e^t, +-e^{-t}).
    for (double t = -t_max; t <= t_max + 1e-12; t += ht) {
      const RealMatrix g = classical_torus({-t});
      nodes.push_back({g.transpose() * g + RealMatrix::Identity(2, 2),
                       2.0 * ht * std::exp(kI * lam1 * t)});
    }
  } else {
    // Sp_2 = SL_2: a = diag(e^t, e^{-t}), n_21 = e^{-t} sinh w, delta = e^{2t},
    // rho = 1. Node weight = e^{(i lam - 1) t} e^{2t} e^{-t} cosh w.
    const double w_max = kTailDepth / (r - 1.0) + 2.0;
    const double hw = 0.25, htt = 0.25;
    for (double t = -t_max; t <= t_max + 1e-12; t += htt)
      for (double w = -w_max; w <= w_max + 1e-12; w += hw) {
        const double nv = std::exp(-t) * std::sinh(w);
        RealMatrix g(2, 2);  // a^{-1} n^{-1}
        g << std::exp(-t), 0.0, -std::exp(t) * nv, std::exp(t);
        nodes.push_back({g.transpose() * g + RealMatrix::Identity(2, 2),
                         htt * hw * std::exp(kI * lam1 * t) * std::cosh(w)});
      }
  }
  const RealMatrix identity = RealMatrix::Identity(2, 2);
  const auto est = quad::mc_joint(
      [&](std::mt19937_64& rng, std::span<Complex> out) {
        const auto sample = matgrp::draw_gl_gaussian(2, rng);
        if (sample.rejected) return;
        const RealMatrix zzt = sample.z * sample.z.transpose();
        const double ld = std::log(sample.abs_det);
        Complex acc = 0.0;
        for (const auto& node : nodes) acc += node.weight * gaussian_term(zzt, node.m, ld, is, sample.weight);
        out[0] = acc;
        out[1] = gaussian_term(zzt, identity, ld, is, sample.weight);
      },
      2, elem.effort.samples, elem.effort.seed);
  auto res = quad::ratio(est, 0, 1);
  const Complex d = specfn::d_factor(group, s);
  res.value *= d;
  res.error_estimate *= std::abs(d);
  return res;
}

}  // namespace

quad::IntegralResult hecke_eigenvalue(const HeckeElement& elem, const specfn::SpectralParams& lam) {
  if (!(lam.group == elem.group)) {
    throw ShapeError("hecke_eigenvalue: spectral parameters belong to a different group");
  }
  elem.s.require_convergent();
  if (elem.kind == HeckeKind::Classical) {
    if (elem.group.kind() == matgrp::GroupKind::GL) {
      throw DomainError("hecke_eigenvalue: classical element needs an SO_even or Sp group");
    }
    return eigenvalue_classical(elem, lam);
  }
  if (elem.group.kind() != matgrp::GroupKind::GL) {
    throw DomainError("hecke_eigenvalue: Gaussian elements live on GL");
  }
  return eigenvalue_gl(elem, lam);
}

quad::IntegralResult convolve_gl1(const HeckeElement& a, const HeckeElement& b, double h,
                                  double rel_tol) {
  if (a.group.size() != 1 || b.group.size() != 1) throw ShapeError("convolve_gl1: GL_1 elements");
  if (h == 0.0 || !std::isfinite(h)) throw SingularMatrixError("convolve_gl1: h must be nonzero");
  // Both factors are even, so du over +-e^y with mass 1/2 each is dy.
  const double r = std::min(a.s.is().real(), b.s.is().real());
  if (!(r > 0.0)) throw DomainError("convolve_gl1: Re(is) must be > 0");
  const double reach = kTailDepth / r + std::abs(std::log(std::abs(h))) + 3.0;
  quad::Options opts;
  opts.rel_tol = rel_tol;
  opts.initial_intervals = 64;
  opts.min_levels = 3;
  opts.max_levels = 12;
  return quad::integrate_1d(
      [&](double y) {
        RealMatrix left(1, 1), right(1, 1);
        left(0, 0) = h * std::exp(-y);
        right(0, 0) = std::exp(y);
        return a.evaluate(left).value * b.evaluate(right).value;
      },
      -reach, reach, opts);
}

quad::IntegralResult r_g(const RealMatrix& g, const specfn::SpectralPoint& s,
                         const matgrp::GroupTag& group, const Effort& effort) {
  if (group.kind() == matgrp::GroupKind::GL) {
    throw DomainError("r_g: needs an SO_even or Sp group tag");
  }
  const int n = group.size();
  require_square_size(g, n, "r_g");
  s.require_convergent(n - 1.0);
  const RealMatrix m = g.transpose() * g + RealMatrix::Identity(n, n);
  const Complex is = s.is();
  return quad::mc_integrate(
      [&](std::mt19937_64& rng) -> Complex {
        const auto sample = matgrp::draw_gl_gaussian(n, rng);
        if (sample.rejected) return 0.0;
        const RealMatrix zzt = sample.z * sample.z.transpose();  // Tr Z^t M Z = <M, Z Z^t>
        return gaussian_term(zzt, m, std::log(sample.abs_det), is, sample.weight);
      },
      effort.samples, effort.seed);
}

quad::IntegralResult q_group_classical(const RealMatrix& g, const specfn::SpectralPoint& s,
                                       const matgrp::GroupTag& group, const Effort& effort) {
  if (group.kind() == matgrp::GroupKind::GL) {
    throw DomainError("q_group_classical: needs an SO_even or Sp group tag");
  }
  const int n = group.size();
  require_square_size(g, n, "q_group_classical");
  s.require_convergent(n - 1.0);
  const RealMatrix m = g.transpose() * g + RealMatrix::Identity(n, n);
  const RealMatrix identity = RealMatrix::Identity(n, n);
  const Complex is = s.is();
  const auto est = quad::mc_joint(
      [&](std::mt19937_64& rng, std::span<Complex> out) {
        const auto sample = matgrp::draw_gl_gaussian(n, rng);
        if (sample.rejected) return;
        const RealMatrix zzt = sample.z * sample.z.transpose();
        const double ld = std::log(sample.abs_det);
        out[0] = gaussian_term(zzt, m, ld, is, sample.weight);
        out[1] = gaussian_term(zzt, identity, ld, is, sample.weight);
      },
      2, effort.samples, effort.seed);
  auto r = quad::ratio(est, 0, 1);
  const Complex d = specfn::d_factor(group, s);
  r.value *= d;
  r.error_estimate *= std::abs(d);
  return r;
}

Complex q_so2_closed(double t, const specfn::SpectralPoint& s) {
  s.require_convergent();
  const Complex is = s.is();
  // (e^t + e^{-t})^{-is} = exp(-is (|t| + log(1 + e^{-2|t|})))
  const double at = std::abs(t);
  return specfn::gamma_r(2.0 * is) * std::exp(-is * (at + std::log1p(std::exp(-2.0 * at))));
}

quad::IntegralResult l_so2_integral(const specfn::SpectralPoint& s, double lam, double rel_tol) {
  s.require_convergent();
  const double r = s.is().real();
  const double t_max = kTailDepth / r + 2.0;
  quad::Options opts;
  opts.rel_tol = rel_tol;
  opts.initial_intervals = 64;
  opts.min_levels = 3;
  auto res = quad::integrate_1d(
      [&](double t) { return std::exp(-kI * lam * t) * q_so2_closed(t, s); }, -t_max, t_max, opts);
  res.value *= 2.0;
  res.error_estimate *= 2.0;
  return res;
}

RealMatrix classical_torus(const std::vector<double>& t) {
  const int l = static_cast<int>(t.size());
  if (l < 1) throw ShapeError("classical_torus: need at least one coordinate");
  RealMatrix a = RealMatrix::Zero(2 * l, 2 * l);
  for (int i = 0; i < l; ++i) {
    a(i, i) = std::exp(t[i]);
    a(2 * l - 1 - i, 2 * l - 1 - i) = std::exp(-t[i]);
  }
  return a;
}

}  // namespace baxterq::hecke
