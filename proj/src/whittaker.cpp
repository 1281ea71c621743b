#include "baxterq/whittaker.hpp"

#include <algorithm>
#include <cmath>

#include "baxterq/errors.hpp"
#include "baxterq/quad.hpp"

namespace baxterq::whittaker {

namespace {

void require_gl_rank(const specfn::SpectralParams& lam, int max_rank) {
  if (lam.group.kind() != matgrp::GroupKind::GL) {
    throw DomainError("whittaker: GL spectral parameters expected");
  }
  if (lam.group.rank() > max_rank) {
    throw DomainError("whittaker: closed forms exist for rank 0 and 1 only");
  }
}

}  // namespace

Complex kbessel(Complex nu, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("kbessel: z must be finite and > 0");
  if (z > 700.0) return 0.0;
  const double growth = std::abs(nu.real());
  // Integrand normalized by e^{-z}: e^{-z (cosh t - 1)} cosh(nu t). Cut where
  // it falls below e^{-40}.
  double t_max = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double next = std::acosh(1.0 + (40.0 + growth * t_max) / z);
    if (std::abs(next - t_max) < 1e-10) break;
    t_max = next;
  }
  const double h0 = std::min(0.25, 6.0 / (z + 40.0)) / (1.0 + 0.25 * std::abs(nu.imag()));
  quad::Options opts;
  opts.rel_tol = 1e-14;
  // cos(Im nu t) makes the integral cancel; rounding limits the absolute
  // accuracy to about eps times the integral of the modulus.
  opts.abs_tol = 1e-15 * t_max * std::exp(growth * t_max);
  opts.initial_intervals = std::max(16, static_cast<int>(std::ceil(t_max / h0)));
  opts.min_levels = 2;
  opts.max_levels = 10;
  const auto r = quad::integrate_1d(
      [&](double t) { return std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(nu * t); }, 0.0,
      t_max, opts);
  return r.value * std::exp(-z);
}

Complex whittaker_gl1(double lam, double x) { return std::exp(kI * (lam * x)); }

Complex whittaker_gl2(const specfn::SpectralParams& lam, double x1, double x2) {
  require_gl_rank(lam, 1);
  if (lam.group.rank() != 1) throw DomainError("whittaker_gl2 needs rank 1");
  const double l1 = lam.entries[0];
  const double l2 = lam.entries[1];
  const double u = x2 - x1;
  // 2 pi e^u > 700 means the Bessel factor is below e^{-700}.
  if (u > std::log(700.0 / (2.0 * kPi))) return 0.0;
  const Complex nu = kI * (0.5 * (l1 - l2));
  return std::exp(kI * (0.5 * (l1 + l2) * (x1 + x2))) * kbessel(nu, 2.0 * kPi * std::exp(u));
}

Complex whittaker_gl2_rescaled(const specfn::SpectralParams& lam, double x1, double x2) {
  const auto& rho = lam.group.rho();
  const Complex psi = whittaker_gl2(lam, x1, x2);
  return std::exp(-(rho[0] * x1 + rho[1] * x2)) * psi;
}

Complex whittaker_psi(const specfn::SpectralParams& lam, std::span<const double> x) {
  require_gl_rank(lam, 1);
  if (static_cast<int>(x.size()) != lam.group.size()) {
    throw ShapeError("whittaker: point has the wrong dimension");
  }
  if (lam.group.rank() == 0) return whittaker_gl1(lam.entries[0], x[0]);
  return whittaker_gl2(lam, x[0], x[1]);
}

Complex whittaker_phi(const specfn::SpectralParams& lam, std::span<const double> x) {
  require_gl_rank(lam, 1);
  if (static_cast<int>(x.size()) != lam.group.size()) {
    throw ShapeError("whittaker: point has the wrong dimension");
  }
  if (lam.group.rank() == 0) return whittaker_gl1(lam.entries[0], x[0]);
  return whittaker_gl2_rescaled(lam, x[0], x[1]);
}

double toda_energy(const specfn::SpectralParams& lam) {
  double e = 0.0;
  for (double v : lam.entries) e += v * v;
  return 0.5 * e;
}

namespace {

double residual_at(const specfn::SpectralParams& lam, const std::vector<TorusPoint>& grid,
                   double h) {
  const int n = lam.group.size();
  const double energy = toda_energy(lam);
  double worst = 0.0;
  for (const auto& p : grid) {
    if (static_cast<int>(p.size()) != n) throw ShapeError("toda residual: bad grid point size");
    const Complex f0 = whittaker_psi(lam, p);
    if (std::abs(f0) == 0.0) continue;
    Complex lap = 0.0;
    std::vector<double> q = p;
    for (int j = 0; j < n; ++j) {
      q[j] = p[j] + h;
      const Complex fp = whittaker_psi(lam, q);
      q[j] = p[j] - h;
      const Complex fm = whittaker_psi(lam, q);
      q[j] = p[j];
      lap += (fp - 2.0 * f0 + fm) / (h * h);
    }
    double potential = 0.0;
    if (n == 2) potential = 4.0 * kPi * kPi * std::exp(2.0 * (p[1] - p[0]));
    const Complex r = -0.5 * lap + (potential - energy) * f0;
    worst = std::max(worst, std::abs(r) / std::abs(f0));
  }
  return worst;
}

}  // namespace

TodaConvergence toda_h2_convergence(const specfn::SpectralParams& lam,
                                    const std::vector<TorusPoint>& grid, double h) {
  require_gl_rank(lam, 1);
  if (!(h > 0.0)) throw DomainError("toda residual: h must be > 0");
  if (grid.empty()) throw ShapeError("toda residual: empty grid");
  return {residual_at(lam, grid, h), residual_at(lam, grid, 0.5 * h)};
}

double toda_h2_residual(const specfn::SpectralParams& lam, const std::vector<TorusPoint>& grid,
                        double h) {
  const auto c = toda_h2_convergence(lam, grid, h);
  // Below ~1e-9 the difference quotient is at its rounding floor.
  if (c.at_half_h >= c.at_h && c.at_h > 1e-9) {
    throw StepTooLargeError("toda residual does not shrink under h -> h/2; reduce h");
  }
  return c.at_h;
}

}  // namespace baxterq::whittaker
