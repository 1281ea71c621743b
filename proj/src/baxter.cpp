#include "baxterq/baxter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "baxterq/errors.hpp"
#include "baxterq/matgrp.hpp"
#include "baxterq/whittaker.hpp"

namespace baxterq::baxter {

namespace {

constexpr double kWindowDepth = 42.0;

int rank_of(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) {
    throw ShapeError("baxter kernel: x and y must be non-empty and of equal length");
  }
  return static_cast<int>(x.size()) - 1;
}

double rho(int l, int j) { return 0.5 * l - j; }  // 0-based j

// Half-width d with pi e^{2d} >= depth + c d: where a double-exponential
// side of the kernel is cut.
double double_exp_margin(double c) {
  double d = 1.0;
  for (int it = 0; it < 50; ++it) d = 0.5 * std::log((kWindowDepth + c * d) / kPi);
  return std::max(d, 0.5);
}

}  // namespace

Complex q_kernel(std::span<const double> x, std::span<const double> y, Complex s) {
  const int l = rank_of(x, y);
  const Complex is = kI * s;
  Complex e = 0.0;
  for (int j = 0; j <= l; ++j) e += (is - rho(l, j)) * (x[j] - y[j]);
  double d = 0.0;
  for (int k = 0; k < l; ++k) d += std::exp(2.0 * (x[k] - y[k])) + std::exp(2.0 * (y[k + 1] - x[k]));
  d += std::exp(2.0 * (x[l] - y[l]));
  return std::ldexp(1.0, l + 1) * std::exp(e - kPi * d);
}

Complex q_tilde_kernel(std::span<const double> x, std::span<const double> y, Complex s) {
  const int l = rank_of(x, y);
  const Complex is = kI * s;
  Complex e = 0.0;
  for (int j = 0; j <= l; ++j) e += (is + rho(l, j)) * (y[j] - x[j]);
  double d = 0.0;
  for (int k = 0; k < l; ++k) d += std::exp(2.0 * (y[k] - x[k])) + std::exp(2.0 * (x[k + 1] - y[k]));
  d += std::exp(2.0 * (y[l] - x[l]));
  return std::ldexp(1.0, l + 1) * std::exp(e - kPi * d);
}

Complex kernel(KernelKind kind, std::span<const double> x, std::span<const double> y, Complex s) {
  return kind == KernelKind::Plain ? q_kernel(x, y, s) : q_tilde_kernel(x, y, s);
}

quad::Box apply_window(KernelKind kind, std::span<const double> x, const specfn::SpectralPoint& s,
                       std::span<const double> growth) {
  const int l = static_cast<int>(x.size()) - 1;
  if (l < 0) throw ShapeError("apply_q: empty point");
  if (!growth.empty() && growth.size() != x.size()) {
    throw ShapeError("apply_q: growth vector has the wrong length");
  }
  s.require_convergent();
  auto gamma = [&](int j) { return growth.empty() ? 0.0 : growth[j]; };
  const double re_is = s.is().real();
  double c = std::abs(re_is) + 1.0;
  for (int j = 0; j <= l; ++j) c = std::max(c, std::abs(re_is) + std::abs(rho(l, j)) + std::abs(gamma(j)) + 1.0);
  const double d = double_exp_margin(c);

  quad::Box box;
  box.lo.resize(l + 1);
  box.hi.resize(l + 1);
  for (int j = 0; j <= l; ++j) {
    if (kind == KernelKind::Plain) {
      box.lo[j] = x[j] - d;
      if (j > 0) {
        box.hi[j] = x[j - 1] + d;
      } else {
        const double rate = re_is - rho(l, 0) - gamma(0);
        if (!(rate > 0.0)) throw DomainError("apply_q: integral diverges (Re(is) too small for f)");
        box.hi[j] = x[0] + (kWindowDepth + 2.0) / rate;
      }
    } else {
      box.hi[j] = x[j] + d;
      if (j < l) {
        box.lo[j] = x[j + 1] - d;
      } else {
        const double rate = re_is + rho(l, l) + gamma(l);
        if (!(rate > 0.0)) throw DomainError("apply_q: integral diverges (Re(is) too small for f)");
        box.lo[j] = x[l] - (kWindowDepth + 2.0) / rate;
      }
    }
    if (box.hi[j] - box.lo[j] < 2.0 * d) {
      // The two double-exponential walls overlap; the kernel is below
      // e^{-depth} everywhere, keep a nominal window.
      const double mid = 0.5 * (box.hi[j] + box.lo[j]);
      box.lo[j] = mid - d;
      box.hi[j] = mid + d;
    }
  }
  return box;
}

quad::IntegralResult apply_q(KernelKind kind, const Function& f, std::span<const double> x,
                             const specfn::SpectralPoint& s, double rel_tol,
                             std::span<const double> growth) {
  const int l = static_cast<int>(x.size()) - 1;
  if (l > 2) throw DomainError("apply_q: quadrature is limited to l <= 2");
  const quad::Box box = apply_window(kind, x, s, growth);
  const std::vector<double> xs(x.begin(), x.end());
  quad::Options opts;
  opts.rel_tol = rel_tol;
  opts.initial_intervals = 16;
  opts.min_levels = 3;
  opts.max_levels = l == 0 ? 14 : (l == 1 ? 9 : 7);
  return quad::integrate(
      [&](std::span<const double> y) {
        const Complex k = kernel(kind, xs, y, s.s);
        if (k == 0.0) return Complex(0.0, 0.0);
        return k * f(y);
      },
      box, opts);
}

quad::IntegralResult apply_q_whittaker(KernelKind kind, const specfn::SpectralParams& lam,
                                       std::span<const double> x, const specfn::SpectralPoint& s,
                                       double rel_tol) {
  if (lam.group.kind() != matgrp::GroupKind::GL || lam.group.rank() > 1) {
    throw DomainError("apply_q_whittaker: GL rank 0 or 1 expected");
  }
  std::vector<double> growth(lam.group.size());
  for (int j = 0; j < lam.group.size(); ++j) growth[j] = -lam.group.rho()[j];
  return apply_q(
      kind, [&](std::span<const double> y) { return whittaker::whittaker_phi(lam, y); }, x, s,
      rel_tol, growth);
}

quad::IntegralResult kernel_from_group_function(std::span<const double> x,
                                                std::span<const double> y,
                                                const specfn::SpectralPoint& s, double rel_tol,
                                                CharacterMode mode) {
  const int l = rank_of(x, y);
  if (l > 2) throw DomainError("kernel_from_group_function: l <= 2 only");
  s.require_convergent();
  const int n = l + 1;
  const Complex is = s.is();

  // log delta(a~) = sum_{i<j} (y_i - y_j)
  RealVector ylog(n);
  for (int j = 0; j < n; ++j) ylog(j) = y[j];
  const double log_delta = std::log(matgrp::modular_delta(ylog));

  struct Entry {
    int row, col;
    double q;      // coefficient of n^2 in Tr g^t g
    double shift;  // imaginary shift of the contour
  };
  std::vector<Entry> entries;
  for (int col = 0; col < n; ++col)
    for (int row = col + 1; row < n; ++row) {
      const double q = std::exp(2.0 * (y[col] - x[row]));
      const bool subdiag = row == col + 1;
      entries.push_back({row, col, q, (mode == CharacterMode::Whittaker && subdiag) ? 1.0 / q : 0.0});
    }

  auto log_integrand = [&](std::span<const double> t) {
    ComplexMatrix g = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) g(j, j) = std::exp(y[j] - x[j]);
    Complex log_chi = 0.0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      const Complex nij(t[k], e.shift);
      g(e.row, e.col) = std::exp(y[e.col] - x[e.row]) * nij;
      if (mode == CharacterMode::Whittaker && e.row == e.col + 1) log_chi += 2.0 * kPi * kI * nij;
    }
    // Holomorphic continuation of |det g|^{is+l/2} e^{-pi Tr g^t g}.
    const Complex det = g.determinant();
    Complex trace = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) trace += g(i, j) * g(i, j);
    return double(n) * std::log(2.0) + (is + 0.5 * l) * std::log(det) - kPi * trace + log_chi +
           log_delta;
  };

  if (entries.empty()) {
    quad::IntegralResult r;
    r.value = std::exp(log_integrand({}));
    r.evaluations = 1;
    return r;
  }

  quad::Box box;
  for (const auto& e : entries) {
    const double half = std::sqrt(kWindowDepth / (kPi * e.q)) + 0.5 / std::sqrt(e.q);
    box.lo.push_back(-half);
    box.hi.push_back(half);
  }
  quad::Options opts;
  opts.rel_tol = rel_tol;
  opts.initial_intervals = 8;
  opts.min_levels = 3;
  opts.max_levels = 9;
  return quad::integrate([&](std::span<const double> t) { return std::exp(log_integrand(t)); },
                         box, opts);
}

Complex gaussian_identity(double omega, double p) {
  if (!(p > 0.0) || !std::isfinite(omega)) throw DomainError("gaussian_identity: need p > 0");
  return std::sqrt(kPi / p) * std::exp(-omega * omega / (4.0 * p));
}

Complex euler_identity(Complex nu, double a) {
  if (!(nu.real() > 0.0) || !(a > 0.0)) throw DomainError("euler_identity: need Re nu > 0, a > 0");
  return 0.5 * std::exp(-0.5 * nu * std::log(a) + specfn::log_gamma(0.5 * nu));
}

// --- grid operators ------------------------------------------------------

int GridSpec::size() const {
  int s = 1;
  for (int j = 0; j < dim; ++j) s *= points;
  return s;
}

std::vector<double> GridSpec::point(int flat) const {
  std::vector<double> p(dim);
  for (int j = dim - 1; j >= 0; --j) {
    p[j] = lo + step() * double(flat % points);
    flat /= points;
  }
  return p;
}

namespace {

void validate_grid(const GridSpec& grid) {
  if (grid.dim < 1 || grid.dim > 2) throw ShapeError("grid operator: dim must be 1 or 2");
  if (grid.points < 3 || !(grid.hi > grid.lo)) throw DomainError("grid operator: bad grid");
  const double n = grid.size();
  if (16.0 * n * n > kGridMemoryCap) {
    std::ostringstream os;
    os << "grid operator of " << grid.size() << " points needs " << 16.0 * n * n / 1048576.0
       << " MiB, above the cap of " << kGridMemoryCap / 1048576.0 << " MiB";
    throw BudgetError(os.str());
  }
}

}  // namespace

GridOperator build_grid_operator(OperatorKind kind, const GridSpec& grid,
                                 const specfn::SpectralPoint& s) {
  validate_grid(grid);
  const int n = grid.size();
  const double h = grid.step();
  const int l = grid.dim - 1;
  GridOperator op;
  op.grid = grid;
  op.kind = kind;
  op.matrix = ComplexMatrix::Zero(n, n);

  std::vector<std::vector<double>> pts(n);
  std::vector<double> weight(n);
  for (int a = 0; a < n; ++a) {
    pts[a] = grid.point(a);
    double w = 1.0;
    int rem = a;
    for (int j = 0; j < grid.dim; ++j) {
      const int i = rem % grid.points;
      rem /= grid.points;
      w *= (i == 0 || i == grid.points - 1) ? 0.5 * h : h;
    }
    weight[a] = w;
  }

  if (kind == OperatorKind::Q || kind == OperatorKind::QTilde) {
    s.require_convergent();
    const KernelKind kk = kind == OperatorKind::Q ? KernelKind::Plain : KernelKind::Tilde;
    quad::parallel_for(n, [&](int a) {
      for (int b = 0; b < n; ++b) op.matrix(a, b) = kernel(kk, pts[a], pts[b], s.s) * weight[b];
    });
    return op;
  }

  // H2 in the Phi gauge.
  const double inv_h2 = 1.0 / (h * h);
  double rho_sq = 0.0;
  for (int j = 0; j <= l; ++j) rho_sq += rho(l, j) * rho(l, j);
  for (int a = 0; a < n; ++a) {
    const auto& p = pts[a];
    double potential = 0.0;
    if (l == 1) potential = 4.0 * kPi * kPi * std::exp(2.0 * (p[1] - p[0]));
    op.matrix(a, a) = double(grid.dim) * inv_h2 - 0.5 * rho_sq + potential;
    int stride = 1;
    for (int j = grid.dim - 1; j >= 0; --j) {
      const int i = (a / stride) % grid.points;
      const double drift = rho(l, j) / (2.0 * h);
      if (i + 1 < grid.points) op.matrix(a, a + stride) = -0.5 * inv_h2 - drift;
      if (i > 0) op.matrix(a, a - stride) = -0.5 * inv_h2 + drift;
      stride *= grid.points;
    }
  }
  return op;
}

double commutator_residual(const GridOperator& a, const GridOperator& b, double margin) {
  if (!(a.grid.dim == b.grid.dim && a.grid.points == b.grid.points && a.grid.lo == b.grid.lo &&
        a.grid.hi == b.grid.hi)) {
    throw ShapeError("commutator_residual: operators live on different grids");
  }
  std::vector<Eigen::Index> interior;
  for (int k = 0; k < a.grid.size(); ++k) {
    const auto p = a.grid.point(k);
    bool inside = true;
    for (double v : p) inside = inside && std::abs(v) <= margin + 1e-12;
    if (inside) interior.push_back(k);
  }
  if (interior.empty()) throw DomainError("commutator_residual: no interior points");
  const ComplexMatrix ab = a.matrix(interior, Eigen::all) * b.matrix(Eigen::all, interior);
  const ComplexMatrix ba = b.matrix(interior, Eigen::all) * a.matrix(Eigen::all, interior);
  return (ab - ba).norm() / (a.matrix.norm() * b.matrix.norm());
}

}  // namespace baxterq::baxter
