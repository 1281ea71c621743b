#include "baxterq/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "baxterq/baxter.hpp"
#include "baxterq/errors.hpp"
#include "baxterq/hecke.hpp"
#include "baxterq/quad.hpp"
#include "baxterq/specfn.hpp"
#include "baxterq/whittaker.hpp"

namespace baxterq::verify {

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::Relative: return "relative";
    case Comparison::AtMost: return "at_most";
    case Comparison::AtLeast: return "at_least";
    case Comparison::Sigma: return "sigma";
  }
  return "?";
}

bool evaluate(const Check& c) {
  if (!c.note.empty()) return false;
  if (!std::isfinite(c.computed.real()) || !std::isfinite(c.computed.imag())) return false;
  switch (c.comparison) {
    case Comparison::Relative:
      return std::abs(c.computed - c.expected) <=
             c.tolerance * std::max(std::abs(c.expected), 1e-300);
    case Comparison::AtMost: return std::abs(c.computed) <= c.tolerance;
    case Comparison::AtLeast: return std::abs(c.computed) >= c.tolerance;
    case Comparison::Sigma:
      return c.error_estimate > 0.0 &&
             std::abs(c.computed - c.expected) <= c.tolerance * c.error_estimate;
  }
  return false;
}

bool Report::required_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.optional || c.pass; });
}

std::string Report::to_json(int indent) const {
  using json = nlohmann::ordered_json;
  auto cplx = [](Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; };
  json arr = json::array();
  for (const auto& c : checks) {
    json j{{"id", c.id},
           {"reference", c.reference},
           {"group", c.group},
           {"computed", cplx(c.computed)},
           {"expected", cplx(c.expected)},
           {"comparison", to_string(c.comparison)},
           {"tolerance", c.tolerance},
           {"error_estimate", c.error_estimate},
           {"pass", c.pass},
           {"optional", c.optional}};
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(std::move(j));
  }
  json doc{{"schema", 1},
           {"suite", suite},
           {"seed", seed},
           {"effort", effort},
           {"all_required_pass", required_pass()},
           {"checks", std::move(arr)}};
  return doc.dump(indent);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Ctx {
  const SuiteOptions& opts;
  std::vector<Check>& out;

  double tol(double t, Comparison c) const {
    return c == Comparison::AtLeast ? t / opts.tol_scale : t * opts.tol_scale;
  }

  // Runs `body`, which fills computed/expected/error_estimate. Exceptions
  // become failed checks with the message in `note`.
  Check& add(Check c, const std::function<void(Check&)>& body) {
    c.tolerance = tol(c.tolerance, c.comparison);
    const auto t0 = Clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      c.note = e.what();
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    c.pass = evaluate(c);
    out.push_back(std::move(c));
    return out.back();
  }
};

Check make(std::string id, std::string reference, int group, double tolerance,
           Comparison cmp = Comparison::Relative) {
  Check c;
  c.id = std::move(id);
  c.reference = std::move(reference);
  c.group = group;
  c.tolerance = tolerance;
  c.comparison = cmp;
  return c;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string fmt(Complex z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

std::string fmt(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s + ")";
}

// --- GL_1 eigenvalue ------------------------------------------------------

void suite_gl1(Ctx& ctx) {
  const auto gl1 = matgrp::GroupTag::gl(0);
  for (double lam : {0.0, 1.3, -1.3}) {
    for (Complex s : {Complex(0, -2), Complex(1, -3)}) {
      ctx.add(make("gl1.eigen lam=" + fmt(lam) + " s=" + fmt(s), "Q e^{i lam y} = Gamma_R(is - i lam) e^{i lam x}",
                   1, 1e-8),
              [&](Check& c) {
                const specfn::SpectralParams p({lam}, gl1);
                const double x[1] = {0.3};
                const auto r = baxter::apply_q_whittaker(baxter::KernelKind::Plain, p, x, {s}, 1e-11);
                c.computed = r.value / whittaker::whittaker_phi(p, x);
                c.expected = specfn::l_factor_gl({s}, p);
                c.error_estimate = r.error_estimate / std::abs(whittaker::whittaker_phi(p, x));
              });
    }
  }
}

// --- GL_2 eigenvalue and Toda -----------------------------------------------

void suite_gl2(Ctx& ctx) {
  const auto gl2 = matgrp::GroupTag::gl(1);
  const std::vector<std::vector<double>> lams = {{1.0, -1.0}, {0.5, -1.7}};
  const std::vector<std::vector<double>> xs = {{0.1, -0.2}, {0.5, 0.3}, {-0.4, 0.6}};
  for (const auto& lv : lams) {
    const specfn::SpectralParams p(lv, gl2);
    for (Complex s : {Complex(0, -4), Complex(1, -4)}) {
      for (auto kind : {baxter::KernelKind::Plain, baxter::KernelKind::Tilde}) {
        const bool tilde = kind == baxter::KernelKind::Tilde;
        const std::string tag = std::string(tilde ? "gl2.eigen-tilde" : "gl2.eigen") +
                                " lam=" + fmt(lv) + " s=" + fmt(s);
        const Complex expected = specfn::l_factor_gl({s}, tilde ? p.negated() : p);
        std::vector<Complex> evs;
        for (const auto& x : xs) {
          auto& c = ctx.add(make(tag + " x=" + fmt(x),
                                 tilde ? "Q~ Phi_lam = L(s,-lam) Phi_lam" : "Q Phi_lam = L(s,lam) Phi_lam",
                                 2, 1e-5),
                            [&](Check& c) {
                              const auto r = baxter::apply_q_whittaker(kind, p, x, {s}, 1e-8);
                              const Complex phi = whittaker::whittaker_phi(p, x);
                              c.computed = r.value / phi;
                              c.expected = expected;
                              c.error_estimate = r.error_estimate / std::abs(phi);
                            });
          if (c.note.empty()) evs.push_back(c.computed);
        }
        ctx.add(make(tag + " spread", "eigenvalue independent of x", 2, 1e-4, Comparison::AtMost),
                [&](Check& c) {
                  if (evs.size() != xs.size()) throw Error("eigenvalue evaluation failed");
                  double spread = 0.0;
                  for (const auto& a : evs)
                    for (const auto& b : evs) spread = std::max(spread, std::abs(a / b - 1.0));
                  c.computed = spread;
                });
      }
    }
  }

  // Toda eigen-equation by central differences on the half square x2 <= x1.
  const specfn::SpectralParams p({1.0, -1.0}, gl2);
  std::vector<whittaker::TorusPoint> grid;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= i; ++j) grid.push_back({-1.0 + 0.2 * i, -1.0 + 0.2 * j});
  whittaker::TodaConvergence conv{};
  ctx.add(make("toda.residual h=1e-3", "H2 Psi = E Psi", 6, 1e-4, Comparison::AtMost),
          [&](Check& c) {
            c.computed = whittaker::toda_h2_residual(p, grid, 1e-3);
            conv = whittaker::toda_h2_convergence(p, grid, 1e-3);
          });
  ctx.add(make("toda.order", "residual ratio under h -> h/2 is 4", 6, 0.125),
          [&](Check& c) {
            if (!(conv.at_half_h > 0.0)) throw Error("toda residual unavailable");
            c.computed = conv.ratio();
            c.expected = 4.0;
          });
}

// --- kernel reduction ---------------------------------------------------------

void suite_kernel(Ctx& ctx) {
  std::mt19937_64 rng(derive_seed(ctx.opts.seed, 3).value);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const specfn::SpectralPoint s{Complex(0, -2)};
  for (int l = 1; l <= 2; ++l) {
    const double tol = l == 1 ? 1e-8 : 1e-6;
    const double qtol = l == 1 ? 1e-11 : 1e-8;
    for (int k = 0; k < 10; ++k) {
      std::vector<double> x(l + 1), y(l + 1);
      for (auto& v : x) v = unit(rng);
      for (auto& v : y) v = unit(rng);
      const std::string at = " x=" + fmt(x) + " y=" + fmt(y);
      ctx.add(make("kernel.l" + std::to_string(l) + at,
                   "int_N delta Qgl(a^{-1} n a~) chi(n) dn = Q~(x,y)", 3, tol),
              [&](Check& c) {
                const auto r = baxter::kernel_from_group_function(x, y, s, qtol);
                c.computed = r.value;
                c.error_estimate = r.error_estimate;
                c.expected = baxter::q_tilde_kernel(x, y, s.s);
              });
      if (l != 1) continue;
      // One subdiagonal entry: the n-integral is a single Gaussian.
      const double q = std::exp(2.0 * (y[0] - x[1]));
      const Complex base = std::exp(y[0] - y[1]) * 4.0 *
                           std::exp((s.is() + 0.5) * (y[0] + y[1] - x[0] - x[1]) -
                                    kPi * (std::exp(2.0 * (y[0] - x[0])) +
                                           std::exp(2.0 * (y[1] - x[1]))));
      ctx.add(make("kernel.l1.gaussian" + at, "n-integral as a Gaussian with character", 3, tol),
              [&](Check& c) {
                c.computed = baxter::kernel_from_group_function(x, y, s, qtol).value;
                c.expected = base * baxter::gaussian_identity(2.0 * kPi, kPi * q);
              });
      ctx.add(make("kernel.l1.trivial" + at, "n-integral as a Gaussian without character", 3, tol),
              [&](Check& c) {
                c.computed = baxter::kernel_from_group_function(x, y, s, qtol,
                                                                baxter::CharacterMode::Trivial)
                                 .value;
                c.expected = base * baxter::gaussian_identity(0.0, kPi * q);
              });
    }
  }

  // Closed forms against direct quadrature.
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double p = 0.5 + 2.5 * u01(rng);
    const double omega = (2.0 * u01(rng) - 1.0) * std::sqrt(24.0 * p);
    ctx.add(make("gaussian p=" + fmt(p) + " omega=" + fmt(omega),
                 "int e^{i omega x - p x^2} dx", 4, 1e-10),
            [&](Check& c) {
              const auto r = quad::integrate(
                  [&](std::span<const double> v) {
                    return std::exp(Complex(-p * v[0] * v[0], omega * v[0]));
                  },
                  1, quad::DecaySpec{{0.0}, std::sqrt(kPi / p), quad::DecayKind::Gaussian}, 1e-13);
              c.computed = r.value;
              c.error_estimate = r.error_estimate;
              c.expected = baxter::gaussian_identity(omega, p);
            });
  }
  for (int k = 0; k < 20; ++k) {
    const Complex nu(0.5 + 3.5 * u01(rng), 6.0 * u01(rng) - 3.0);
    const double a = 0.2 + 4.8 * u01(rng);
    ctx.add(make("euler nu=" + fmt(nu) + " a=" + fmt(a), "int e^{nu x - a e^{2x}} dx", 4, 1e-10),
            [&](Check& c) {
              const double center = 0.5 * std::log(nu.real() / (2.0 * a));
              const auto r = quad::integrate(
                  [&](std::span<const double> v) {
                    return std::exp(nu * v[0] - a * std::exp(2.0 * v[0]));
                  },
                  1, quad::DecaySpec{{center}, 1.0 / nu.real(), quad::DecayKind::DoubleExponential},
                  1e-13);
              c.computed = r.value;
              c.error_estimate = r.error_estimate;
              c.expected = baxter::euler_identity(nu, a);
            });
  }
}

// --- commutators on a grid ----------------------------------------------------

void suite_commutators(Ctx& ctx) {
  const double margin = 1.5;
  std::map<int, std::pair<double, double>> res;
  for (int n : {41, 61}) {
    baxter::GridSpec g;
    g.points = n;
    baxter::GridOperator q1, q2, h2;
    bool built = true;
    std::string err;
    try {
      q1 = baxter::build_grid_operator(baxter::OperatorKind::Q, g, {Complex(0, -2)});
      q2 = baxter::build_grid_operator(baxter::OperatorKind::Q, g, {Complex(1, -3)});
      h2 = baxter::build_grid_operator(baxter::OperatorKind::H2, g, {Complex(0, -2)});
    } catch (const std::exception& e) {
      built = false;
      err = e.what();
    }
    const std::string np = " n=" + std::to_string(n);
    auto& a = ctx.add(make("commutator.QQ" + np, "[Q(-2i), Q(1-3i)] = 0", 5, 1e-3, Comparison::AtMost),
                      [&](Check& c) {
                        if (!built) throw Error(err);
                        c.computed = baxter::commutator_residual(q1, q2, margin);
                      });
    auto av = a.computed.real();
    auto& b = ctx.add(make("commutator.QH" + np, "[Q(-2i), H2] = 0", 5, 1e-3, Comparison::AtMost),
                      [&](Check& c) {
                        if (!built) throw Error(err);
                        c.computed = baxter::commutator_residual(q1, h2, margin);
                      });
    res[n] = {av, b.computed.real()};
  }
  auto shrink = [&](const char* id, double coarse, double fine) {
    ctx.add(make(id, "residual shrinks under grid refinement 41 -> 61", 5, 2.0, Comparison::AtLeast),
            [&](Check& c) {
              if (!(fine > 0.0) || !(coarse > 0.0)) throw Error("residual unavailable");
              c.computed = coarse / fine;
            });
  };
  shrink("commutator.QQ shrink", res[41].first, res[61].first);
  shrink("commutator.QH shrink", res[41].second, res[61].second);
}

// --- SO_2 -------------------------------------------------------------------------

void suite_so2(Ctx& ctx) {
  const auto so2 = matgrp::GroupTag::so_even(1);
  hecke::Effort e;
  e.samples = ctx.opts.effort > 0 ? ctx.opts.effort : 1'000'000;
  e.seed = derive_seed(ctx.opts.seed, 7);
  const specfn::SpectralPoint s{Complex(0, -2)};
  for (double t : {0.0, 0.7, 1.5}) {
    quad::IntegralResult r;
    const std::string at = " t=" + fmt(t);
    ctx.add(make("so2.group" + at, "MC Q_SO2 = Gamma_R(2is)(e^t + e^-t)^{-is}", 7, 3.0, Comparison::Sigma),
            [&](Check& c) {
              r = hecke::q_group_classical(hecke::classical_torus({t}), s, so2, e);
              c.computed = r.value;
              c.error_estimate = r.error_estimate;
              c.expected = hecke::q_so2_closed(t, s);
            });
    ctx.add(make("so2.group-se" + at, "relative MC standard error", 7, 0.02, Comparison::AtMost),
            [&](Check& c) {
              if (!(std::abs(r.value) > 0.0)) throw Error("MC estimate unavailable");
              c.computed = r.error_estimate / std::abs(r.value);
            });
  }
  for (double lam : {0.0, 1.3}) {
    for (Complex sv : {Complex(0, -2), Complex(0, -3)}) {
      ctx.add(make("so2.lfactor lam=" + fmt(lam) + " s=" + fmt(sv),
                   "2 int e^{-i lam t} Q_SO2 dt = Gamma_R(is-i lam) Gamma_R(is+i lam)", 7, 1e-8),
              [&](Check& c) {
                const auto r = hecke::l_so2_integral({sv}, lam);
                c.computed = r.value;
                c.error_estimate = r.error_estimate;
                c.expected = specfn::l_factor_classical({sv}, specfn::SpectralParams({lam}, so2));
              });
    }
  }
}

// --- the squared element on GL_1 -----------------------------------------------

void suite_square(Ctx& ctx) {
  const auto gl1 = matgrp::GroupTag::gl(0);
  for (double lam : {0.0, 1.3}) {
    for (Complex s : {Complex(0, -2), Complex(1, -3)}) {
      ctx.add(make("square.eigen lam=" + fmt(lam) + " s=" + fmt(s),
                   "eigenvalue of Q~ * Q = L(s,lam) L(s,-lam)", 8, 1e-8),
              [&](Check& c) {
                const hecke::HeckeElement q2{gl1, hecke::HeckeKind::GlSquared, {s}, {}};
                const specfn::SpectralParams p({lam}, gl1);
                const auto r = hecke::hecke_eigenvalue(q2, p);
                c.computed = r.value;
                c.error_estimate = r.error_estimate;
                c.expected = specfn::l_factor_gl({s}, p) * specfn::l_factor_gl({s}, p.negated());
              });
    }
  }
  const specfn::SpectralPoint s{Complex(0.5, -2.5)};
  const hecke::HeckeElement plain{gl1, hecke::HeckeKind::GlGaussian, s, {}};
  const hecke::HeckeElement tilde{gl1, hecke::HeckeKind::GlGaussianTilde, s, {}};
  for (double h : {0.3, 0.8, 1.0, -1.7, 3.5}) {
    ctx.add(make("square.convolution h=" + fmt(h), "Q2 = Q~ * Q pointwise", 8, 1e-6),
            [&](Check& c) {
              RealMatrix g(1, 1);
              g(0, 0) = h;
              hecke::Effort eff;
              eff.rel_tol = 1e-11;
              const auto lhs = hecke::q2_group(g, s, eff);
              const auto rhs = hecke::convolve_gl1(tilde, plain, h, 1e-11);
              c.computed = lhs.value;
              c.error_estimate = lhs.error_estimate + rhs.error_estimate;
              c.expected = rhs.value;
            });
  }
}

// --- Sp_2 by Monte Carlo -----------------------------------------------------------

void suite_sp2(Ctx& ctx) {
  const auto sp2 = matgrp::GroupTag::sp(1);
  hecke::Effort e;
  e.samples = ctx.opts.effort > 0 ? ctx.opts.effort : 20'000;
  e.seed = derive_seed(ctx.opts.seed, 9);
  const specfn::SpectralPoint s{Complex(0, -4)};
  auto c0 = make("sp2.eigen lam=0.5 s=-4i", "Sp_2 eigenvalue = L(s, lam) for the SO_3 dual", 9, 0.1);
  c0.optional = true;
  ctx.add(c0, [&](Check& c) {
    const hecke::HeckeElement q{sp2, hecke::HeckeKind::Classical, s, e};
    const specfn::SpectralParams p({0.5}, sp2);
    const auto r = hecke::hecke_eigenvalue(q, p);
    c.computed = r.value;
    c.error_estimate = r.error_estimate;
    c.expected = specfn::l_factor_classical(s, p);
  });
}

const std::map<std::string, std::function<void(Ctx&)>>& registry() {
  static const std::map<std::string, std::function<void(Ctx&)>> r = {
      {"gl1", suite_gl1},         {"gl2", suite_gl2}, {"kernel-reduction", suite_kernel},
      {"commutators", suite_commutators}, {"so2", suite_so2}, {"prop23", suite_square},
      {"sp2-mc", suite_sp2}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"gl1", "gl2", "kernel-reduction", "commutators",
                                                 "so2", "prop23", "sp2-mc"};
  return names;
}

Report run_suite(const std::string& name, const SuiteOptions& opts) {
  if (!(opts.tol_scale > 0.0) || !std::isfinite(opts.tol_scale)) {
    throw DomainError("tolerance scale must be finite and > 0");
  }
  if (opts.effort < 0) throw DomainError("effort must be >= 0");
  Report rep;
  rep.suite = name;
  rep.seed = opts.seed.value;
  rep.effort = opts.effort;
  Ctx ctx{opts, rep.checks};
  if (name == "all") {
    for (const auto& n : suite_names()) registry().at(n)(ctx);
    return rep;
  }
  const auto it = registry().find(name);
  if (it == registry().end()) throw DomainError("unknown suite: " + name);
  it->second(ctx);
  return rep;
}

}  // namespace baxterq::verify
