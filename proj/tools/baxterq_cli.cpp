// baxterq: lfactor / eval / verify front end.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "baxterq/baxter.hpp"
#include "baxterq/errors.hpp"
#include "baxterq/hecke.hpp"
#include "baxterq/specfn.hpp"
#include "baxterq/verify.hpp"
#include "baxterq/whittaker.hpp"

using namespace baxterq;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::vector<double> parse_csv(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

Complex parse_complex(const std::string& text, const char* what) {
  const auto v = parse_csv(text, what);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() != 2) throw UsageError(std::string(what) + ": expected re,im");
  return {v[0], v[1]};
}

// "a,b;c,d" row by row.
RealMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_csv(row, "--g"));
  const auto n = rows.size();
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw UsageError("--g: matrix must be square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

matgrp::GroupTag parse_group(const std::string& name, int l) {
  if (l < 0) throw UsageError("--l must be >= 0");
  if (name == "gl") return matgrp::GroupTag::gl(l);
  if (name == "so-even") return matgrp::GroupTag::so_even(l);
  if (name == "sp") return matgrp::GroupTag::sp(l);
  throw UsageError("unknown group '" + name + "' (gl, so-even, sp)");
}

json cplx(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json result_json(const quad::IntegralResult& r) {
  json j = cplx(r.value);
  j["error_estimate"] = r.error_estimate;
  j["evaluations"] = r.evaluations;
  if (r.degenerate) j["degenerate"] = true;
  return j;
}

struct GridArg {
  double lo, hi;
  int n;
};

GridArg parse_grid(const std::string& text) {
  const auto v = parse_csv(text, "--grid");
  if (v.size() != 3 || v[2] < 2 || v[2] != std::floor(v[2]) || !(v[1] > v[0])) {
    throw UsageError("--grid: expected lo,hi,n with lo < hi and n >= 2");
  }
  return {v[0], v[1], static_cast<int>(v[2])};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Baxter operators, Whittaker functions and Archimedean L-factors"};
  app.require_subcommand(1);

  // lfactor
  auto* lf = app.add_subcommand("lfactor", "local L-factor L(s, lambda)");
  std::string lf_group = "gl", lf_s, lf_lam;
  int lf_l = 0;
  lf->add_option("--group", lf_group, "gl | so-even | sp");
  lf->add_option("--l", lf_l, "rank");
  lf->add_option("--s", lf_s, "s as re,im")->required();
  lf->add_option("--lam", lf_lam, "lambda entries, comma separated")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate one object");
  std::string ev_object, ev_group = "gl", ev_kind = "gaussian", ev_s = "0,-2", ev_lam, ev_x, ev_y,
                         ev_g, ev_grid;
  int ev_l = 0;
  bool ev_tilde = false, ev_rescaled = false;
  double ev_tol = 1e-10, ev_samples = 200'000;
  std::uint64_t ev_seed = 20240917;
  ev->add_option("object", ev_object, "q-kernel | whittaker | spherical | q-group | r-g")
      ->required()
      ->check(CLI::IsMember({"q-kernel", "whittaker", "spherical", "q-group", "r-g"}));
  ev->add_option("--group", ev_group, "gl | so-even | sp");
  ev->add_option("--kind", ev_kind, "q-group on GL: gaussian | tilde | squared");
  ev->add_option("--l", ev_l, "rank");
  ev->add_option("--s", ev_s, "s as re,im");
  ev->add_option("--lam", ev_lam, "lambda entries");
  ev->add_option("--x", ev_x, "torus point");
  ev->add_option("--y", ev_y, "second torus point (q-kernel)");
  ev->add_option("--g", ev_g, "matrix, rows separated by ';'");
  ev->add_option("--grid", ev_grid, "whittaker: lo,hi,n; prints a CSV table");
  ev->add_flag("--tilde", ev_tilde, "q-kernel: the tilde kernel");
  ev->add_flag("--rescaled", ev_rescaled, "whittaker: Phi = e^{-<rho,x>} Psi");
  ev->add_option("--tol", ev_tol, "relative tolerance for quadrature");
  ev->add_option("--samples", ev_samples, "Monte Carlo samples");
  ev->add_option("--seed", ev_seed, "Monte Carlo seed");

  // verify
  auto* vf = app.add_subcommand("verify", "run a verification suite");
  std::string vf_suite = "all", vf_out;
  std::uint64_t vf_seed = 7;
  double vf_effort = 0, vf_tol = 1.0;
  std::vector<std::string> suites = verify::suite_names();
  suites.push_back("all");
  vf->add_option("--suite", vf_suite)->check(CLI::IsMember(suites));
  vf->add_option("--seed", vf_seed);
  vf->add_option("--effort", vf_effort, "Monte Carlo samples (0 = suite default)");
  vf->add_option("--out", vf_out, "write the JSON report here instead of stdout");
  vf->add_option("--tol", vf_tol, "tolerance scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (lf->parsed()) {
      const auto group = parse_group(lf_group, lf_l);
      const specfn::SpectralParams lam(parse_csv(lf_lam, "--lam"), group);
      const specfn::SpectralPoint s{parse_complex(lf_s, "--s")};
      const Complex v = group.kind() == matgrp::GroupKind::GL ? specfn::l_factor_gl(s, lam)
                                                               : specfn::l_factor_classical(s, lam);
      std::cout << cplx(v).dump() << "\n";
      return 0;
    }

    if (ev->parsed()) {
      const specfn::SpectralPoint s{parse_complex(ev_s, "--s")};
      const auto need = [](const std::string& v, const char* name) {
        if (v.empty()) throw UsageError(std::string(name) + " is required");
        return v;
      };
      hecke::Effort effort;
      if (!(ev_samples >= 1) || ev_samples != std::floor(ev_samples)) {
        throw UsageError("--samples must be a positive integer");
      }
      effort.samples = static_cast<std::int64_t>(ev_samples);
      effort.seed = RandomSeed{ev_seed};
      effort.rel_tol = ev_tol;

      if (ev_object == "q-kernel") {
        const auto x = parse_csv(need(ev_x, "--x"), "--x");
        const auto y = parse_csv(need(ev_y, "--y"), "--y");
        if (static_cast<int>(x.size()) != ev_l + 1 || y.size() != x.size()) {
          throw UsageError("--x and --y need l+1 entries");
        }
        const auto kind = ev_tilde ? baxter::KernelKind::Tilde : baxter::KernelKind::Plain;
        std::cout << cplx(baxter::kernel(kind, x, y, s.s)).dump() << "\n";
        return 0;
      }
      if (ev_object == "whittaker") {
        const specfn::SpectralParams lam(parse_csv(need(ev_lam, "--lam"), "--lam"),
                                         matgrp::GroupTag::gl(ev_l));
        auto value = [&](std::span<const double> x) {
          return ev_rescaled ? whittaker::whittaker_phi(lam, x) : whittaker::whittaker_psi(lam, x);
        };
        if (!ev_grid.empty()) {
          const auto g = parse_grid(ev_grid);
          const double h = (g.hi - g.lo) / (g.n - 1);
          std::printf(ev_l == 0 ? "x,re,im\n" : "x1,x2,re,im\n");
          if (ev_l == 0) {
            for (int i = 0; i < g.n; ++i) {
              const double x[1] = {g.lo + i * h};
              const Complex v = value(x);
              std::printf("%.10g,%.17g,%.17g\n", x[0], v.real(), v.imag());
            }
          } else {
            for (int i = 0; i < g.n; ++i)
              for (int j = 0; j < g.n; ++j) {
                const double x[2] = {g.lo + i * h, g.lo + j * h};
                const Complex v = value(x);
                std::printf("%.10g,%.10g,%.17g,%.17g\n", x[0], x[1], v.real(), v.imag());
              }
          }
          return 0;
        }
        const auto x = parse_csv(need(ev_x, "--x"), "--x");
        std::cout << cplx(value(x)).dump() << "\n";
        return 0;
      }
      const RealMatrix g = parse_matrix(need(ev_g, "--g"));
      if (ev_object == "spherical") {
        const specfn::SpectralParams lam(parse_csv(need(ev_lam, "--lam"), "--lam"),
                                         parse_group(ev_group, ev_l));
        std::cout << result_json(hecke::spherical_function(g, lam, effort)).dump() << "\n";
        return 0;
      }
      if (ev_object == "q-group") {
        const auto group = parse_group(ev_group, ev_l);
        if (group.size() != g.rows()) throw UsageError("--g does not match the group size");
        if (group.kind() != matgrp::GroupKind::GL) {
          const hecke::HeckeElement e{group, hecke::HeckeKind::Classical, s, effort};
          std::cout << result_json(e.evaluate(g)).dump() << "\n";
          return 0;
        }
        hecke::HeckeKind kind;
        if (ev_kind == "gaussian") kind = hecke::HeckeKind::GlGaussian;
        else if (ev_kind == "tilde") kind = hecke::HeckeKind::GlGaussianTilde;
        else if (ev_kind == "squared") kind = hecke::HeckeKind::GlSquared;
        else throw UsageError("--kind: gaussian | tilde | squared");
        const hecke::HeckeElement e{group, kind, s, effort};
        std::cout << result_json(e.evaluate(g)).dump() << "\n";
        return 0;
      }
      // r-g
      const auto group = parse_group(ev_group, ev_l);
      std::cout << result_json(hecke::r_g(g, s, group, effort)).dump() << "\n";
      return 0;
    }

    // verify
    verify::SuiteOptions opts;
    opts.seed = RandomSeed{vf_seed};
    if (!(vf_effort >= 0) || vf_effort != std::floor(vf_effort)) {
      throw UsageError("--effort must be a non-negative integer");
    }
    opts.effort = static_cast<std::int64_t>(vf_effort);
    opts.tol_scale = vf_tol;
    const auto report = verify::run_suite(vf_suite, opts);
    const std::string text = report.to_json(2);
    if (vf_out.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream f(vf_out);
      if (!f) throw UsageError("cannot write " + vf_out);
      f << text << "\n";
    }
    for (const auto& c : report.checks) {
      std::cerr << (c.pass ? "PASS " : (c.optional ? "FAIL (optional) " : "FAIL ")) << c.id
                << (c.note.empty() ? "" : "  [" + c.note + "]") << "\n";
    }
    return report.required_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
