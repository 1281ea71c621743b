#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "baxterq/baxter.hpp"
#include "baxterq/errors.hpp"
#include "baxterq/hecke.hpp"
#include "baxterq/matgrp.hpp"
#include "baxterq/specfn.hpp"
#include "baxterq/verify.hpp"
#include "baxterq/whittaker.hpp"

namespace py = pybind11;
using namespace baxterq;

namespace {

matgrp::GroupTag group_of(const std::string& name, int l) {
  if (name == "gl") return matgrp::GroupTag::gl(l);
  if (name == "so-even") return matgrp::GroupTag::so_even(l);
  if (name == "sp") return matgrp::GroupTag::sp(l);
  throw DomainError("unknown group '" + name + "' (gl, so-even, sp)");
}

py::dict result_dict(const quad::IntegralResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["error_estimate"] = r.error_estimate;
  d["evaluations"] = r.evaluations;
  d["degenerate"] = r.degenerate;
  return d;
}

hecke::Effort effort_of(std::int64_t samples, std::uint64_t seed, double rel_tol) {
  hecke::Effort e;
  e.samples = samples;
  e.seed = RandomSeed{seed};
  e.rel_tol = rel_tol;
  return e;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Baxter operators, Whittaker functions and Archimedean L-factors";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", base.ptr());

  m.def("log_gamma", &specfn::log_gamma, py::arg("z"));
  m.def("gamma", &specfn::gamma, py::arg("z"));
  m.def("gamma_r", &specfn::gamma_r, py::arg("z"));

  m.def(
      "lfactor",
      [](const std::string& group, int l, Complex s, std::vector<double> lam) {
        const auto tag = group_of(group, l);
        const specfn::SpectralParams p(std::move(lam), tag);
        return tag.kind() == matgrp::GroupKind::GL ? specfn::l_factor_gl({s}, p)
                                                   : specfn::l_factor_classical({s}, p);
      },
      py::arg("group"), py::arg("l"), py::arg("s"), py::arg("lam"));

  m.def(
      "d_factor",
      [](const std::string& group, int l, Complex s) {
        return specfn::d_factor(group_of(group, l), {s});
      },
      py::arg("group"), py::arg("l"), py::arg("s"));

  m.def(
      "q_kernel",
      [](std::vector<double> x, std::vector<double> y, Complex s, bool tilde) {
        if (x.size() != y.size()) throw ShapeError("q_kernel: x and y differ in length");
        return baxter::kernel(tilde ? baxter::KernelKind::Tilde : baxter::KernelKind::Plain, x, y,
                              s);
      },
      py::arg("x"), py::arg("y"), py::arg("s"), py::arg("tilde") = false);

  m.def(
      "whittaker",
      [](std::vector<double> lam, std::vector<double> x, bool rescaled) {
        const specfn::SpectralParams p(std::move(lam),
                                       matgrp::GroupTag::gl(static_cast<int>(x.size()) - 1));
        return rescaled ? whittaker::whittaker_phi(p, x) : whittaker::whittaker_psi(p, x);
      },
      py::arg("lam"), py::arg("x"), py::arg("rescaled") = false);

  m.def("kbessel", &whittaker::kbessel, py::arg("nu"), py::arg("z"));

  m.def(
      "q_group",
      [](const RealMatrix& g, Complex s, const std::string& group, const std::string& kind,
         std::int64_t samples, std::uint64_t seed, double rel_tol) {
        const int n = static_cast<int>(g.rows());
        hecke::HeckeKind k = hecke::HeckeKind::Classical;
        matgrp::GroupTag tag = matgrp::GroupTag::gl(std::max(n - 1, 0));
        if (group == "gl") {
          if (kind == "gaussian") k = hecke::HeckeKind::GlGaussian;
          else if (kind == "tilde") k = hecke::HeckeKind::GlGaussianTilde;
          else if (kind == "squared") k = hecke::HeckeKind::GlSquared;
          else throw DomainError("kind: gaussian | tilde | squared");
        } else {
          tag = group_of(group, n / 2);
        }
        const hecke::HeckeElement e{tag, k, {s}, effort_of(samples, seed, rel_tol)};
        return result_dict(e.evaluate(g));
      },
      py::arg("g"), py::arg("s"), py::arg("group") = "gl", py::arg("kind") = "gaussian",
      py::arg("samples") = 200'000, py::arg("seed") = 20240917, py::arg("rel_tol") = 1e-9);

  m.def(
      "spherical_function",
      [](const RealMatrix& g, const std::string& group, int l, std::vector<double> lam,
         std::int64_t samples, std::uint64_t seed) {
        const specfn::SpectralParams p(std::move(lam), group_of(group, l));
        return result_dict(hecke::spherical_function(g, p, effort_of(samples, seed, 1e-9)));
      },
      py::arg("g"), py::arg("group"), py::arg("l"), py::arg("lam"), py::arg("samples") = 200'000,
      py::arg("seed") = 20240917);

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed, std::int64_t effort, double tol_scale) {
        verify::SuiteOptions opts;
        opts.seed = RandomSeed{seed};
        opts.effort = effort;
        opts.tol_scale = tol_scale;
        py::gil_scoped_release release;
        const auto report = verify::run_suite(suite, opts);
        return report.to_json(2);
      },
      py::arg("suite") = "all", py::arg("seed") = 7, py::arg("effort") = 0,
      py::arg("tol_scale") = 1.0);

  m.def("suite_names", &verify::suite_names);
}
