#pragma once

// gl_{l+1} Baxter kernels, their action by quadrature, the unipotent-integral
// reduction from the group function, and grid discretizations for
// commutator checks.

#include <functional>
#include <span>
#include <vector>

#include "baxterq/quad.hpp"
#include "baxterq/specfn.hpp"
#include "baxterq/types.hpp"

namespace baxterq::baxter {

enum class KernelKind { Plain, Tilde };

// Q(x,y|s) = 2^{l+1} exp{ sum_j (is - rho_j)(x_j - y_j)
//   - pi sum_{k<=l} (e^{2(x_k-y_k)} + e^{2(y_{k+1}-x_k)}) - pi e^{2(x_{l+1}-y_{l+1})} }
Complex q_kernel(std::span<const double> x, std::span<const double> y, Complex s);

// Q~(x,y|s) = 2^{l+1} exp{ sum_j (is + rho_j)(y_j - x_j)
//   - pi sum_{k<=l} (e^{2(y_k-x_k)} + e^{2(x_{k+1}-y_k)}) - pi e^{2(y_{l+1}-x_{l+1})} }
Complex q_tilde_kernel(std::span<const double> x, std::span<const double> y, Complex s);

Complex kernel(KernelKind kind, std::span<const double> x, std::span<const double> y, Complex s);

using Function = std::function<Complex(std::span<const double>)>;

// (Q f)(x) = int Q(x,y|s) f(y) dy over R^{l+1}, l <= 2. `growth` bounds the
// test function, |f(y)| <= C e^{<growth, y>} (empty means bounded). The
// y-window is cut per coordinate from the kernel exponent, which is
// separable in y.
quad::IntegralResult apply_q(KernelKind kind, const Function& f, std::span<const double> x,
                             const specfn::SpectralPoint& s, double rel_tol,
                             std::span<const double> growth = {});

// Window used by apply_q (exposed for tests and the CLI).
quad::Box apply_window(KernelKind kind, std::span<const double> x, const specfn::SpectralPoint& s,
                       std::span<const double> growth);

// apply_q on Phi_lambda (rank 0 or 1).
quad::IntegralResult apply_q_whittaker(KernelKind kind, const specfn::SpectralParams& lam,
                                       std::span<const double> x, const specfn::SpectralPoint& s,
                                       double rel_tol);

enum class CharacterMode { Whittaker, Trivial };

// K(a, a~) = int_{N_-} delta(a~) Qgl(a^{-1} n a~ | s) chi(n) dn with
// a = e^x, a~ = e^y, by direct quadrature over the l(l+1)/2 entries of n.
// With the character, each subdiagonal entry is integrated along the real
// line shifted by i / e^{2(y_j - x_{j+1})} (its Gaussian saddle); the group
// function is continued holomorphically through Tr g^t g = sum g_ij^2.
// CharacterMode::Trivial drops chi and integrates on the real axis.
quad::IntegralResult kernel_from_group_function(std::span<const double> x,
                                                std::span<const double> y,
                                                const specfn::SpectralPoint& s, double rel_tol,
                                                CharacterMode mode = CharacterMode::Whittaker);

// int e^{i omega x - p x^2} dx = sqrt(pi/p) e^{-omega^2/(4p)}.
Complex gaussian_identity(double omega, double p);
// int e^{nu x - a e^{2x}} dx = 1/2 a^{-nu/2} Gamma(nu/2).
Complex euler_identity(Complex nu, double a);

// --- grid discretization ------------------------------------------------

struct GridSpec {
  int dim = 2;  // l + 1, 1 or 2
  double lo = -3.0;
  double hi = 3.0;
  int points = 41;  // per dimension

  double step() const { return (hi - lo) / double(points - 1); }
  int size() const;
  std::vector<double> point(int flat) const;
};

enum class OperatorKind { Q, QTilde, H2 };

struct GridOperator {
  GridSpec grid;
  OperatorKind kind = OperatorKind::Q;
  ComplexMatrix matrix;
};

// Bytes allowed for one dense grid operator (about a 70^2 grid).
inline constexpr double kGridMemoryCap = 400.0 * 1024 * 1024;

// Q and Q~: kernel values times trapezoid weights. H2: central differences
// of -1/2 Delta - rho.grad - |rho|^2/2 + 4 pi^2 e^{2(x_2-x_1)}, the Toda
// Hamiltonian conjugated by e^{<rho,x>} so that it acts on Phi like Q does;
// neighbours outside the grid are dropped.
GridOperator build_grid_operator(OperatorKind kind, const GridSpec& grid,
                                 const specfn::SpectralPoint& s);

// ||(AB - BA)_{II}||_F / (||A||_F ||B||_F), with I the grid points whose
// coordinates all satisfy |x_j| <= margin.
double commutator_residual(const GridOperator& a, const GridOperator& b, double margin);

}  // namespace baxterq::baxter
