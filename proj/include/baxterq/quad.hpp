#pragma once

// Deterministic quadrature on R^d (d <= 4) and seeded Monte Carlo.
//
// Integrands of the e^{nu u - a e^{2u}} family are already double
// exponential, so on a truncated window the plain trapezoid rule converges
// geometrically; refinement halves the step until two levels agree.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "baxterq/types.hpp"

namespace baxterq::quad {

struct IntegralResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
  // MC only: more than 99% of |mass| came from fewer than 0.1% of samples.
  bool degenerate = false;
};

enum class DecayKind { DoubleExponential, Gaussian };

// Integrand bounded by exp(-pi ((u-c)/scale)^2) (Gaussian) or by
// exp(-|u-c|/scale) on its slow side (DoubleExponential) in every coordinate.
struct DecaySpec {
  std::vector<double> center;
  double scale = 1.0;
  DecayKind kind = DecayKind::Gaussian;
};

// Axis-aligned window; the integrand is assumed negligible outside it.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
};

inline constexpr double kTruncationExponent = -40.0;

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int initial_intervals = 16;  // per dimension at level 0
  int min_levels = 2;
  int max_levels = 12;
  std::int64_t max_evaluations = 200'000'000;
};

using Integrand = std::function<Complex(std::span<const double>)>;
using Integrand1 = std::function<Complex(double)>;

Box window_from_decay(const DecaySpec& decay, int d);

// Throws ConvergenceError when the budget runs out before two successive
// levels agree to max(rel_tol |value|, abs_tol).
IntegralResult integrate(const Integrand& f, int d, const DecaySpec& decay, double rel_tol);
IntegralResult integrate(const Integrand& f, const Box& box, const Options& opts);
IntegralResult integrate_1d(const Integrand1& f, double lo, double hi, const Options& opts);

// Tanh-sinh rule on a finite [a, b]; tolerates integrable endpoint
// singularities.
IntegralResult integrate_tanh_sinh(const Integrand1& f, double a, double b, double rel_tol);

// Worker threads for quadrature grids and MC shards: BAXTERQ_THREADS, else
// the number of logical cores.
int thread_count();

// Runs fn(chunk) for chunk in [0, n_chunks) on thread_count() workers.
void parallel_for(int n_chunks, const std::function<void(int)>& fn);

// --- Monte Carlo ---------------------------------------------------------

inline constexpr int kShards = 64;

// One weighted draw: the integrand value already multiplied by the
// importance weight.
using Draw = std::function<Complex(std::mt19937_64&)>;

// Mean of n draws split into kShards streams seeded by derive_seed(seed, i)
// and reduced in shard order, so the result does not depend on the thread
// count. error_estimate is the standard error of the mean.
IntegralResult mc_integrate(const Draw& draw, std::int64_t n_samples, RandomSeed seed);

template <class Sampler, class F>
IntegralResult mc_integrate(Sampler sampler, F integrand, std::int64_t n_samples,
                            RandomSeed seed) {
  return mc_integrate(Draw([sampler, integrand](std::mt19937_64& rng) mutable {
                        auto sample = sampler(rng);
                        return Complex(integrand(sample)) * sample.weight;
                      }),
                      n_samples, seed);
}

// Joint estimate of several means from the same draws (common random
// numbers), with the full complex covariance of the sample means,
// cov(i,j) = E[(A_i - a_i) conj(A_j - a_j)] / n.
struct JointEstimate {
  std::vector<Complex> mean;
  ComplexMatrix covariance;
  std::int64_t evaluations = 0;
  bool degenerate = false;
};

using MultiDraw = std::function<void(std::mt19937_64&, std::span<Complex>)>;

JointEstimate mc_joint(const MultiDraw& draw, int components, std::int64_t n_samples,
                       RandomSeed seed);

// mean[num] / mean[den] with a delta-method standard error.
IntegralResult ratio(const JointEstimate& est, int num, int den);

}  // namespace baxterq::quad
