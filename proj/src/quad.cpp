#include "baxterq/quad.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "baxterq/errors.hpp"

namespace baxterq::quad {

namespace {

constexpr std::int64_t kChunk = 2048;

void check_tolerance(double rel_tol, double abs_tol) {
  if (!(rel_tol > 0.0) && !(abs_tol > 0.0)) {
    throw DomainError("quadrature needs rel_tol > 0 or abs_tol > 0");
  }
}

// One trapezoid level on a tensor grid with n intervals per axis: sum of
// f * end-weights over the points that are new at this level (all points at
// level 0).
Complex tensor_level_sum(const Integrand& f, const Box& box, std::int64_t n, bool only_new,
                         std::int64_t* evaluations) {
  const int d = box.dim();
  std::int64_t total = 1;
  for (int j = 0; j < d; ++j) total *= (n + 1);
  const std::int64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<Complex> partial(chunks, Complex(0.0, 0.0));
  std::vector<std::int64_t> counts(chunks, 0);
  std::vector<double> step(d);
  for (int j = 0; j < d; ++j) step[j] = (box.hi[j] - box.lo[j]) / double(n);

  parallel_for(static_cast<int>(chunks), [&](int c) {
    std::vector<double> x(d);
    Complex acc(0.0, 0.0);
    std::int64_t count = 0;
    const std::int64_t begin = c * kChunk;
    const std::int64_t end = std::min(total, begin + kChunk);
    for (std::int64_t flat = begin; flat < end; ++flat) {
      std::int64_t rem = flat;
      bool any_odd = false;
      double w = 1.0;
      for (int j = d - 1; j >= 0; --j) {
        const std::int64_t i = rem % (n + 1);
        rem /= (n + 1);
        if (i % 2 == 1) any_odd = true;
        if (i == 0 || i == n) w *= 0.5;
        x[j] = (i == n) ? box.hi[j] : box.lo[j] + double(i) * step[j];
      }
      if (only_new && !any_odd) continue;
      acc += w * f(std::span<const double>(x));
      ++count;
    }
    partial[c] = acc;
    counts[c] = count;
  });
  Complex sum(0.0, 0.0);
  for (std::int64_t c = 0; c < chunks; ++c) {
    sum += partial[c];
    *evaluations += counts[c];
  }
  return sum;
}

std::int64_t new_points(int d, std::int64_t n, bool first) {
  std::int64_t all = 1, old = 1;
  for (int j = 0; j < d; ++j) {
    all *= (n + 1);
    old *= (n / 2 + 1);
  }
  return first ? all : all - old;
}

void check_finite_value(Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw ConvergenceError("quadrature: integrand produced a non-finite value", 0.0,
                           std::numeric_limits<double>::infinity());
  }
}

IntegralResult integrate_tensor(const Integrand& f, const Box& box, const Options& opts) {
  const int d = box.dim();
  std::int64_t n = opts.initial_intervals;
  IntegralResult out;
  Complex raw(0.0, 0.0);
  Complex previous(0.0, 0.0);
  double last_diff = std::numeric_limits<double>::infinity();
  double volume_step = 1.0;
  for (int level = 0; level < opts.max_levels; ++level, n *= 2) {
    if (out.evaluations + new_points(d, n, level == 0) > opts.max_evaluations) break;
    raw += tensor_level_sum(f, box, n, level > 0, &out.evaluations);
    volume_step = 1.0;
    for (int j = 0; j < d; ++j) volume_step *= (box.hi[j] - box.lo[j]) / double(n);
    const Complex current = raw * volume_step;
    check_finite_value(current);
    if (level > 0) {
      last_diff = std::abs(current - previous);
      const double target = std::max(opts.rel_tol * std::abs(current), opts.abs_tol);
      if (level + 1 >= opts.min_levels && last_diff <= target) {
        out.value = current;
        out.error_estimate = last_diff;
        return out;
      }
    }
    previous = current;
  }
  std::ostringstream os;
  os << "quadrature did not converge in " << d << "-D (" << out.evaluations
     << " evaluations, last difference " << last_diff << ", value magnitude "
     << std::abs(previous) << ")";
  throw ConvergenceError(os.str(), std::abs(previous), last_diff);
}

void validate_box(const Box& box) {
  if (box.lo.size() != box.hi.size() || box.lo.empty() || box.lo.size() > 4) {
    throw ShapeError("quadrature box must have 1..4 dimensions with matching bounds");
  }
  for (std::size_t j = 0; j < box.lo.size(); ++j) {
    if (!(box.hi[j] > box.lo[j]) || !std::isfinite(box.lo[j]) || !std::isfinite(box.hi[j])) {
      throw DomainError("quadrature box bounds must be finite with lo < hi");
    }
  }
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("BAXTERQ_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n_chunks, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_count(), n_chunks);
  if (workers <= 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int c = next++; c < n_chunks; c = next++) {
      try {
        fn(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_chunks;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

Box window_from_decay(const DecaySpec& decay, int d) {
  if (!(decay.scale > 0.0)) throw DomainError("DecaySpec.scale must be > 0");
  if (d < 1 || d > 4) throw ShapeError("quadrature dimension must be 1..4");
  if (!decay.center.empty() && static_cast<int>(decay.center.size()) != d) {
    throw ShapeError("DecaySpec.center has the wrong dimension");
  }
  const double depth = -kTruncationExponent;
  const double half = decay.kind == DecayKind::Gaussian ? decay.scale * std::sqrt(depth / kPi)
                                                        : decay.scale * depth;
  Box box;
  for (int j = 0; j < d; ++j) {
    const double c = decay.center.empty() ? 0.0 : decay.center[j];
    box.lo.push_back(c - half);
    box.hi.push_back(c + half);
  }
  return box;
}

IntegralResult integrate(const Integrand& f, int d, const DecaySpec& decay, double rel_tol) {
  Options opts;
  opts.rel_tol = rel_tol;
  // The DecaySpec window is generous; start with a step near scale.
  const Box box = window_from_decay(decay, d);
  const double width = box.hi[0] - box.lo[0];
  opts.initial_intervals = std::max(8, static_cast<int>(std::ceil(width / decay.scale)));
  if (d > 1) opts.initial_intervals = std::max(8, opts.initial_intervals / 2);
  return integrate(f, box, opts);
}

IntegralResult integrate(const Integrand& f, const Box& box, const Options& opts) {
  validate_box(box);
  check_tolerance(opts.rel_tol, opts.abs_tol);
  if (opts.initial_intervals < 2) throw DomainError("initial_intervals must be >= 2");
  if (box.dim() <= 3) return integrate_tensor(f, box, opts);

  // d = 4: the first coordinate is an outer 1-D rule around a 3-D tensor rule.
  Box inner;
  inner.lo.assign(box.lo.begin() + 1, box.lo.end());
  inner.hi.assign(box.hi.begin() + 1, box.hi.end());
  Options inner_opts = opts;
  inner_opts.rel_tol = opts.rel_tol * 0.1;
  inner_opts.abs_tol = opts.abs_tol * 0.1;
  std::atomic<std::int64_t> inner_evals{0};
  Options outer_opts = opts;
  const auto outer = integrate_1d(
      [&](double x0) {
        const auto r = integrate_tensor(
            [&](std::span<const double> rest) {
              const double p[4] = {x0, rest[0], rest[1], rest[2]};
              return f(std::span<const double>(p, 4));
            },
            inner, inner_opts);
        inner_evals += r.evaluations;
        return r.value;
      },
      box.lo[0], box.hi[0], outer_opts);
  IntegralResult out = outer;
  out.evaluations = inner_evals.load();
  return out;
}

IntegralResult integrate_1d(const Integrand1& f, double lo, double hi, const Options& opts) {
  Box box{{lo}, {hi}};
  validate_box(box);
  check_tolerance(opts.rel_tol, opts.abs_tol);
  return integrate_tensor([&](std::span<const double> x) { return f(x[0]); }, box, opts);
}

IntegralResult integrate_tanh_sinh(const Integrand1& f, double a, double b, double rel_tol) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_tanh_sinh needs finite a < b");
  }
  check_tolerance(rel_tol, 0.0);
  const double t_max = 4.5;  // nodes within ~1e-120 of the endpoints
  const double half = 0.5 * (b - a);
  IntegralResult out;
  auto node = [&](double t) -> Complex {
    const double u = 0.5 * kPi * std::sinh(std::abs(t));
    const double e = std::exp(2.0 * u);
    const double delta = (b - a) / (e + 1.0);  // distance to the nearer endpoint
    if (!(delta > 0.0)) return 0.0;
    const double x = t >= 0.0 ? b - delta : a + delta;
    if (x <= a || x >= b) return 0.0;
    const double cu = std::cosh(u);
    const double w = half * 0.5 * kPi * std::cosh(t) / (cu * cu);
    ++out.evaluations;
    return w * f(x);
  };
  double h = 0.5;
  Complex raw = node(0.0);
  for (double t = h; t <= t_max; t += h) raw += node(t) + node(-t);
  Complex previous = raw * h;
  double last_diff = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= 10; ++level) {
    h *= 0.5;
    for (double t = h; t <= t_max; t += 2.0 * h) raw += node(t) + node(-t);
    const Complex current = raw * h;
    check_finite_value(current);
    last_diff = std::abs(current - previous);
    if (level >= 2 && last_diff <= rel_tol * std::abs(current)) {
      out.value = current;
      out.error_estimate = last_diff;
      return out;
    }
    previous = current;
  }
  throw ConvergenceError("tanh-sinh quadrature did not converge", std::abs(previous), last_diff);
}

JointEstimate mc_joint(const MultiDraw& draw, int components, std::int64_t n_samples,
                       RandomSeed seed) {
  if (n_samples < 1) throw DomainError("mc: n_samples must be >= 1");
  if (components < 1) throw DomainError("mc: need at least one component");
  const int m = components;
  struct Shard {
    std::vector<Complex> sum;
    ComplexMatrix cross;
    std::vector<double> mass;
  };
  std::vector<Shard> shards(kShards);
  parallel_for(kShards, [&](int i) {
    Shard& sh = shards[i];
    sh.sum.assign(m, Complex(0.0, 0.0));
    sh.cross = ComplexMatrix::Zero(m, m);
    const std::int64_t count = n_samples / kShards + (i < n_samples % kShards ? 1 : 0);
    sh.mass.reserve(count);
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)).value);
    std::vector<Complex> v(m);
    for (std::int64_t k = 0; k < count; ++k) {
      std::fill(v.begin(), v.end(), Complex(0.0, 0.0));
      draw(rng, std::span<Complex>(v));
      for (int a = 0; a < m; ++a) {
        sh.sum[a] += v[a];
        for (int b = 0; b < m; ++b) sh.cross(a, b) += v[a] * std::conj(v[b]);
      }
      sh.mass.push_back(std::abs(v[0]));
    }
  });

  JointEstimate est;
  std::vector<Complex> sum(m, Complex(0.0, 0.0));
  ComplexMatrix cross = ComplexMatrix::Zero(m, m);
  std::vector<double> mass;
  mass.reserve(n_samples);
  for (const auto& sh : shards) {
    for (int a = 0; a < m; ++a) sum[a] += sh.sum[a];
    cross += sh.cross;
    mass.insert(mass.end(), sh.mass.begin(), sh.mass.end());
  }
  const double n = static_cast<double>(n_samples);
  est.mean.resize(m);
  for (int a = 0; a < m; ++a) est.mean[a] = sum[a] / n;
  est.covariance = ComplexMatrix::Zero(m, m);
  const double dof = n > 1.0 ? n - 1.0 : 1.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      est.covariance(a, b) = (cross(a, b) / n - est.mean[a] * std::conj(est.mean[b])) * (n / dof) / n;
    }
  est.evaluations = n_samples;

  // Degenerate-variance flag on the first component.
  const std::int64_t top = std::max<std::int64_t>(1, n_samples / 1000);
  if (top < n_samples) {
    double total = 0.0;
    for (double w : mass) total += w;
    std::nth_element(mass.begin(), mass.begin() + top, mass.end(), std::greater<double>());
    double heavy = 0.0;
    for (std::int64_t k = 0; k < top; ++k) heavy += mass[k];
    est.degenerate = total > 0.0 && heavy > 0.99 * total;
  }
  return est;
}

IntegralResult mc_integrate(const Draw& draw, std::int64_t n_samples, RandomSeed seed) {
  const auto est = mc_joint(
      [&draw](std::mt19937_64& rng, std::span<Complex> out) { out[0] = draw(rng); }, 1,
      n_samples, seed);
  IntegralResult r;
  r.value = est.mean[0];
  r.error_estimate = std::sqrt(std::max(0.0, est.covariance(0, 0).real()));
  r.evaluations = est.evaluations;
  r.degenerate = est.degenerate;
  return r;
}

IntegralResult ratio(const JointEstimate& est, int num, int den) {
  const int m = static_cast<int>(est.mean.size());
  if (num < 0 || num >= m || den < 0 || den >= m) throw ShapeError("ratio: bad component index");
  const Complex a = est.mean[num];
  const Complex b = est.mean[den];
  if (std::abs(b) == 0.0) throw DomainError("ratio: denominator estimate is zero");
  const Complex c1 = 1.0 / b;
  const Complex c2 = -a / (b * b);
  const double var = std::norm(c1) * est.covariance(num, num).real() +
                     std::norm(c2) * est.covariance(den, den).real() +
                     2.0 * std::real(c1 * std::conj(c2) * est.covariance(num, den));
  IntegralResult r;
  r.value = a / b;
  r.error_estimate = std::sqrt(std::max(0.0, var));
  r.evaluations = est.evaluations;
  r.degenerate = est.degenerate;
  return r;
}

}  // namespace baxterq::quad
