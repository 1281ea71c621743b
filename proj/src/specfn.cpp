#include "baxterq/specfn.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "baxterq/errors.hpp"

namespace baxterq::specfn {

namespace {

constexpr int kLanczosG = 7;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);
const double kLogPi = std::log(kPi);

bool is_pole(Complex z) {
  if (z.real() > 0.5) return false;
  const double nearest = std::round(z.real());
  const double scale = std::max(1.0, std::abs(z));
  return std::abs(z.imag()) <= 1e-14 * scale && std::abs(z.real() - nearest) <= 1e-14 * scale;
}

Complex log_gamma_right(Complex z) {
  // Re z >= 1/2
  z -= 1.0;
  Complex series = kLanczosCoeffs[0];
  for (int i = 1; i < kLanczosG + 2; ++i) series += kLanczosCoeffs[i] / (z + double(i));
  const Complex t = z + double(kLanczosG) + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(pi z), stable for large |Im z| (only exp of the result matters).
Complex log_sin_pi(Complex z) {
  const Complex w = kPi * z;
  if (w.imag() > 20.0) return -kI * w + std::log((1.0 - std::exp(2.0 * kI * w)) * kI * 0.5);
  if (w.imag() < -20.0) return kI * w + std::log((1.0 - std::exp(-2.0 * kI * w)) / (2.0 * kI));
  return std::log(std::sin(w));
}

void check_finite(Complex v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw DomainError(std::string(what) + ": result is not finite");
  }
}

}  // namespace

void SpectralPoint::require_convergent(double bound) const {
  if (!(is().real() > bound)) {
    std::ostringstream os;
    os << "spectral point s = (" << s.real() << "," << s.imag() << ") violates Re(i s) > " << bound;
    throw DomainError(os.str());
  }
}

SpectralParams::SpectralParams(std::vector<double> entries_in, matgrp::GroupTag group_in)
    : entries(std::move(entries_in)), group(std::move(group_in)) {
  if (static_cast<int>(entries.size()) != group.spectral_dim()) {
    std::ostringstream os;
    os << "spectral parameters for " << matgrp::to_string(group.kind()) << " rank " << group.rank()
       << " need " << group.spectral_dim() << " entries, got " << entries.size();
    throw ShapeError(os.str());
  }
  for (double v : entries) {
    if (!std::isfinite(v)) throw DomainError("spectral parameters must be finite reals");
  }
}

SpectralParams SpectralParams::negated() const {
  std::vector<double> out(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) out[i] = -entries[i];
  return SpectralParams(std::move(out), group);
}

DualWeight dual_weight(const SpectralParams& lam) {
  DualWeight mu;
  switch (lam.group.kind()) {
    case matgrp::GroupKind::GL:
      mu.entries = lam.entries;
      break;
    case matgrp::GroupKind::Sp:
      mu.entries.push_back(0.0);
      [[fallthrough]];
    case matgrp::GroupKind::SOEven:
      for (double v : lam.entries) mu.entries.push_back(v);
      for (double v : lam.entries) mu.entries.push_back(-v);
      break;
  }
  return mu;
}

Complex log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("log_gamma: non-finite argument");
  }
  if (is_pole(z)) {
    std::ostringstream os;
    os << "log_gamma: pole at z = " << z.real();
    throw PoleError(os.str());
  }
  if (z.real() >= 0.5) return log_gamma_right(z);
  // Gamma(z) Gamma(1-z) = pi / sin(pi z) fixes the value mod 2 pi i; the
  // branch (cut along the negative axis) comes from the recurrence
  // log Gamma(z) = log Gamma(z + n) - sum_k log(z + k).
  const Complex refl = kLogPi - log_sin_pi(z) - log_gamma_right(1.0 - z);
  if (z.real() < -1e6) return refl;  // branch left as is far out on the left
  const int n = static_cast<int>(std::ceil(0.5 - z.real()));
  double im = log_gamma_right(z + double(n)).imag();
  for (int k = 0; k < n; ++k) im -= std::arg(z + double(k));
  const double turns = std::round((im - refl.imag()) / (2.0 * kPi));
  return {refl.real(), refl.imag() + 2.0 * kPi * turns};
}

Complex gamma(Complex z) {
  const Complex v = std::exp(log_gamma(z));
  check_finite(v, "gamma");
  return v;
}

Complex gamma_r(Complex z) {
  const Complex half = 0.5 * z;
  if (is_pole(half)) {
    std::ostringstream os;
    os << "gamma_r: pole at z = " << z.real();
    throw PoleError(os.str());
  }
  const Complex v = std::exp(-half * kLogPi + log_gamma(half));
  check_finite(v, "gamma_r");
  return v;
}

Complex l_factor_dual(const SpectralPoint& s, const DualWeight& mu) {
  s.require_convergent();
  Complex log_sum = 0.0;
  for (double m : mu.entries) {
    const Complex z = 0.5 * (s.is() - kI * m);
    log_sum += -z * kLogPi + log_gamma(z);
  }
  const Complex v = std::exp(log_sum);
  check_finite(v, "l_factor");
  return v;
}

Complex l_factor_gl(const SpectralPoint& s, const SpectralParams& lam) {
  if (lam.group.kind() != matgrp::GroupKind::GL) {
    throw DomainError("l_factor_gl needs a GL spectral parameter");
  }
  return l_factor_dual(s, dual_weight(lam));
}

Complex l_factor_classical(const SpectralPoint& s, const SpectralParams& lam) {
  if (lam.group.kind() == matgrp::GroupKind::GL) {
    throw DomainError("l_factor_classical needs an SO_even or Sp spectral parameter");
  }
  return l_factor_dual(s, dual_weight(lam));
}

Complex d_factor(const matgrp::GroupTag& group, const SpectralPoint& s) {
  const int l = group.rank();
  int first = 0;
  switch (group.kind()) {
    case matgrp::GroupKind::SOEven:
      first = 0;
      break;
    case matgrp::GroupKind::Sp:
      first = 2;
      break;
    case matgrp::GroupKind::GL:
      throw DomainError("d_factor is defined for SO_even and Sp only");
  }
  Complex out = 1.0;
  for (int j = first, k = 0; k < l; j += 2, ++k) out *= gamma_r(2.0 * s.is() - double(j));
  return out;
}

}  // namespace baxterq::specfn
