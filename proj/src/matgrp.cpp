#include "baxterq/matgrp.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "baxterq/errors.hpp"

namespace baxterq::matgrp {

namespace {

void require_square(const RealMatrix& g, const char* what) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << g.rows() << "x" << g.cols();
    throw ShapeError(os.str());
  }
  if (!g.allFinite()) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

void require_classical(const GroupTag& group, const char* what) {
  if (group.kind() == GroupKind::GL) {
    throw DomainError(std::string(what) + ": needs an SO_even or Sp group tag");
  }
}

void require_size(const RealMatrix& g, const GroupTag& group, const char* what) {
  if (g.rows() != group.size() || g.cols() != group.size()) {
    std::ostringstream os;
    os << what << ": matrix is " << g.rows() << "x" << g.cols() << " but the group acts on size "
       << group.size();
    throw ShapeError(os.str());
  }
}

RealMatrix checked_inverse(const RealMatrix& g, const char* what) {
  Eigen::FullPivLU<RealMatrix> lu(g);
  if (!lu.isInvertible()) throw SingularMatrixError(std::string(what) + ": matrix is singular");
  return lu.inverse();
}

}  // namespace

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::GL:
      return "gl";
    case GroupKind::SOEven:
      return "so-even";
    case GroupKind::Sp:
      return "sp";
  }
  return "?";
}

GroupTag::GroupTag(GroupKind kind, int rank) : kind_(kind), rank_(rank) {
  if (kind == GroupKind::GL) {
    if (rank < 0) throw DomainError("GL rank must be >= 0");
    size_ = rank + 1;
    signs_.assign(size_, 1.0);
    for (int j = 1; j <= size_; ++j) rho_.push_back(0.5 * rank + 1.0 - j);
    return;
  }
  if (rank < 1) throw DomainError("classical group rank must be >= 1");
  size_ = 2 * rank;
  signs_.assign(size_, 1.0);
  for (int i = 1; i <= rank; ++i) {
    const double si = (i % 2 == 1) ? 1.0 : -1.0;
    signs_[i - 1] = si;
    signs_[size_ - i] = (kind == GroupKind::Sp) ? -si : si;
  }
  for (int i = 1; i <= rank; ++i) {
    rho_.push_back(kind == GroupKind::Sp ? double(rank - i + 1) : double(rank - i));
  }
}

GroupTag GroupTag::gl(int rank) { return GroupTag(GroupKind::GL, rank); }
GroupTag GroupTag::so_even(int rank) { return GroupTag(GroupKind::SOEven, rank); }
GroupTag GroupTag::sp(int rank) { return GroupTag(GroupKind::Sp, rank); }

DualKind GroupTag::dual() const {
  switch (kind_) {
    case GroupKind::GL:
      return DualKind::GL;
    case GroupKind::SOEven:
      return DualKind::SOEven;
    case GroupKind::Sp:
      return DualKind::SOOdd;
  }
  return DualKind::GL;
}

RealMatrix GroupTag::s_matrix() const {
  RealMatrix s = RealMatrix::Zero(size_, size_);
  for (int i = 0; i < size_; ++i) s(i, i) = signs_[i];
  return s;
}

RealMatrix GroupTag::j_matrix() const {
  RealMatrix j = RealMatrix::Zero(size_, size_);
  for (int i = 0; i < size_; ++i) j(i, size_ - 1 - i) = 1.0;
  return j;
}

RealMatrix GroupTag::omega() const { return s_matrix() * j_matrix(); }

RealMatrix IwasawaFactors::reconstruct() const {
  return n_lower * a_log.array().exp().matrix().asDiagonal() * k_orth;
}

IwasawaFactors iwasawa_decompose(const RealMatrix& g) {
  require_square(g, "iwasawa_decompose");
  const int n = static_cast<int>(g.rows());
  // g^t = Q R  =>  g = R^t Q^t with R^t lower triangular.
  Eigen::HouseholderQR<RealMatrix> qr(g.transpose());
  RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  RealMatrix q = qr.householderQ();
  const double scale = r.diagonal().cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    if (!(std::abs(r(i, i)) > 64.0 * n * std::numeric_limits<double>::epsilon() * scale)) {
      throw SingularMatrixError("iwasawa_decompose: matrix is singular");
    }
    if (r(i, i) < 0.0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  IwasawaFactors out;
  const RealMatrix lower = r.transpose();
  out.a_log.resize(n);
  out.n_lower = lower;
  for (int j = 0; j < n; ++j) {
    out.a_log(j) = std::log(lower(j, j));
    out.n_lower.col(j) /= lower(j, j);
  }
  out.k_orth = q.transpose();
  return out;
}

RealVector iwasawa_log_a(const RealMatrix& g) { return iwasawa_decompose(g).a_log; }

double modular_delta(const RealVector& a_log) {
  const Eigen::Index n = a_log.size();
  double exponent = 0.0;
  // sum_{i<j} (y_i - y_j) = sum_i (n + 1 - 2i) y_i  (1-based i)
  for (Eigen::Index i = 0; i < n; ++i) exponent += double(n - 1 - 2 * i) * a_log(i);
  return std::exp(exponent);
}

Complex unipotent_character(const RealMatrix& n_lower) {
  require_square(n_lower, "unipotent_character");
  const Eigen::Index n = n_lower.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(n_lower(i, i) - 1.0) > 1e-12) {
      throw ShapeError("unipotent_character: diagonal must be 1");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(n_lower(i, j)) > 1e-12) {
        throw ShapeError("unipotent_character: matrix must be lower triangular");
      }
    }
  }
  double phase = 0.0;
  for (Eigen::Index j = 0; j + 1 < n; ++j) phase += n_lower(j + 1, j);
  return std::exp(2.0 * kPi * kI * phase);
}

RealMatrix involution_star(const RealMatrix& g, const GroupTag& group) {
  require_classical(group, "involution_star");
  require_square(g, "involution_star");
  require_size(g, group, "involution_star");
  const RealMatrix g_inv_t = checked_inverse(g, "involution_star").transpose();
  // S and J are their own inverses.
  const RealMatrix sj = group.omega();
  const RealMatrix js = group.j_matrix() * group.s_matrix();
  return sj * g_inv_t * js;
}

bool is_member(const RealMatrix& g, const GroupTag& group, double tol) {
  require_square(g, "is_member");
  if (g.rows() != group.size()) return false;
  if (group.kind() == GroupKind::GL) {
    return Eigen::FullPivLU<RealMatrix>(g).isInvertible();
  }
  RealMatrix star;
  try {
    star = involution_star(g, group);
  } catch (const SingularMatrixError&) {
    return false;
  }
  return (star - g).norm() <= tol * g.norm();
}

RealMatrix random_group_element(const GroupTag& group, std::mt19937_64& rng, double spread) {
  const int n = group.size();
  std::normal_distribution<double> normal(0.0, spread);
  RealMatrix y(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y(i, j) = normal(rng);
  if (group.kind() == GroupKind::GL) {
    return RealMatrix::Identity(n, n) + y;
  }
  // X Omega + Omega X^t = 0 for X = Y - Omega Y^t Omega^{-1}.
  const RealMatrix omega = group.omega();
  const RealMatrix omega_inv = omega.transpose();
  const RealMatrix x = y - omega * y.transpose() * omega_inv;
  return x.exp();
}

RealMatrix draw_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if (n < 1) throw DomainError("orthogonal: n must be >= 1");
  RealMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<RealMatrix> qr(a);
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  }
  return q;
}

RealMatrix draw_maximal_compact(const GroupTag& group, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = group.size();
  if (group.kind() == GroupKind::GL) return draw_orthogonal(n, rng);
  const int l = group.rank();
  const RealMatrix omega = group.omega();
  if (group.kind() == GroupKind::SOEven) {
    // K commutes with the symmetric involution Omega: O(l) x O(l) on its
    // +1 and -1 eigenspaces, cut down to det = 1 (SO_2 has K = {+-1}).
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(omega);
    const RealMatrix p = eig.eigenvectors();  // eigenvalues sorted: -1 block, then +1 block
    RealMatrix block = RealMatrix::Zero(n, n);
    const RealMatrix a = draw_orthogonal(l, rng);
    RealMatrix b = draw_orthogonal(l, rng);
    if (a.determinant() * b.determinant() < 0.0) b.col(0) *= -1.0;
    block.topLeftCorner(l, l) = a;
    block.bottomRightCorner(l, l) = b;
    return p * block * p.transpose();
  }
  // Sp: Omega is a complex structure; K = U(l) in the basis (e_i, Omega e_i).
  RealMatrix p = RealMatrix::Zero(n, n);
  for (int i = 0; i < l; ++i) {
    p(i, i) = 1.0;
    p.col(l + i) = omega.col(i);
  }
  ComplexMatrix c(l, l);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) c(i, j) = Complex(normal(rng), normal(rng)) * inv_sqrt2;
  Eigen::HouseholderQR<ComplexMatrix> qr(c);
  ComplexMatrix u = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  for (int i = 0; i < l; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) u.col(i) *= d / std::abs(d);
  }
  RealMatrix real_form(n, n);
  real_form.topLeftCorner(l, l) = u.real();
  real_form.topRightCorner(l, l) = -u.imag();
  real_form.bottomLeftCorner(l, l) = u.imag();
  real_form.bottomRightCorner(l, l) = u.real();
  return p * real_form * p.transpose();
}

GaussianSample draw_gl_gaussian(int n, std::mt19937_64& rng, double det_threshold) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if (n < 1) throw DomainError("gl_gaussian: n must be >= 1");
  const double sigma = 1.0 / std::sqrt(2.0 * kPi);
  GaussianSample out;
  out.z.resize(n, n);
  double trace = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = sigma * normal(rng);
      out.z(i, j) = v;
      trace += v * v;
    }
  out.abs_det = std::abs(out.z.determinant());
  if (!(out.abs_det >= det_threshold)) {
    out.rejected = true;
    out.weight = 0.0;
    return out;
  }
  // density exp(-pi Tr Z^t Z) is normalized, so weight = |det Z|^{-n} / density
  out.weight = std::exp(kPi * trace - double(n) * std::log(out.abs_det));
  return out;
}

RealMatrix GroupSampler::orthogonal(int n) { return draw_orthogonal(n, rng_); }

RealMatrix GroupSampler::maximal_compact(const GroupTag& group) {
  return draw_maximal_compact(group, rng_);
}

GaussianSample GroupSampler::gl_gaussian(int n, double det_threshold) {
  return draw_gl_gaussian(n, rng_, det_threshold);
}

RealMatrix sample_orthogonal(int n, RandomSeed seed) { return GroupSampler(seed).orthogonal(n); }

GaussianSample sample_gl_gaussian(int n, RandomSeed seed, double det_threshold) {
  return GroupSampler(seed).gl_gaussian(n, det_threshold);
}

}  // namespace baxterq::matgrp
