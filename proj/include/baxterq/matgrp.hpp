#pragma once

// Real matrix layer: Iwasawa factorization, modular function, unipotent
// character, the classical-group involutions and random sampling on K and GL_n.

#include <random>
#include <string>
#include <vector>

#include "baxterq/types.hpp"

namespace baxterq::matgrp {

enum class GroupKind { GL, SOEven, Sp };
enum class DualKind { GL, SOEven, SOOdd };

std::string to_string(GroupKind kind);

/// Which group a computation lives on, with its embedding data.
///
/// GL_{l+1} has matrix size l+1. SO_{2l} and Sp_{2l} sit inside GL_{2l} as the
/// fixed points of g -> S J (g^{-1})^t J^{-1} S^{-1}, with J the antidiagonal
/// permutation and S the diagonal sign matrix
///   S_i = (-1)^{i-1} (i <= l),  S_{2l+1-i} = -S_i (Sp) or +S_i (SO).
/// This is the unique mirror rule making Omega = S J antisymmetric for Sp
/// (so Sp_2 = SL_2) and symmetric for SO (so SO_2 holds diag(e^t, e^{-t})).
class GroupTag {
 public:
  static GroupTag gl(int rank);
  static GroupTag so_even(int rank);
  static GroupTag sp(int rank);

  GroupKind kind() const { return kind_; }
  int rank() const { return rank_; }
  int size() const { return size_; }
  DualKind dual() const;

  /// Signs on the diagonal of S (all +1 for GL).
  const std::vector<double>& signs() const { return signs_; }
  RealMatrix s_matrix() const;
  RealMatrix j_matrix() const;
  /// Omega = S J; the group preserves g Omega g^t = Omega.
  RealMatrix omega() const;

  /// Half the sum of positive roots in the torus coordinates the spectral
  /// parameters pair with: x_1..x_{l+1} for GL (rho_j = l/2 + 1 - j) and
  /// t_1..t_l for a = diag(e^{t_1..t_l}, e^{-t_l..-t_1}) otherwise.
  const std::vector<double>& rho() const { return rho_; }

  /// Number of spectral parameters: l+1 for GL, l otherwise.
  int spectral_dim() const { return kind_ == GroupKind::GL ? rank_ + 1 : rank_; }

  bool operator==(const GroupTag& other) const {
    return kind_ == other.kind_ && rank_ == other.rank_;
  }

 private:
  GroupTag(GroupKind kind, int rank);

  GroupKind kind_;
  int rank_;
  int size_;
  std::vector<double> signs_;
  std::vector<double> rho_;
};

/// g = n a k with n lower unipotent, a = diag(e^{a_log}), k orthogonal.
struct IwasawaFactors {
  RealMatrix n_lower;
  RealVector a_log;
  RealMatrix k_orth;

  RealMatrix reconstruct() const;
};

IwasawaFactors iwasawa_decompose(const RealMatrix& g);

/// h(g) = log a of the Iwasawa factorization.
RealVector iwasawa_log_a(const RealMatrix& g);

/// delta_{B_-}(a) = exp(sum_{i<j} (y_i - y_j)).
double modular_delta(const RealVector& a_log);

/// chi(n) = exp(2 pi i sum_j n_{j+1,j}).
Complex unipotent_character(const RealMatrix& n_lower);

RealMatrix involution_star(const RealMatrix& g, const GroupTag& group);

/// ||g* - g|| <= tol ||g|| (Frobenius). GL tags accept every invertible g.
bool is_member(const RealMatrix& g, const GroupTag& group, double tol);

/// Random element exp(X) of the embedded classical group, X in its Lie algebra
/// with entries of size `spread`. Used by property tests and MC smoke checks.
RealMatrix random_group_element(const GroupTag& group, std::mt19937_64& rng, double spread);

/// A Z sample drawn from density exp(-pi Tr Z^t Z) together with its weight
/// |det Z|^{-n} / density(Z); weighted means estimate Haar integrals
/// int f(Z) dZ / |det Z|^n. Samples with |det Z| below the threshold carry
/// weight 0 and are flagged.
struct GaussianSample {
  RealMatrix z;
  double weight = 0.0;
  double abs_det = 0.0;
  bool rejected = false;
};

inline constexpr double kDefaultDetThreshold = 1e-8;

// Draws from a caller-owned engine (MC shards own one engine each).
RealMatrix draw_orthogonal(int n, std::mt19937_64& rng);
RealMatrix draw_maximal_compact(const GroupTag& group, std::mt19937_64& rng);
GaussianSample draw_gl_gaussian(int n, std::mt19937_64& rng,
                                double det_threshold = kDefaultDetThreshold);

/// Seeded source of orthogonal and Gaussian matrices.
class GroupSampler {
 public:
  explicit GroupSampler(RandomSeed seed) : rng_(seed.value) {}

  /// Haar-distributed element of O(n) (QR of a Gaussian matrix, R diagonal
  /// made positive).
  RealMatrix orthogonal(int n);

  /// Haar element of the maximal compact K = G cap O(size) of the group:
  /// O(n) for GL, S(O(l) x O(l)) for SO_{2l}, U(l) for Sp_{2l}.
  RealMatrix maximal_compact(const GroupTag& group);

  GaussianSample gl_gaussian(int n, double det_threshold = kDefaultDetThreshold);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

RealMatrix sample_orthogonal(int n, RandomSeed seed);
GaussianSample sample_gl_gaussian(int n, RandomSeed seed,
                                  double det_threshold = kDefaultDetThreshold);

}  // namespace baxterq::matgrp
