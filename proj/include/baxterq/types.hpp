#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace baxterq {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr Complex kI{0.0, 1.0};

// Seed for every random stream; identical seeds give identical streams.
struct RandomSeed {
  std::uint64_t value = 0;
};

// splitmix64 finalizer, used to derive independent shard seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline RandomSeed derive_seed(RandomSeed seed, std::uint64_t stream) {
  return RandomSeed{mix_seed(seed.value, stream)};
}

}  // namespace baxterq
