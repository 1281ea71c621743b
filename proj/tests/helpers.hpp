#pragma once

#include <complex>

#include <doctest.h>

#include "baxterq/types.hpp"

namespace testing {

inline double rel_err(baxterq::Complex a, baxterq::Complex b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace testing

#define CHECK_REL(a, b, tol) CHECK(testing::rel_err((a), (b)) <= (tol))
