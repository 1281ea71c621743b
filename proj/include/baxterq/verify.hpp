#pragma once

// Verification battery: every identity the library implements, grouped in
// suites, with machine-readable reports.

#include <cstdint>
#include <string>
#include <vector>

#include "baxterq/types.hpp"

namespace baxterq::verify {

// relative:  |computed - expected| <= tolerance * max(|expected|, 1e-300)
// at_most:   |computed| <= tolerance
// at_least:  |computed| >= tolerance
// sigma:     |computed - expected| <= tolerance * error_estimate
enum class Comparison { Relative, AtMost, AtLeast, Sigma };

std::string to_string(Comparison c);

struct Check {
  std::string id;
  std::string reference;  // which identity is being checked
  Complex computed{0.0, 0.0};
  Complex expected{0.0, 0.0};
  double tolerance = 0.0;
  double error_estimate = 0.0;
  Comparison comparison = Comparison::Relative;
  bool pass = false;
  bool optional = false;
  int group = 0;         // acceptance item the check belongs to
  double seconds = 0.0;  // wall time; not part of the JSON report
  std::string note;      // exception text when the computation threw
};

bool evaluate(const Check& c);

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t effort = 0;
  std::vector<Check> checks;

  bool required_pass() const;
  // JSON text (schema 1).
  std::string to_json(int indent = 2) const;
};

struct SuiteOptions {
  RandomSeed seed{7};
  std::int64_t effort = 0;  // MC samples; 0 = suite default
  double tol_scale = 1.0;   // loosens (> 1) or tightens (< 1) every tolerance
};

const std::vector<std::string>& suite_names();  // without "all"

// Throws DomainError for an unknown suite. "all" runs every suite.
Report run_suite(const std::string& name, const SuiteOptions& opts = {});

}  // namespace baxterq::verify
