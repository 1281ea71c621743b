#include <json.hpp>

#include "baxterq/errors.hpp"
#include "baxterq/verify.hpp"
#include "helpers.hpp"

using namespace baxterq;
using namespace baxterq::verify;

TEST_CASE("pass rules") {
  Check c;
  c.computed = 1.0 + 1e-9;
  c.expected = 1.0;
  c.tolerance = 1e-8;
  CHECK(evaluate(c));
  c.tolerance = 1e-10;
  CHECK_FALSE(evaluate(c));
  c.comparison = Comparison::AtMost;
  c.computed = 5e-4;
  c.tolerance = 1e-3;
  CHECK(evaluate(c));
  c.comparison = Comparison::AtLeast;
  c.computed = 3.0;
  c.tolerance = 2.0;
  CHECK(evaluate(c));
  c.comparison = Comparison::Sigma;
  c.computed = 1.02;
  c.expected = 1.0;
  c.error_estimate = 0.01;
  c.tolerance = 3.0;
  CHECK(evaluate(c));
  c.error_estimate = 0.0;
  CHECK_FALSE(evaluate(c));
  c.comparison = Comparison::Relative;
  c.computed = Complex(std::nan(""), 0.0);
  c.tolerance = 1e300;
  CHECK_FALSE(evaluate(c));
  // expected 0 uses the 1e-300 floor
  c.computed = 0.0;
  c.expected = 0.0;
  c.tolerance = 1e-8;
  CHECK(evaluate(c));
}

TEST_CASE("report JSON and determinism") {
  const auto a = run_suite("gl1");
  CHECK(a.checks.size() == 6);
  CHECK(a.required_pass());
  const auto doc = nlohmann::json::parse(a.to_json());
  CHECK(doc["schema"] == 1);
  CHECK(doc["suite"] == "gl1");
  CHECK(doc["checks"].size() == 6);
  CHECK(doc["checks"][0].contains("reference"));
  CHECK(doc["checks"][0]["computed"].contains("re"));
  CHECK(doc["checks"][0]["optional"] == false);
  CHECK(run_suite("gl1").to_json() == a.to_json());
}

TEST_CASE("optional flag and options") {
  SuiteOptions o;
  o.effort = 2000;
  const auto r = run_suite("sp2-mc", o);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].optional);
  CHECK(r.required_pass());
  CHECK(nlohmann::json::parse(r.to_json())["checks"][0]["optional"] == true);

  SuiteOptions strict;
  strict.tol_scale = 1e-30;
  CHECK_FALSE(run_suite("gl1", strict).required_pass());
  CHECK_THROWS_AS(run_suite("nope"), DomainError);
  SuiteOptions bad;
  bad.tol_scale = 0.0;
  CHECK_THROWS_AS(run_suite("gl1", bad), DomainError);
  CHECK(suite_names().size() == 7);
}
