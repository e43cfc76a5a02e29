#include <doctest.h>

#include "psm/verify.hpp"

using namespace psm;

namespace {

void require_pass(const SuiteReport& r) {
  for (const Check& c : r.checks) {
    INFO(r.suite << ": " << c.name << " residual " << c.residual << " tol " << c.tolerance);
    CHECK(c.passed);
  }
  CHECK(r.passed());
}

}  // namespace

TEST_CASE("AGM complete elliptic integral") {
  CHECK(elliptic_k(0.0) == doctest::Approx(std::acos(-1.0) / 2).epsilon(1e-15));
  CHECK(elliptic_k(0.5) == doctest::Approx(1.8540746773013719).epsilon(1e-15));
  CHECK(elliptic_k(0.9) == doctest::Approx(2.5780921133481733).epsilon(1e-14));
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 12);
  CHECK_THROWS_AS(run_suite("no-such-suite", SuiteOptions{}), InvalidArgument);
}

TEST_CASE("fast suites pass") {
  SuiteOptions opt;
  require_pass(run_suite("theta-translations", opt));
  require_pass(run_suite("kontsevich", opt));
  require_pass(run_suite("riemann-constants", opt));
  opt.n = 3;
  require_pass(run_suite("boundary", opt));
  require_pass(run_suite("swap", opt));
}

TEST_CASE("cohomology suite reports exact dimensions") {
  SuiteOptions opt;
  const SuiteReport r = run_suite("cohomology", opt);
  require_pass(r);
  REQUIRE(r.dims.size() == 7);
  for (const auto& d : r.dims) {
    const int n = d[0];
    CHECK(d[1] == 0);
    CHECK(d[2] == (n % 2 == 0 ? (n - 2) / 2 : (n - 3) / 2));
    CHECK(d[3] == 0);
  }
}

TEST_CASE("suites are deterministic for a fixed seed") {
  SuiteOptions opt;
  opt.seed = 42;
  const SuiteReport a = run_suite("swap", opt), b = run_suite("swap", opt);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].residual == b.checks[i].residual);
}
