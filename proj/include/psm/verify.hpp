#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psm/homotopy.hpp"

namespace psm {

/// One thresholded comparison inside a suite.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Outcome of a property suite. Numbers only; runtime is reported
/// separately so that reports stay byte-stable.
struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::vector<SplittingReport> splitting;  // filled by the splitting suite only
  std::vector<std::array<int, 4>> dims;    // filled by the cohomology suite only: n, h0, h1, h2

  bool passed() const;
  void add(const std::string& name, double residual, double tolerance);
  /// Adds a check that passes when value > bound.
  void add_lower(const std::string& name, double value, double bound);
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Restricts suites that loop over n; 0 runs the default set.
  int n = 0;
  /// Restricts suites that loop over S1/S2.
  std::optional<Which> which;
  /// Frame for n >= 4 suites; a standard branch set is used when absent.
  std::shared_ptr<const PeriodFrame> frame;
  QuadratureConfig quadrature;
  HomotopyBudget budget;
};

/// Standard branch points used when no frame is supplied: {0,1,2},
/// {0,1,2,3,4}, {0,...,6}.
BranchData standard_branch(int genus);
std::shared_ptr<const PeriodFrame> standard_frame(int genus, const QuadratureConfig& cfg = {});

/// Complete elliptic integral of the first kind K(m), m = k^2, by the AGM.
double elliptic_k(double m);

SuiteReport suite_theta_translations(const SuiteOptions& opt);
SuiteReport suite_odd_half_periods(const SuiteOptions& opt);
SuiteReport suite_frame_invariants(const SuiteOptions& opt);
SuiteReport suite_riemann_constants(const SuiteOptions& opt);
SuiteReport suite_kontsevich(const SuiteOptions& opt);
SuiteReport suite_boundary(const SuiteOptions& opt);
SuiteReport suite_reflections(const SuiteOptions& opt);
SuiteReport suite_swap(const SuiteOptions& opt);
SuiteReport suite_zero_set(const SuiteOptions& opt);
SuiteReport suite_bilinear(const SuiteOptions& opt);
SuiteReport suite_splitting(const SuiteOptions& opt);
SuiteReport suite_cohomology(const SuiteOptions& opt);

const std::vector<std::string>& suite_names();
/// Throws InvalidArgument for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace psm
