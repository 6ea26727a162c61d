// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

namespace bellman {

/// Outcome of one closed-form regression suite.  Each suite builds foliations
/// for one built-in boundary function and checks the quantities that have
/// closed forms: upper-boundary values, tangent-domain evaluations, cup
/// symmetry, angle-vertex equations, signature thresholds.
struct ExampleResult {
  std::string name;     ///< registry-flavoured suite name
  bool pass = false;    ///< true iff every check met its pinned tolerance
  double worst = 0.0;   ///< largest residual/deviation observed
  double tolerance = 0.0;  ///< the tightest tolerance the suite enforces
  double seconds = 0.0;    ///< wall-clock time for the whole suite
  std::string detail;      ///< one-line summary of what was measured
};

/// Names of the closed-form regression suites, in canonical order.
std::vector<std::string> example_names();

/// Run a single suite by name.  Throws ConfigError for unknown names.
ExampleResult run_example(const std::string& name);

/// Run every suite in canonical order.
std::vector<ExampleResult> run_examples();

}  // namespace bellman
