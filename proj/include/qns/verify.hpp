#pragma once

// Built-in verification suites: algebraic identities, the 9/16 inequality, noise
// hypotheses and strong convergence. Each check reports a measured value against
// its threshold; informational checks are printed but never fail a suite.

#include <cstdint>
#include <string>
#include <vector>

#include "qns/spectral.hpp"

namespace qns::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
  bool informational = false;
};

const std::vector<std::string>& suite_names();

/// Runs one suite ("identities", "inequality-916", "noise", "convergence") or "all".
/// Unknown names raise UsageError.
std::vector<CheckResult> run_suite(const std::string& name);

bool all_passed(const std::vector<CheckResult>& results);
std::string format_table(const std::vector<CheckResult>& results);
std::string to_json(const std::vector<CheckResult>& results);

/// Smooth positive densities rho = c exp(sum_{k<=4} (a_k cos 2 pi k x + b_k sin 2 pi k x))
/// with decaying random coefficients, drawn from `seed`.
std::vector<RealField> density_corpus(const TorusGrid& grid, int count, std::uint64_t seed);

/// Positive band-limited fields g - min g + delta with random trigonometric g of
/// degree <= 8 and delta in [0.05, 1].
std::vector<RealField> positive_bandlimited_fields(const TorusGrid& grid, int count,
                                                   std::uint64_t seed);

/// Minimizing family f = (sin^2(pi x) + eps)^{3/4} for the 9/16 inequality.
RealField inequality_near_extremal(const TorusGrid& grid, double eps);

/// Margin divided by (9/16) int f_xx^2: 1 far from equality, 0 at equality.
double relative_inequality_margin(const RealField& f, const TorusGrid& grid);

}  // namespace qns::verify
