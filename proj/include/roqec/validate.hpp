#pragma once

// Self-validation: cross-engine and closed-form checks at reduced scale,
// suitable for a fresh-checkout smoke run. Each check prints one pass/fail
// line through the CLI; the suite fails if any check fails.

#include <cstdint>
#include <string>
#include <vector>

namespace roqec {

struct ValidationOptions {
  std::uint64_t seed = 20260811;
  int closed_form_samples = 25;   // random (p_fb, p_meas, x) triples
  int cross_check_samples = 6;    // random parameter sets, n <= 4
  long mc_samples = 20000;
  int quadrature_start_nodes = 16;

  // Fault injection for self-testing the suite: evaluates the exact engine
  // with the sign of the Gaussian damping exponent flipped, which must make
  // the closed-form n=1 check fail.
  bool flip_damping_sign = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

// The printed n=1 average-fidelity expression; shared by validation and the
// test suites as the closed-form regression target.
double closed_form_f1(double p_fb, double p_meas, double x);

}  // namespace roqec
