#pragma once

// Independent numerical evaluation of the average fidelity: direct 8x8
// simulation at fixed noise, tensor-product Gauss-Hermite quadrature over
// (omega_1, omega_2, omega_3), and Monte Carlo sampling. The quadrature path
// is the cross-check for the exact engine and the only engine for large n.

#include <cstdint>
#include <vector>

#include "roqec/exact_engine.hpp"

namespace roqec {

struct QuadratureSpec {
  int nodes_per_dim = 48;
  std::vector<double> nodes;    // standard physicists' Hermite nodes
  std::vector<double> weights;  // normalized: sum to 1 for the Gaussian mean

  // Golub-Welsch on the Hermite Jacobi matrix; weights come out normalized
  // for a standard-normal-style expectation (the 1/sqrt(pi) is folded in).
  static QuadratureSpec gauss_hermite(int nodes_per_dim);
};

struct MonteCarloSpec {
  long samples = 100000;
  std::uint64_t seed = 0;
};

// Deterministic single-realization simulation: n rounds of (dephase by
// segment_unitary(omega, dt/n), recover), then overlap with the input state.
double fidelity_fixed_noise(const ExperimentParams& params,
                            const NoiseSample& omega, const LogicalState& psi);

struct QuadratureResult {
  double value = 0.0;
  bool converged = false;
  double achieved_tol = 0.0;  // |last doubling step|
  int nodes_used = 0;
};

inline constexpr int kQuadratureNodeCap = 96;
inline constexpr double kQuadratureTol = 1e-8;

// Weighted six-state average of fidelity_fixed_noise over the K^3 node grid,
// with K doubled until successive values differ by less than kQuadratureTol
// (cap kQuadratureNodeCap; an unconverged result is flagged, not thrown).
QuadratureResult quadrature_fidelity(const ExperimentParams& params,
                                     const QuadratureSpec& quad);

// One fixed-size tensor-grid evaluation, no adaptivity; the building block of
// quadrature_fidelity.
double quadrature_fidelity_at(const ExperimentParams& params, int nodes_per_dim);

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error over independent noise draws; sample i uses
// the stream seed derived from (seed, i), so results do not depend on
// scheduling.
MonteCarloResult monte_carlo_fidelity(const ExperimentParams& params,
                                      const MonteCarloSpec& mc);

// Bloch-sphere-averaged fidelity of one bare qubit after time x*T2*:
// (2 + exp(-x^2)) / 3.
double single_qubit_fidelity(double x);

}  // namespace roqec
