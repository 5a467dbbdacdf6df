#pragma once

#include <cmath>
#include <cstdint>

#include "roqec/exact_engine.hpp"
#include "roqec/numeric_oracle.hpp"

namespace roqec::testing {

struct Rng {
  std::uint64_t state = 0x5eed5eed5eedull;
  double uniform() { return double(splitmix64(state)) / 18446744073709551616.0; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline LogicalState random_logical_state(Rng& rng) {
  GaussianSampler g(splitmix64(rng.state));
  Complex alpha(g.next(), g.next());
  Complex beta(g.next(), g.next());
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  return make_logical_state(alpha / norm, beta / norm);
}

inline DensityMatrix random_density_matrix(Rng& rng) {
  GaussianSampler g(splitmix64(rng.state));
  Matrix8c raw;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) raw(a, b) = Complex(g.next(), g.next());
  DensityMatrix rho = raw * raw.adjoint();
  return rho / rho.trace();
}

// Six-state design mean of fidelity_fixed_noise; the quantity the quadrature
// and Monte Carlo engines integrate.
inline double six_state_fixed_noise(const ExperimentParams& params,
                                    const NoiseSample& omega) {
  double total = 0.0;
  for (const LogicalState& state : logical_two_design()) {
    total += fidelity_fixed_noise(params, omega, state);
  }
  return total / 6.0;
}

}  // namespace roqec::testing
