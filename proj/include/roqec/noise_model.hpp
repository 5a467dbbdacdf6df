#pragma once

// Quasi-static Gaussian dephasing. Each qubit carries a frequency offset
// omega_j that is constant within a run and normally distributed across runs
// with mean zero and variance 2/T2*^2, so a single coherence decays as
// exp[-(t/T2*)^2]. Time is handled in units of T2* throughout.

#include <array>
#include <cstdint>

#include "roqec/qec_core.hpp"

namespace roqec {

struct NoiseParams {
  explicit NoiseParams(double t2 = 1.0);
  double t2_star;
  double sigma_sq() const { return 2.0 / (t2_star * t2_star); }
};

struct NoiseSample {
  std::array<double, 3> omega{0.0, 0.0, 0.0};
};

// Per-qubit accumulated phase indices. After a dephasing segment of duration
// tau, entry (a, b) of the density matrix picks up exp(-i tau sum_j omega_j
// k_j) with k_j incremented by (z_j(a) - z_j(b))/2 in {-1, 0, +1}.
struct PhaseVector {
  std::array<int, 3> k{0, 0, 0};
  int norm_sq() const { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }
  friend bool operator==(const PhaseVector&, const PhaseVector&) = default;
};

PhaseVector operator+(const PhaseVector& a, const PhaseVector& b);
PhaseVector operator-(const PhaseVector& a);

struct PhaseVectorHash {
  std::size_t operator()(const PhaseVector& v) const;
};

struct SegmentUnitary {
  std::array<Complex, 8> diagonal;
  double tau = 0.0;
  Matrix8c matrix() const;
  DensityMatrix conjugate(const DensityMatrix& rho) const;  // V rho V^dag
};

std::uint64_t splitmix64(std::uint64_t& state);

// Independent, scheduling-stable stream seed for (seed, index) pairs.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : state_(seed) {}
  double next();  // standard normal (Box-Muller)

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Three independent draws from N(0, 2/T2*^2), one per qubit.
NoiseSample sample_noise(const NoiseParams& params, std::uint64_t rng_seed);

// exp(-i tau H) for H = (1/2) sum_j omega_j Z_j; diagonal in the
// computational basis. For quasi-static noise the integral of H over a
// segment is just tau * H.
SegmentUnitary segment_unitary(const NoiseSample& omega, double tau);

// Exact Gaussian expectation of exp(-i tau k.omega):
// prod_j exp(-(k_j tau / T2*)^2). Factorizes exactly over qubits and is even
// in each k_j.
double gaussian_damping(const PhaseVector& k, double tau, const NoiseParams& params);

}  // namespace roqec
