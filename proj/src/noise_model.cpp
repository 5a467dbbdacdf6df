#include "roqec/noise_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace roqec {

NoiseParams::NoiseParams(double t2) : t2_star(t2) {
  if (!(t2 > 0.0)) {
    throw std::invalid_argument("t2_star must be positive");
  }
}

PhaseVector operator+(const PhaseVector& a, const PhaseVector& b) {
  return PhaseVector{{a.k[0] + b.k[0], a.k[1] + b.k[1], a.k[2] + b.k[2]}};
}

PhaseVector operator-(const PhaseVector& a) {
  return PhaseVector{{-a.k[0], -a.k[1], -a.k[2]}};
}

std::size_t PhaseVectorHash::operator()(const PhaseVector& v) const {
  // Indices stay far below 2^20 in practice; pack and mix.
  std::uint64_t packed = (std::uint64_t(std::uint32_t(v.k[0] + (1 << 20))) << 42) ^
                         (std::uint64_t(std::uint32_t(v.k[1] + (1 << 20))) << 21) ^
                         std::uint64_t(std::uint32_t(v.k[2] + (1 << 20)));
  std::uint64_t state = packed;
  return static_cast<std::size_t>(splitmix64(state));
}

Matrix8c SegmentUnitary::matrix() const {
  Matrix8c m = Matrix8c::Zero();
  for (int a = 0; a < kDim; ++a) m(a, a) = diagonal[a];
  return m;
}

DensityMatrix SegmentUnitary::conjugate(const DensityMatrix& rho) const {
  DensityMatrix out;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      out(a, b) = diagonal[a] * rho(a, b) * std::conj(diagonal[b]);
  return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ull * (index + 1));
  return splitmix64(state);
}

double GaussianSampler::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on uniforms in (0, 1].
  const double inv = 1.0 / 18446744073709551616.0;  // 2^-64
  double u1 = (static_cast<double>(splitmix64(state_)) + 1.0) * inv;
  double u2 = static_cast<double>(splitmix64(state_)) * inv;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

NoiseSample sample_noise(const NoiseParams& params, std::uint64_t rng_seed) {
  GaussianSampler sampler(rng_seed);
  const double sigma = std::sqrt(params.sigma_sq());
  NoiseSample sample;
  for (int j = 0; j < 3; ++j) sample.omega[j] = sigma * sampler.next();
  return sample;
}

SegmentUnitary segment_unitary(const NoiseSample& omega, double tau) {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("tau must be nonnegative");
  }
  SegmentUnitary v;
  v.tau = tau;
  for (int a = 0; a < kDim; ++a) {
    double h = 0.0;
    for (int q = 1; q <= 3; ++q) h += omega.omega[q - 1] * qubit_z_sign(q, a);
    v.diagonal[a] = std::polar(1.0, -0.5 * tau * h);
  }
  return v;
}

double gaussian_damping(const PhaseVector& k, double tau, const NoiseParams& params) {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("tau must be nonnegative");
  }
  // Product form keeps the per-qubit factorization bit-exact.
  double value = 1.0;
  for (int j = 0; j < 3; ++j) {
    const double arg = k.k[j] * tau / params.t2_star;
    value *= std::exp(-arg * arg);
  }
  return value;
}

}  // namespace roqec
