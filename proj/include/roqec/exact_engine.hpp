#pragma once

// Exact (up to floating point) evaluation of the n-round average fidelity.
//
// Within one run the noise frequencies are constant, so after any number of
// (dephase, recover) rounds every density-matrix entry is a finite sum of
// terms c * exp(-i tau k.omega) indexed by an integer phase vector k. The
// engine propagates those sums symbolically and applies the Gaussian average
// once, at readout, by substituting the exact moment for each phase monomial.

#include <functional>
#include <unordered_map>
#include <vector>

#include "roqec/noise_model.hpp"

namespace roqec {

class PhasePolynomial {
 public:
  // Coefficients below this magnitude are dropped after channel application.
  static constexpr double kPruneThreshold = 1e-16;
  using TermMap = std::unordered_map<PhaseVector, Complex, PhaseVectorHash>;

  PhasePolynomial() = default;
  static PhasePolynomial constant(Complex c);

  void add(const PhaseVector& k, Complex c);
  void add_scaled(const PhasePolynomial& other, Complex scale);
  void shift(const PhaseVector& d);
  void prune(double threshold = kPruneThreshold);

  Complex coefficient(const PhaseVector& k) const;
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  // Value at one fixed noise realization: sum_k c_k exp(-i tau k.omega).
  Complex evaluate(double tau, const NoiseSample& omega) const;

  // Gaussian average: every monomial k is replaced by its exact moment.
  Complex gaussian_expectation(double tau, const NoiseParams& params) const;
  Complex expectation_with(
      const std::function<double(const PhaseVector&)>& moment) const;

  // Conjugate coefficients and negate phase vectors; the symbolic analogue
  // of the matrix adjoint for a single entry.
  PhasePolynomial adjoint() const;

 private:
  TermMap terms_;
};

struct SymbolicDensityMatrix {
  std::array<PhasePolynomial, kSuperDim> entries;

  PhasePolynomial& entry(int a, int b) { return entries[vec_index(a, b)]; }
  const PhasePolynomial& entry(int a, int b) const {
    return entries[vec_index(a, b)];
  }

  static SymbolicDensityMatrix from_state(const Vector8c& psi);

  Matrix8c evaluate(double tau, const NoiseSample& omega) const;
  Matrix8c gaussian_expectation(double tau, const NoiseParams& params) const;

  PhasePolynomial trace_polynomial() const;
  std::size_t max_term_count() const;
};

// One dephasing segment: entry (a, b) has every phase vector shifted by
// (z_j(a) - z_j(b))/2 per qubit; coefficients are untouched.
SymbolicDensityMatrix symbolic_dephase(const SymbolicDensityMatrix& sdm);

// Entry-wise application of the channel superoperator; polynomials combine
// key-wise and are pruned afterwards.
SymbolicDensityMatrix symbolic_apply_channel(const SymbolicDensityMatrix& sdm,
                                             const KrausChannel& channel);

struct ExperimentParams {
  int n = 1;           // recovery rounds, equally spaced over [0, dt]
  double p_fb = 1.0;   // probability a round feeds back
  double p_meas = 0.0; // probability of a wrong syndrome report
  double x = 0.0;      // dt / T2*
};

// Throws std::invalid_argument naming the offending field.
void validate_params(const ExperimentParams& params);

// Rounds beyond this go to the quadrature engine.
inline constexpr int kMaxSymbolicRounds = 12;

// The average fidelity at fixed (n, p_fb, p_meas) as a polynomial in the
// per-segment damping factor g = exp[-(x/n)^2]: a phase vector k contributes
// at power |k|^2, so F(x) = sum_m coeffs[m] g^m for every x at once.
class DampingPolynomial {
 public:
  DampingPolynomial() = default;
  explicit DampingPolynomial(std::vector<double> coeffs)
      : coeffs_(std::move(coeffs)) {}

  double value(double g) const;
  double value_at(double x, int n) const;

  const std::vector<double>& coefficients() const { return coeffs_; }
  std::vector<double>& coefficients() { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

DampingPolynomial fidelity_damping_polynomial(int n, double p_fb, double p_meas);

// Average fidelity over the six-state logical design after n rounds of
// (dephase, recover) with the Gaussian noise average applied at readout.
double average_fidelity(const ExperimentParams& params);

// Chebyshev-Lobatto points mapped to [0, 1]; endpoints included.
std::vector<double> pfb_interpolation_nodes(int n);

// Coefficients c_0..c_n with F_n(p_fb) = sum_m c_m p_fb^m at fixed
// (p_meas, x), from values at n+1 nodes and a Vandermonde solve.
std::vector<double> fidelity_vs_pfb_polynomial(int n, double p_meas, double x);

// Same coefficients with x left free: entry m is the damping polynomial of
// the p_fb^m coefficient. One table serves every x at fixed (n, p_meas).
std::vector<DampingPolynomial> fidelity_pfb_coefficient_table(int n, double p_meas);

// Literal six-state evaluation on the sparse symbolic types. Slow; kept as an
// independent reference for the production path above.
double reference_average_fidelity(const ExperimentParams& params);
double reference_average_fidelity_with(
    const ExperimentParams& params,
    const std::function<double(const PhaseVector&)>& moment);

}  // namespace roqec
