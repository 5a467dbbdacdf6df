#include "roqec/exact_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

namespace roqec {

namespace {

PhaseVector dephase_shift(int a, int b) {
  PhaseVector d;
  for (int q = 1; q <= 3; ++q) {
    d.k[q - 1] = (qubit_z_sign(q, a) - qubit_z_sign(q, b)) / 2;
  }
  return d;
}

}  // namespace

PhasePolynomial PhasePolynomial::constant(Complex c) {
  PhasePolynomial p;
  p.add(PhaseVector{}, c);
  return p;
}

void PhasePolynomial::add(const PhaseVector& k, Complex c) {
  if (c == Complex(0.0, 0.0)) return;
  terms_[k] += c;
}

void PhasePolynomial::add_scaled(const PhasePolynomial& other, Complex scale) {
  if (scale == Complex(0.0, 0.0)) return;
  for (const auto& [k, c] : other.terms_) terms_[k] += scale * c;
}

void PhasePolynomial::shift(const PhaseVector& d) {
  if (d == PhaseVector{}) return;
  TermMap shifted;
  shifted.reserve(terms_.size());
  for (const auto& [k, c] : terms_) shifted.emplace(k + d, c);
  terms_ = std::move(shifted);
}

void PhasePolynomial::prune(double threshold) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < threshold) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

Complex PhasePolynomial::coefficient(const PhaseVector& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
}

Complex PhasePolynomial::evaluate(double tau, const NoiseSample& omega) const {
  Complex value(0.0, 0.0);
  for (const auto& [k, c] : terms_) {
    const double phase = tau * (k.k[0] * omega.omega[0] +
                                k.k[1] * omega.omega[1] +
                                k.k[2] * omega.omega[2]);
    value += c * std::polar(1.0, -phase);
  }
  return value;
}

Complex PhasePolynomial::gaussian_expectation(double tau,
                                              const NoiseParams& params) const {
  Complex value(0.0, 0.0);
  for (const auto& [k, c] : terms_) value += c * gaussian_damping(k, tau, params);
  return value;
}

Complex PhasePolynomial::expectation_with(
    const std::function<double(const PhaseVector&)>& moment) const {
  Complex value(0.0, 0.0);
  for (const auto& [k, c] : terms_) value += c * moment(k);
  return value;
}

PhasePolynomial PhasePolynomial::adjoint() const {
  PhasePolynomial out;
  out.terms_.reserve(terms_.size());
  for (const auto& [k, c] : terms_) out.terms_.emplace(-k, std::conj(c));
  return out;
}

SymbolicDensityMatrix SymbolicDensityMatrix::from_state(const Vector8c& psi) {
  SymbolicDensityMatrix sdm;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      sdm.entry(a, b).add(PhaseVector{}, psi(a) * std::conj(psi(b)));
  return sdm;
}

Matrix8c SymbolicDensityMatrix::evaluate(double tau, const NoiseSample& omega) const {
  Matrix8c m;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) m(a, b) = entry(a, b).evaluate(tau, omega);
  return m;
}

Matrix8c SymbolicDensityMatrix::gaussian_expectation(double tau,
                                                     const NoiseParams& params) const {
  Matrix8c m;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      m(a, b) = entry(a, b).gaussian_expectation(tau, params);
  return m;
}

PhasePolynomial SymbolicDensityMatrix::trace_polynomial() const {
  PhasePolynomial trace;
  for (int a = 0; a < kDim; ++a) trace.add_scaled(entry(a, a), 1.0);
  return trace;
}

std::size_t SymbolicDensityMatrix::max_term_count() const {
  std::size_t count = 0;
  for (const auto& p : entries) count = std::max(count, p.term_count());
  return count;
}

SymbolicDensityMatrix symbolic_dephase(const SymbolicDensityMatrix& sdm) {
  SymbolicDensityMatrix out = sdm;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) out.entry(a, b).shift(dephase_shift(a, b));
  return out;
}

SymbolicDensityMatrix symbolic_apply_channel(const SymbolicDensityMatrix& sdm,
                                             const KrausChannel& channel) {
  const SuperMatrixC& super = channel.superoperator();
  SymbolicDensityMatrix out;
  for (int eo = 0; eo < kSuperDim; ++eo) {
    for (int ei = 0; ei < kSuperDim; ++ei) {
      const Complex w = super(eo, ei);
      if (w == Complex(0.0, 0.0)) continue;
      out.entries[eo].add_scaled(sdm.entries[ei], w);
    }
    out.entries[eo].prune();
  }
  return out;
}

void validate_params(const ExperimentParams& params) {
  if (params.n < 1) {
    throw std::invalid_argument("n must be at least 1, got " +
                                std::to_string(params.n));
  }
  if (!(params.p_fb >= 0.0 && params.p_fb <= 1.0)) {
    throw std::invalid_argument("p_fb must lie in [0, 1], got " +
                                std::to_string(params.p_fb));
  }
  if (!(params.p_meas >= 0.0 && params.p_meas <= 1.0)) {
    throw std::invalid_argument("p_meas must lie in [0, 1], got " +
                                std::to_string(params.p_meas));
  }
  if (!(params.x >= 0.0)) {
    throw std::invalid_argument("x must be nonnegative, got " +
                                std::to_string(params.x));
  }
}

double DampingPolynomial::value(double g) const {
  double sum = 0.0;
  double power = 1.0;
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    sum += coeffs_[m] * power;
    power *= g;
  }
  return sum;
}

double DampingPolynomial::value_at(double x, int n) const {
  const double tau = x / n;
  return value(std::exp(-tau * tau));
}

// ---------------------------------------------------------------------------
// Production propagation path.
//
// The state is a dense cube over phase vectors k in [-n, n]^3 of 64-vectors
// (one real coefficient per density-matrix entry; all recovery channels and
// logical readouts are real in the computational basis). One round gathers,
// for each output entry, the 16 superoperator inputs at their dephase-shifted
// lattice sites. The six-state design average reduces by linearity to two
// propagated matrices:
//
//   6 F = 4 <0|E(|0><0|)|0> + 2 <1|E(|0><0|)|1> + 2 <0|E(|0><1|)|1>
//
// (logical labels), using that conjugation by Z x Z x Z swaps the roles of
// |0_L> and |1_L> while commuting with every segment unitary and recovery
// Kraus operator.
// ---------------------------------------------------------------------------

namespace {

struct GatherTerm {
  std::int32_t input_entry;
  std::int32_t shift_id;  // (s1+1)*9 + (s2+1)*3 + (s3+1)
  double weight;
};

struct RoundKernel {
  std::array<std::vector<GatherTerm>, kSuperDim> rows;
};

RoundKernel build_round_kernel(const SuperMatrix& super) {
  RoundKernel kernel;
  for (int eo = 0; eo < kSuperDim; ++eo) {
    for (int ei = 0; ei < kSuperDim; ++ei) {
      const double w = super(eo, ei);
      if (w == 0.0) continue;
      const PhaseVector s = dephase_shift(ei / kDim, ei % kDim);
      const int sid = (s.k[0] + 1) * 9 + (s.k[1] + 1) * 3 + (s.k[2] + 1);
      kernel.rows[eo].push_back({ei, sid, w});
    }
  }
  return kernel;
}

// Returns f with f[m] = sum over final k with |k|^2 = m of the readout
// functional sum_e weights[e] * state[k][e].
std::vector<double> propagate_readout(int n, const RoundKernel& kernel,
                                      const Matrix8d& initial,
                                      const Matrix8d& readout_weights) {
  // One cell of padding so gathers at the edge of the round-r cube stay in
  // bounds; the pad ring is never written and stays zero.
  const int radius = n + 1;
  const int side = 2 * radius + 1;
  const std::size_t cells = std::size_t(side) * side * side;
  std::vector<double> buf_a(cells * kSuperDim, 0.0);
  std::vector<double> buf_b(cells * kSuperDim, 0.0);

  auto linear = [&](int k1, int k2, int k3) {
    return ((std::size_t(k1 + radius) * side + std::size_t(k2 + radius)) * side +
            std::size_t(k3 + radius)) * kSuperDim;
  };

  {
    double* origin = buf_a.data() + linear(0, 0, 0);
    for (int e = 0; e < kSuperDim; ++e) origin[e] = initial(e / kDim, e % kDim);
  }

  std::array<std::ptrdiff_t, 27> shift_offset{};
  for (int s1 = -1; s1 <= 1; ++s1)
    for (int s2 = -1; s2 <= 1; ++s2)
      for (int s3 = -1; s3 <= 1; ++s3) {
        const int sid = (s1 + 1) * 9 + (s2 + 1) * 3 + (s3 + 1);
        shift_offset[sid] =
            -std::ptrdiff_t((s1 * side + s2) * side + s3) * kSuperDim;
      }

  double* in = buf_a.data();
  double* out = buf_b.data();
  for (int r = 1; r <= n; ++r) {
    for (int k1 = -r; k1 <= r; ++k1) {
      for (int k2 = -r; k2 <= r; ++k2) {
        const std::size_t row_base = linear(k1, k2, -r);
        for (int k3 = -r; k3 <= r; ++k3) {
          const std::size_t base = row_base + std::size_t(k3 + r) * kSuperDim;
          const double* cell_in = in + base;
          double* cell_out = out + base;
          for (int eo = 0; eo < kSuperDim; ++eo) {
            double acc = 0.0;
            for (const GatherTerm& t : kernel.rows[eo]) {
              acc += t.weight * cell_in[shift_offset[t.shift_id] + t.input_entry];
            }
            cell_out[eo] = acc;
          }
        }
      }
    }
    std::swap(in, out);
  }

  std::vector<double> f(std::size_t(3) * n * n + 1, 0.0);
  std::array<double, kSuperDim> weights{};
  for (int e = 0; e < kSuperDim; ++e) weights[e] = readout_weights(e / kDim, e % kDim);
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      for (int k3 = -n; k3 <= n; ++k3) {
        const double* cell = in + linear(k1, k2, k3);
        double acc = 0.0;
        for (int e = 0; e < kSuperDim; ++e) acc += weights[e] * cell[e];
        f[std::size_t(k1 * k1 + k2 * k2 + k3 * k3)] += acc;
      }
  return f;
}

void require_symbolic_rounds(int n) {
  if (n < 1 || n > kMaxSymbolicRounds) {
    throw std::invalid_argument(
        "n must lie in [1, " + std::to_string(kMaxSymbolicRounds) +
        "] for the exact engine, got " + std::to_string(n) +
        "; use the quadrature engine for larger n");
  }
}

}  // namespace

DampingPolynomial fidelity_damping_polynomial(int n, double p_fb, double p_meas) {
  require_symbolic_rounds(n);
  const KrausChannel channel = build_opt_recovery(p_fb, p_meas);
  const RoundKernel kernel = build_round_kernel(channel.real_superoperator());

  const PhaseFlipCode& code = phase_flip_code();
  const Vector8d v0 = code.zero_logical.vector.real();
  const Vector8d v1 = code.one_logical.vector.real();

  const Matrix8d population = v0 * v0.transpose();   // |0_L><0_L|
  const Matrix8d coherence = v0 * v1.transpose();    // |0_L><1_L|
  const Matrix8d population_readout =
      2.0 * (v0 * v0.transpose()) + v1 * v1.transpose();
  const Matrix8d coherence_readout = v0 * v1.transpose();

  const std::vector<double> f_pop =
      propagate_readout(n, kernel, population, population_readout);
  const std::vector<double> f_coh =
      propagate_readout(n, kernel, coherence, coherence_readout);

  std::vector<double> coeffs(f_pop.size());
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    coeffs[m] = (f_pop[m] + f_coh[m]) / 3.0;
  }
  return DampingPolynomial(std::move(coeffs));
}

double average_fidelity(const ExperimentParams& params) {
  validate_params(params);
  require_symbolic_rounds(params.n);
  const double value = fidelity_damping_polynomial(params.n, params.p_fb,
                                                   params.p_meas)
                           .value_at(params.x, params.n);
  return std::clamp(value, 0.0, 1.0);
}

std::vector<double> pfb_interpolation_nodes(int n) {
  std::vector<double> nodes(n + 1);
  for (int i = 0; i <= n; ++i) {
    nodes[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * double(i) / double(n)));
  }
  return nodes;
}

namespace {

Eigen::MatrixXd pfb_vandermonde(const std::vector<double>& nodes) {
  const int m = static_cast<int>(nodes.size());
  Eigen::MatrixXd v(m, m);
  for (int i = 0; i < m; ++i) {
    double power = 1.0;
    for (int j = 0; j < m; ++j) {
      v(i, j) = power;
      power *= nodes[i];
    }
  }
  return v;
}

}  // namespace

std::vector<double> fidelity_vs_pfb_polynomial(int n, double p_meas, double x) {
  require_symbolic_rounds(n);
  const std::vector<double> nodes = pfb_interpolation_nodes(n);
  Eigen::VectorXd values(n + 1);
  for (int i = 0; i <= n; ++i) {
    values(i) = average_fidelity({n, nodes[i], p_meas, x});
  }
  const Eigen::VectorXd coeffs =
      pfb_vandermonde(nodes).colPivHouseholderQr().solve(values);
  return std::vector<double>(coeffs.data(), coeffs.data() + n + 1);
}

std::vector<DampingPolynomial> fidelity_pfb_coefficient_table(int n, double p_meas) {
  require_symbolic_rounds(n);
  const std::vector<double> nodes = pfb_interpolation_nodes(n);
  const std::size_t width = std::size_t(3) * n * n + 1;

  Eigen::MatrixXd values(n + 1, width);
  for (int i = 0; i <= n; ++i) {
    const DampingPolynomial poly = fidelity_damping_polynomial(n, nodes[i], p_meas);
    for (std::size_t m = 0; m < width; ++m) values(i, m) = poly.coefficients()[m];
  }
  // The Vandermonde solve commutes with the damping expansion, so solving
  // once per damping power yields the p_fb coefficients for every x.
  const Eigen::MatrixXd solved =
      pfb_vandermonde(nodes).colPivHouseholderQr().solve(values);

  std::vector<DampingPolynomial> table(n + 1);
  for (int j = 0; j <= n; ++j) {
    std::vector<double> coeffs(width);
    for (std::size_t m = 0; m < width; ++m) coeffs[m] = solved(j, m);
    table[j] = DampingPolynomial(std::move(coeffs));
  }
  return table;
}

double reference_average_fidelity_with(
    const ExperimentParams& params,
    const std::function<double(const PhaseVector&)>& moment) {
  validate_params(params);
  require_symbolic_rounds(params.n);
  const KrausChannel channel = build_opt_recovery(params.p_fb, params.p_meas);
  double total = 0.0;
  for (const LogicalState& state : logical_two_design()) {
    SymbolicDensityMatrix sdm = SymbolicDensityMatrix::from_state(state.vector);
    for (int r = 0; r < params.n; ++r) {
      sdm = symbolic_dephase(sdm);
      sdm = symbolic_apply_channel(sdm, channel);
    }
    Complex fidelity(0.0, 0.0);
    for (int a = 0; a < kDim; ++a)
      for (int b = 0; b < kDim; ++b) {
        fidelity += std::conj(state.vector(a)) *
                    sdm.entry(a, b).expectation_with(moment) * state.vector(b);
      }
    total += fidelity.real();
  }
  return total / 6.0;
}

double reference_average_fidelity(const ExperimentParams& params) {
  const double tau = params.x / params.n;
  const NoiseParams noise(1.0);
  return reference_average_fidelity_with(
      params, [&](const PhaseVector& k) { return gaussian_damping(k, tau, noise); });
}

}  // namespace roqec
