#include "roqec/qec_core.hpp"

#include <cmath>
#include <stdexcept>

namespace roqec {

namespace {

int parity(int basis_index) {
  int p = 0;
  for (int q = 0; q < 3; ++q) p ^= (basis_index >> q) & 1;
  return p;
}

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) +
                                " must lie in [0, 1], got " +
                                std::to_string(value));
  }
}

}  // namespace

Matrix8d pauli_z(int qubit) {
  Matrix8d z = Matrix8d::Zero();
  for (int a = 0; a < kDim; ++a) z(a, a) = qubit_z_sign(qubit, a);
  return z;
}

PhaseFlipCode build_code() {
  PhaseFlipCode code;
  const double amp = 1.0 / std::sqrt(8.0);
  Vector8d zero = Vector8d::Zero();
  Vector8d one = Vector8d::Zero();
  for (int a = 0; a < kDim; ++a) {
    zero(a) = amp;                            // |+++>
    one(a) = parity(a) ? -amp : amp;          // |--->
  }
  code.zero_logical.vector = zero.cast<Complex>();
  code.one_logical.vector = one.cast<Complex>();

  const Matrix8d p0 = zero * zero.transpose() + one * one.transpose();
  for (int j = 0; j < 4; ++j) {
    code.projectors[j].index = j;
    code.corrections[j].index = j;
    if (j == 0) {
      code.projectors[j].matrix = p0;
      code.corrections[j].matrix = Matrix8d::Identity();
    } else {
      const Matrix8d zj = pauli_z(j);
      code.projectors[j].matrix = zj * p0 * zj;
      code.corrections[j].matrix = zj;
    }
  }
  return code;
}

const PhaseFlipCode& phase_flip_code() {
  static const PhaseFlipCode code = build_code();
  return code;
}

LogicalState make_logical_state(Complex alpha, Complex beta) {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw std::invalid_argument("logical amplitudes must be normalized");
  }
  const PhaseFlipCode& code = phase_flip_code();
  LogicalState state;
  state.alpha = alpha;
  state.beta = beta;
  state.vector = alpha * code.zero_logical.vector + beta * code.one_logical.vector;
  return state;
}

std::array<LogicalState, 6> logical_two_design() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  return {
      make_logical_state(1.0, 0.0),
      make_logical_state(0.0, 1.0),
      make_logical_state(s, s),
      make_logical_state(s, -s),
      make_logical_state(s, i * s),
      make_logical_state(s, -i * s),
  };
}

std::string to_string(ChannelLabel label) {
  switch (label) {
    case ChannelLabel::Ideal: return "ideal";
    case ChannelLabel::Faulty: return "faulty";
    case ChannelLabel::MeasureOnly: return "measure-only";
    case ChannelLabel::Opt: return "opt";
  }
  return "unknown";
}

KrausChannel::KrausChannel(ChannelLabel label, std::vector<Matrix8c> kraus_ops)
    : label_(label), kraus_(std::move(kraus_ops)) {
  if (kraus_.empty()) {
    throw std::invalid_argument("a channel needs at least one Kraus operator");
  }
  super_.setZero();
  for (const Matrix8c& k : kraus_) {
    for (int a = 0; a < kDim; ++a)
      for (int b = 0; b < kDim; ++b)
        for (int c = 0; c < kDim; ++c)
          for (int d = 0; d < kDim; ++d)
            super_(vec_index(a, b), vec_index(c, d)) +=
                k(a, c) * std::conj(k(b, d));
  }
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  DensityMatrix out = DensityMatrix::Zero();
  for (const Matrix8c& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

SuperMatrix KrausChannel::real_superoperator() const {
  return super_.real();
}

double KrausChannel::trace_preservation_defect() const {
  Matrix8c sum = Matrix8c::Zero();
  for (const Matrix8c& k : kraus_) sum += k.adjoint() * k;
  sum -= Matrix8c::Identity();
  return sum.cwiseAbs().maxCoeff();
}

double KrausChannel::choi_min_eigenvalue() const {
  // Choi(a*8+c, b*8+d) = S(vec(a,b), vec(c,d))
  SuperMatrixC choi;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c)
        for (int d = 0; d < kDim; ++d)
          choi(kDim * a + c, kDim * b + d) = super_(vec_index(a, b), vec_index(c, d));
  Eigen::SelfAdjointEigenSolver<SuperMatrixC> solver(choi, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

KrausChannel build_ideal_recovery() {
  const PhaseFlipCode& code = phase_flip_code();
  std::vector<Matrix8c> ops;
  ops.reserve(4);
  for (int j = 0; j < 4; ++j) {
    // U_j^dag P_j; U_j is real symmetric so the adjoint is U_j itself.
    ops.push_back(
        (code.corrections[j].matrix * code.projectors[j].matrix).cast<Complex>());
  }
  return KrausChannel(ChannelLabel::Ideal, std::move(ops));
}

KrausChannel build_faulty_recovery(double p_meas) {
  require_probability(p_meas, "p_meas");
  const PhaseFlipCode& code = phase_flip_code();
  std::vector<Matrix8c> ops;
  const double w_ok = std::sqrt(1.0 - p_meas);
  const double w_bad = std::sqrt(p_meas / 3.0);
  for (int j = 0; j < 4; ++j) {
    if (w_ok > 0.0) {
      ops.push_back(w_ok * (code.corrections[j].matrix *
                            code.projectors[j].matrix).cast<Complex>());
    }
  }
  // State projected into range(P_i) but reported as syndrome j != i, so the
  // wrong correction U_j is applied.
  if (w_bad > 0.0) {
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) {
        if (i == j) continue;
        ops.push_back(w_bad * (code.corrections[j].matrix *
                               code.projectors[i].matrix).cast<Complex>());
      }
  }
  return KrausChannel(ChannelLabel::Faulty, std::move(ops));
}

KrausChannel build_measurement_channel() {
  const PhaseFlipCode& code = phase_flip_code();
  std::vector<Matrix8c> ops;
  ops.reserve(4);
  for (int j = 0; j < 4; ++j)
    ops.push_back(code.projectors[j].matrix.cast<Complex>());
  return KrausChannel(ChannelLabel::MeasureOnly, std::move(ops));
}

KrausChannel build_opt_recovery(double p_fb, double p_meas) {
  require_probability(p_fb, "p_fb");
  require_probability(p_meas, "p_meas");
  std::vector<Matrix8c> ops;
  if (p_fb > 0.0) {
    const double w = std::sqrt(p_fb);
    const KrausChannel faulty = build_faulty_recovery(p_meas);
    for (const Matrix8c& k : faulty.kraus_ops()) ops.push_back(w * k);
  }
  if (p_fb < 1.0) {
    const double w = std::sqrt(1.0 - p_fb);
    const KrausChannel measurement = build_measurement_channel();
    for (const Matrix8c& k : measurement.kraus_ops()) ops.push_back(w * k);
  }
  return KrausChannel(ChannelLabel::Opt, std::move(ops));
}

DensityMatrixCheck check_density_matrix(const DensityMatrix& rho) {
  DensityMatrixCheck check;
  check.hermiticity_defect = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
  check.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Matrix8c> solver(rho, Eigen::EigenvaluesOnly);
  check.min_eigenvalue = solver.eigenvalues().minCoeff();
  return check;
}

}  // namespace roqec
