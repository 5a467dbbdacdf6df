#pragma once

// Three-qubit phase-flip code and its recovery channels. The code stores a
// logical qubit in |+++> / |--->; phase errors are located by the four rank-2
// syndrome projectors {P_j} and undone by U_0 = I, U_j = Z_j. Recoveries come
// in four flavours: ideal, faulty (syndrome readout wrong with probability
// p_meas, uniformly over the three wrong outcomes), measurement-only (project
// on {P_j} without feedback), and the hybrid that feeds back with probability
// p_fb.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace roqec {

using Complex = std::complex<double>;
using Matrix8c = Eigen::Matrix<Complex, 8, 8>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;
using Vector8c = Eigen::Matrix<Complex, 8, 1>;
using Vector8d = Eigen::Matrix<double, 8, 1>;
using SuperMatrixC = Eigen::Matrix<Complex, 64, 64>;
using SuperMatrix = Eigen::Matrix<double, 64, 64>;
using DensityMatrix = Matrix8c;

inline constexpr int kDim = 8;
inline constexpr int kSuperDim = 64;

// Density-matrix entry (a, b) lives at flattened index 8*a + b; every
// superoperator in this project acts on that flattening.
constexpr int vec_index(int a, int b) { return kDim * a + b; }

// Qubit 1 is the most significant bit of the 3-bit basis index. Returns the
// Z eigenvalue (+1 for |0>, -1 for |1>) of `qubit` (1-based) in basis state
// `basis_index`.
constexpr int qubit_z_sign(int qubit, int basis_index) {
  return ((basis_index >> (3 - qubit)) & 1) ? -1 : +1;
}

Matrix8d pauli_z(int qubit);

struct Codeword {
  Vector8c vector;
};

struct SyndromeProjector {
  int index = 0;  // j = 0: code space; j >= 1: range of a Z_j error
  Matrix8d matrix = Matrix8d::Zero();
};

struct CorrectionUnitary {
  int index = 0;  // U_0 = I, U_j = Z_j
  Matrix8d matrix = Matrix8d::Identity();
};

struct PhaseFlipCode {
  Codeword zero_logical;  // |+++>, all amplitudes 1/sqrt(8)
  Codeword one_logical;   // |--->
  std::array<SyndromeProjector, 4> projectors;
  std::array<CorrectionUnitary, 4> corrections;
};

PhaseFlipCode build_code();

// Shared immutable instance; code objects never change after construction.
const PhaseFlipCode& phase_flip_code();

struct LogicalState {
  Complex alpha;
  Complex beta;
  Vector8c vector;  // alpha |0_L> + beta |1_L>
};

// Requires |alpha|^2 + |beta|^2 = 1 (within 1e-12).
LogicalState make_logical_state(Complex alpha, Complex beta);

// The six eigenstates of logical X, Y, Z. Averaging any state-quadratic
// functional over them equals the Haar average over logical states.
std::array<LogicalState, 6> logical_two_design();

enum class ChannelLabel { Ideal, Faulty, MeasureOnly, Opt };

std::string to_string(ChannelLabel label);

class KrausChannel {
 public:
  KrausChannel(ChannelLabel label, std::vector<Matrix8c> kraus_ops);

  ChannelLabel label() const { return label_; }
  const std::vector<Matrix8c>& kraus_ops() const { return kraus_; }

  DensityMatrix apply(const DensityMatrix& rho) const;

  const SuperMatrixC& superoperator() const { return super_; }

  // Every channel built by this module is real in the computational basis
  // (codewords and Z_j are real); this drops the ~1e-16 imaginary residue.
  SuperMatrix real_superoperator() const;

  // max-norm of sum_k K_k^dag K_k - I; 0 for a trace-preserving channel.
  double trace_preservation_defect() const;

  // Smallest eigenvalue of the Choi matrix, computed from the superoperator
  // by reshuffling. Nonnegative (up to eigensolver slack) iff the channel is
  // completely positive.
  double choi_min_eigenvalue() const;

 private:
  ChannelLabel label_;
  std::vector<Matrix8c> kraus_;
  SuperMatrixC super_;
};

KrausChannel build_ideal_recovery();
KrausChannel build_faulty_recovery(double p_meas);
KrausChannel build_measurement_channel();
KrausChannel build_opt_recovery(double p_fb, double p_meas);

struct DensityMatrixCheck {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool ok(double herm_tol = 1e-12, double trace_tol = 1e-12,
          double eig_floor = 1e-10) const {
    return hermiticity_defect <= herm_tol && trace_defect <= trace_tol &&
           min_eigenvalue >= -eig_floor;
  }
};

DensityMatrixCheck check_density_matrix(const DensityMatrix& rho);

}  // namespace roqec
