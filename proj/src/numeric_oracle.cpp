#include "roqec/numeric_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace roqec {

QuadratureSpec QuadratureSpec::gauss_hermite(int nodes_per_dim) {
  if (nodes_per_dim < 2) {
    throw std::invalid_argument("nodes_per_dim must be at least 2, got " +
                                std::to_string(nodes_per_dim));
  }
  const int n = nodes_per_dim;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int i = 0; i < n - 1; ++i) sub(i) = std::sqrt(0.5 * (i + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  QuadratureSpec spec;
  spec.nodes_per_dim = n;
  spec.nodes.resize(n);
  spec.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    spec.nodes[i] = solver.eigenvalues()(i);
    // First eigenvector component squared; these sum to exactly 1, which is
    // the Gaussian-expectation normalization (the sqrt(pi) cancels).
    const double v0 = solver.eigenvectors()(0, i);
    spec.weights[i] = v0 * v0;
  }
  return spec;
}

namespace {

// Compressed row storage of the real recovery superoperator.
struct SuperCsr {
  std::vector<int> row_start;
  std::vector<int> col;
  std::vector<double> val;
};

SuperCsr compress(const SuperMatrix& super) {
  SuperCsr csr;
  csr.row_start.reserve(kSuperDim + 1);
  csr.row_start.push_back(0);
  for (int r = 0; r < kSuperDim; ++r) {
    for (int c = 0; c < kSuperDim; ++c) {
      const double w = super(r, c);
      if (w == 0.0) continue;
      csr.col.push_back(c);
      csr.val.push_back(w);
    }
    csr.row_start.push_back(static_cast<int>(csr.col.size()));
  }
  return csr;
}

using State64 = std::array<Complex, kSuperDim>;

double fixed_noise_fidelity_kernel(int n, double tau, const SuperCsr& csr,
                                   const NoiseSample& omega, const Vector8c& psi) {
  std::array<Complex, kDim> v;
  for (int a = 0; a < kDim; ++a) {
    double h = 0.0;
    for (int q = 1; q <= 3; ++q) h += omega.omega[q - 1] * qubit_z_sign(q, a);
    v[a] = std::polar(1.0, -0.5 * tau * h);
  }
  State64 phase;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      phase[vec_index(a, b)] = v[a] * std::conj(v[b]);

  State64 rho, next;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      rho[vec_index(a, b)] = psi(a) * std::conj(psi(b));

  for (int r = 0; r < n; ++r) {
    for (int e = 0; e < kSuperDim; ++e) rho[e] *= phase[e];
    for (int row = 0; row < kSuperDim; ++row) {
      Complex acc(0.0, 0.0);
      for (int t = csr.row_start[row]; t < csr.row_start[row + 1]; ++t) {
        acc += csr.val[t] * rho[csr.col[t]];
      }
      next[row] = acc;
    }
    std::swap(rho, next);
  }

  Complex fidelity(0.0, 0.0);
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      fidelity += std::conj(psi(a)) * rho[vec_index(a, b)] * psi(b);
  return fidelity.real();
}

double six_state_kernel(int n, double tau, const SuperCsr& csr,
                        const std::array<LogicalState, 6>& design,
                        const NoiseSample& omega) {
  double total = 0.0;
  for (const LogicalState& state : design) {
    total += fixed_noise_fidelity_kernel(n, tau, csr, omega, state.vector);
  }
  return total / 6.0;
}

// One orbit of the sign-flip and coordinate-permutation symmetry group of the
// tensor grid; the six-state averaged integrand is invariant under both, so
// summing orbit representatives with multiplicities equals the full sum.
struct NodeOrbit {
  std::array<double, 3> y;
  double weight;
};

std::vector<NodeOrbit> symmetry_reduced_orbits(const QuadratureSpec& spec) {
  struct HalfNode {
    double y;
    double w;
    double fold;  // 2 for +/- pairs, 1 for a central zero node
  };
  std::vector<HalfNode> half;
  for (int i = 0; i < spec.nodes_per_dim; ++i) {
    const double y = spec.nodes[i];
    if (y > 1e-12) {
      half.push_back({y, spec.weights[i], 2.0});
    } else if (std::abs(y) <= 1e-12) {
      half.push_back({0.0, spec.weights[i], 1.0});
    }
  }
  std::vector<NodeOrbit> orbits;
  const int m = static_cast<int>(half.size());
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int l = j; l < m; ++l) {
        double perm = 6.0;
        if (i == j && j == l) {
          perm = 1.0;
        } else if (i == j || j == l) {
          perm = 3.0;
        }
        const double weight = half[i].w * half[j].w * half[l].w *
                              half[i].fold * half[j].fold * half[l].fold * perm;
        orbits.push_back({{half[i].y, half[j].y, half[l].y}, weight});
      }
  return orbits;
}

double quadrature_value(const ExperimentParams& params, const SuperCsr& csr,
                        const std::array<LogicalState, 6>& design, int nodes) {
  const QuadratureSpec spec = QuadratureSpec::gauss_hermite(nodes);
  const double tau = params.x / params.n;
  // omega = sqrt(2) * sigma * y with sigma^2 = 2/T2*^2, i.e. omega = 2y/T2*.
  const double scale = 2.0;
  double sum = 0.0;
  for (const NodeOrbit& orbit : symmetry_reduced_orbits(spec)) {
    NoiseSample omega;
    for (int j = 0; j < 3; ++j) omega.omega[j] = scale * orbit.y[j];
    sum += orbit.weight * six_state_kernel(params.n, tau, csr, design, omega);
  }
  return sum;
}

}  // namespace

double fidelity_fixed_noise(const ExperimentParams& params,
                            const NoiseSample& omega, const LogicalState& psi) {
  validate_params(params);
  const KrausChannel channel = build_opt_recovery(params.p_fb, params.p_meas);
  const SuperCsr csr = compress(channel.real_superoperator());
  return fixed_noise_fidelity_kernel(params.n, params.x / params.n, csr, omega,
                                     psi.vector);
}

double quadrature_fidelity_at(const ExperimentParams& params, int nodes_per_dim) {
  validate_params(params);
  const KrausChannel channel = build_opt_recovery(params.p_fb, params.p_meas);
  const SuperCsr csr = compress(channel.real_superoperator());
  return quadrature_value(params, csr, logical_two_design(), nodes_per_dim);
}

QuadratureResult quadrature_fidelity(const ExperimentParams& params,
                                     const QuadratureSpec& quad) {
  validate_params(params);
  if (quad.nodes_per_dim < 2) {
    throw std::invalid_argument("nodes_per_dim must be at least 2");
  }
  const KrausChannel channel = build_opt_recovery(params.p_fb, params.p_meas);
  const SuperCsr csr = compress(channel.real_superoperator());
  const std::array<LogicalState, 6> design = logical_two_design();

  // Start low enough that at least one doubling fits under the cap.
  int nodes = std::clamp(quad.nodes_per_dim, 2, kQuadratureNodeCap / 2);
  QuadratureResult result;
  result.value = quadrature_value(params, csr, design, nodes);
  result.nodes_used = nodes;
  while (nodes < kQuadratureNodeCap) {
    const int doubled = std::min(2 * nodes, kQuadratureNodeCap);
    const double refined = quadrature_value(params, csr, design, doubled);
    result.achieved_tol = std::abs(refined - result.value);
    result.value = refined;
    result.nodes_used = doubled;
    nodes = doubled;
    if (result.achieved_tol < kQuadratureTol) {
      result.converged = true;
      break;
    }
  }
  result.value = std::clamp(result.value, 0.0, 1.0);
  return result;
}

MonteCarloResult monte_carlo_fidelity(const ExperimentParams& params,
                                      const MonteCarloSpec& mc) {
  validate_params(params);
  if (mc.samples < 1) {
    throw std::invalid_argument("samples must be at least 1");
  }
  const KrausChannel channel = build_opt_recovery(params.p_fb, params.p_meas);
  const SuperCsr csr = compress(channel.real_superoperator());
  const std::array<LogicalState, 6> design = logical_two_design();
  const double tau = params.x / params.n;
  const double sigma = std::sqrt(NoiseParams(1.0).sigma_sq());

  double mean = 0.0;
  double m2 = 0.0;
  for (long i = 0; i < mc.samples; ++i) {
    GaussianSampler sampler(derive_stream_seed(mc.seed, std::uint64_t(i)));
    NoiseSample omega;
    for (int j = 0; j < 3; ++j) omega.omega[j] = sigma * sampler.next();
    const double value = six_state_kernel(params.n, tau, csr, design, omega);
    const double delta = value - mean;
    mean += delta / double(i + 1);
    m2 += delta * (value - mean);
  }
  MonteCarloResult result;
  result.mean = mean;
  if (mc.samples > 1) {
    const double variance = m2 / double(mc.samples - 1);
    result.std_error = std::sqrt(variance / double(mc.samples));
  }
  return result;
}

double single_qubit_fidelity(double x) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("x must be nonnegative, got " + std::to_string(x));
  }
  return (2.0 + std::exp(-x * x)) / 3.0;
}

}  // namespace roqec
