#pragma once

// Maximizes the average fidelity over p_fb in [0, 1] for each round count n,
// selects the best n, and sweeps (x, p_meas) grids to build the optimal-
// strategy phase maps. The fidelity is a degree-n polynomial in p_fb, so the
// maximization is exact: evaluate at the real critical points of the
// derivative inside [0, 1] plus both endpoints.

#include <string>
#include <vector>

#include "roqec/numeric_oracle.hpp"

namespace roqec {

struct PfbOptimum {
  int n = 0;
  double p_fb_star = 0.0;
  double f_star = 0.0;
};

struct OptimizationResult {
  double x = 0.0;
  double p_meas = 0.0;
  std::vector<PfbOptimum> per_n;  // n = 1..n_max
  PfbOptimum best;                // ties broken toward larger n
  double baseline = 0.0;          // single-qubit fidelity at the same x
  bool ok = true;
  std::string error;
};

struct GridSpec {
  double x_min = 0.1;
  double x_max = 3.0;
  int x_steps = 59;
  double pmeas_min = 0.0;
  double pmeas_max = 0.5;
  int pmeas_steps = 51;
  int n_max = 10;

  void validate() const;  // throws std::invalid_argument naming the field
  std::vector<double> x_values() const;
  std::vector<double> pmeas_values() const;
};

// d/dt of a coefficient-ascending polynomial.
std::vector<double> polynomial_derivative(const std::vector<double>& coeffs);

double polynomial_value(const std::vector<double>& coeffs, double t);

// Real roots of the polynomial inside [0, 1] (endpoints included), via the
// companion matrix plus Newton polish to ~1e-10.
std::vector<double> polynomial_real_roots_unit_interval(
    const std::vector<double>& coeffs);

struct PolynomialMaximum {
  double argmax = 0.0;
  double value = 0.0;
};

// Ties go to the larger argument.
PolynomialMaximum maximize_polynomial_unit_interval(
    const std::vector<double>& coeffs);

PfbOptimum optimize_pfb(int n, double p_meas, double x);

// Precomputes the per-n p_fb coefficient tables for one p_meas; optimizing a
// cell at any x is then a polynomial evaluation. Used by sweep_grid to share
// work along grid columns.
class CellOptimizer {
 public:
  CellOptimizer(double p_meas, int n_max);
  OptimizationResult optimize(double x) const;

 private:
  double p_meas_;
  int n_max_;
  std::vector<std::vector<DampingPolynomial>> tables_;  // [n-1] -> coefficients
};

OptimizationResult optimize_cell(double p_meas, double x, int n_max);

// One OptimizationResult per cell, row-major over (x, p_meas). A failing
// cell is marked ok = false and does not abort the sweep. threads <= 0 uses
// the hardware count.
std::vector<OptimizationResult> sweep_grid(const GridSpec& grid, int threads = 0);

}  // namespace roqec
