#include "roqec/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

namespace roqec {

void GridSpec::validate() const {
  if (x_steps < 2) throw std::invalid_argument("x_steps must be at least 2");
  if (pmeas_steps < 2) throw std::invalid_argument("pmeas_steps must be at least 2");
  if (!(x_min >= 0.0) || !(x_max >= x_min)) {
    throw std::invalid_argument("x range must satisfy 0 <= x_min <= x_max");
  }
  if (!(pmeas_min >= 0.0) || !(pmeas_max <= 1.0) || !(pmeas_max >= pmeas_min)) {
    throw std::invalid_argument("pmeas range must lie inside [0, 1]");
  }
  if (n_max < 1 || n_max > kMaxSymbolicRounds) {
    throw std::invalid_argument("n_max must lie in [1, " +
                                std::to_string(kMaxSymbolicRounds) + "]");
  }
}

namespace {

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> values(steps);
  const double step = (hi - lo) / double(steps - 1);
  for (int i = 0; i < steps; ++i) values[i] = lo + step * i;
  return values;
}

}  // namespace

std::vector<double> GridSpec::x_values() const { return linspace(x_min, x_max, x_steps); }

std::vector<double> GridSpec::pmeas_values() const {
  return linspace(pmeas_min, pmeas_max, pmeas_steps);
}

std::vector<double> polynomial_derivative(const std::vector<double>& coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<double> deriv(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    deriv[i - 1] = double(i) * coeffs[i];
  }
  return deriv;
}

double polynomial_value(const std::vector<double>& coeffs, double t) {
  double value = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) value = value * t + *it;
  return value;
}

std::vector<double> polynomial_real_roots_unit_interval(
    const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  double max_abs = 0.0;
  for (double v : c) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return {};
  while (c.size() > 1 && std::abs(c.back()) <= 1e-13 * max_abs) c.pop_back();
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree < 1) return {};

  std::vector<double> raw;
  if (degree == 1) {
    raw.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    for (int i = 0; i < degree; ++i) {
      const std::complex<double> root = solver.eigenvalues()(i);
      if (std::abs(root.imag()) > 1e-7) continue;
      raw.push_back(root.real());
    }
  }

  const std::vector<double> deriv = polynomial_derivative(c);
  std::vector<double> roots;
  for (double t : raw) {
    // Newton polish; companion eigenvalues are accurate but not 1e-10 tight.
    for (int iter = 0; iter < 16; ++iter) {
      const double f = polynomial_value(c, t);
      const double df = polynomial_value(deriv, t);
      if (df == 0.0) break;
      const double step = f / df;
      t -= step;
      if (std::abs(step) < 1e-12) break;
    }
    if (t >= -1e-9 && t <= 1.0 + 1e-9) {
      roots.push_back(std::clamp(t, 0.0, 1.0));
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              roots.end());
  return roots;
}

PolynomialMaximum maximize_polynomial_unit_interval(
    const std::vector<double>& coeffs) {
  std::vector<double> candidates{0.0, 1.0};
  for (double r : polynomial_real_roots_unit_interval(polynomial_derivative(coeffs))) {
    candidates.push_back(r);
  }
  std::sort(candidates.begin(), candidates.end());

  PolynomialMaximum best;
  bool first = true;
  for (double t : candidates) {
    const double value = polynomial_value(coeffs, t);
    // >= so exact ties resolve to the larger argument.
    if (first || value >= best.value) {
      best.argmax = t;
      best.value = value;
      first = false;
    }
  }
  return best;
}

namespace {

PfbOptimum optimum_from_coefficients(int n, const std::vector<double>& coeffs) {
  const PolynomialMaximum max = maximize_polynomial_unit_interval(coeffs);
  PfbOptimum opt;
  opt.n = n;
  opt.p_fb_star = max.argmax;
  opt.f_star = std::clamp(max.value, 0.0, 1.0);
  return opt;
}

}  // namespace

PfbOptimum optimize_pfb(int n, double p_meas, double x) {
  return optimum_from_coefficients(n, fidelity_vs_pfb_polynomial(n, p_meas, x));
}

CellOptimizer::CellOptimizer(double p_meas, int n_max)
    : p_meas_(p_meas), n_max_(n_max) {
  if (n_max < 1 || n_max > kMaxSymbolicRounds) {
    throw std::invalid_argument("n_max must lie in [1, " +
                                std::to_string(kMaxSymbolicRounds) + "]");
  }
  tables_.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    tables_.push_back(fidelity_pfb_coefficient_table(n, p_meas));
  }
}

OptimizationResult CellOptimizer::optimize(double x) const {
  OptimizationResult result;
  result.x = x;
  result.p_meas = p_meas_;
  result.baseline = single_qubit_fidelity(x);
  result.per_n.reserve(n_max_);
  for (int n = 1; n <= n_max_; ++n) {
    std::vector<double> coeffs(n + 1);
    for (int j = 0; j <= n; ++j) coeffs[j] = tables_[n - 1][j].value_at(x, n);
    result.per_n.push_back(optimum_from_coefficients(n, coeffs));
  }
  result.best = result.per_n.front();
  for (const PfbOptimum& opt : result.per_n) {
    // >= so ties resolve to the larger n.
    if (opt.f_star >= result.best.f_star) result.best = opt;
  }
  return result;
}

OptimizationResult optimize_cell(double p_meas, double x, int n_max) {
  ExperimentParams probe{1, 0.0, p_meas, x};
  validate_params(probe);
  return CellOptimizer(p_meas, n_max).optimize(x);
}

std::vector<OptimizationResult> sweep_grid(const GridSpec& grid, int threads) {
  grid.validate();
  const std::vector<double> xs = grid.x_values();
  const std::vector<double> ps = grid.pmeas_values();
  std::vector<OptimizationResult> results(xs.size() * ps.size());

  int worker_count = threads > 0 ? threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::clamp(worker_count, 1, static_cast<int>(ps.size()));

  // Columns (fixed p_meas) share the per-n coefficient tables, so each worker
  // claims whole columns; results land at fixed indices, making the sweep
  // output independent of scheduling.
  std::atomic<int> next_column{0};
  auto run_columns = [&]() {
    for (;;) {
      const int ip = next_column.fetch_add(1);
      if (ip >= static_cast<int>(ps.size())) return;
      try {
        const CellOptimizer optimizer(ps[ip], grid.n_max);
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
          OptimizationResult& slot = results[ix * ps.size() + ip];
          try {
            slot = optimizer.optimize(xs[ix]);
          } catch (const std::exception& e) {
            slot.x = xs[ix];
            slot.p_meas = ps[ip];
            slot.ok = false;
            slot.error = e.what();
          }
        }
      } catch (const std::exception& e) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
          OptimizationResult& slot = results[ix * ps.size() + ip];
          slot.x = xs[ix];
          slot.p_meas = ps[ip];
          slot.ok = false;
          slot.error = e.what();
        }
      }
    }
  };

  if (worker_count == 1) {
    run_columns();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int t = 0; t < worker_count; ++t) pool.emplace_back(run_columns);
    for (std::thread& t : pool) t.join();
  }
  return results;
}

}  // namespace roqec
