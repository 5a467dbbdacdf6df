#include "roqec/validate.hpp"

#include <cmath>
#include <sstream>

#include "roqec/io.hpp"

namespace roqec {

double closed_form_f1(double p_fb, double p_meas, double x) {
  const double e1 = std::exp(-x * x);
  const double e2 = std::exp(-2.0 * x * x);
  const double e3 = std::exp(-3.0 * x * x);
  return (1.0 + p_fb * (3.0 - 4.0 * p_meas)) / 6.0 +
         e2 * (1.0 - p_fb) / 2.0 +
         e1 * (1.0 + p_fb * (1.0 - 2.0 * p_meas)) / 4.0 +
         e3 * (1.0 + p_fb * (2.0 * p_meas - 3.0)) / 12.0;
}

namespace {

struct UniformStream {
  std::uint64_t state;
  double next() {
    return double(splitmix64(state)) / 18446744073709551616.0;  // [0, 1)
  }
};

std::string sig(double v) { return format_sig(v); }

CheckResult check_cptp(const ValidationOptions&) {
  const double probs[] = {0.0, 0.22, 0.5, 1.0};
  double worst_defect = 0.0;
  double worst_eig = 0.0;
  auto inspect = [&](const KrausChannel& ch) {
    worst_defect = std::max(worst_defect, ch.trace_preservation_defect());
    worst_eig = std::min(worst_eig, ch.choi_min_eigenvalue());
  };
  inspect(build_ideal_recovery());
  inspect(build_measurement_channel());
  for (double pm : probs) {
    inspect(build_faulty_recovery(pm));
    for (double pf : probs) inspect(build_opt_recovery(pf, pm));
  }
  CheckResult r;
  r.name = "cptp-channels";
  r.passed = worst_defect <= 1e-12 && worst_eig >= -1e-10;
  r.detail = "max trace defect " + sig(worst_defect) + ", min Choi eigenvalue " +
             sig(worst_eig);
  return r;
}

CheckResult check_closed_form_exact(const ValidationOptions& options) {
  UniformStream rng{options.seed};
  double worst = 0.0;
  for (int i = 0; i < options.closed_form_samples; ++i) {
    const double p_fb = rng.next();
    const double p_meas = rng.next();
    const double x = 3.0 * rng.next();
    double engine;
    if (options.flip_damping_sign) {
      const double tau = x;
      engine = reference_average_fidelity_with(
          {1, p_fb, p_meas, x}, [&](const PhaseVector& k) {
            double value = 1.0;
            for (int j = 0; j < 3; ++j) {
              const double arg = k.k[j] * tau;
              value *= std::exp(+arg * arg);
            }
            return value;
          });
    } else {
      engine = average_fidelity({1, p_fb, p_meas, x});
    }
    worst = std::max(worst, std::abs(engine - closed_form_f1(p_fb, p_meas, x)));
  }
  CheckResult r;
  r.name = "closed-form-f1-exact";
  r.passed = worst <= 1e-9;
  r.detail = "max |engine - closed form| = " + sig(worst) + " over " +
             std::to_string(options.closed_form_samples) + " triples";
  return r;
}

CheckResult check_closed_form_quadrature(const ValidationOptions& options) {
  UniformStream rng{options.seed + 1};
  QuadratureSpec quad = QuadratureSpec::gauss_hermite(options.quadrature_start_nodes);
  double worst = 0.0;
  const int samples = std::max(5, options.closed_form_samples / 3);
  for (int i = 0; i < samples; ++i) {
    const double p_fb = rng.next();
    const double p_meas = rng.next();
    const double x = 3.0 * rng.next();
    const QuadratureResult qr = quadrature_fidelity({1, p_fb, p_meas, x}, quad);
    worst = std::max(worst, std::abs(qr.value - closed_form_f1(p_fb, p_meas, x)));
  }
  CheckResult r;
  r.name = "closed-form-f1-quadrature";
  r.passed = worst <= 1e-7;
  r.detail = "max |quadrature - closed form| = " + sig(worst) + " over " +
             std::to_string(samples) + " triples";
  return r;
}

CheckResult check_engine_cross(const ValidationOptions& options) {
  UniformStream rng{options.seed + 2};
  QuadratureSpec quad = QuadratureSpec::gauss_hermite(options.quadrature_start_nodes);
  double worst = 0.0;
  for (int i = 0; i < options.cross_check_samples; ++i) {
    ExperimentParams params;
    params.n = 1 + int(rng.next() * 4.0);
    params.p_fb = rng.next();
    params.p_meas = rng.next();
    params.x = 2.5 * rng.next();
    const double exact = average_fidelity(params);
    const QuadratureResult qr = quadrature_fidelity(params, quad);
    worst = std::max(worst, std::abs(exact - qr.value));
  }
  CheckResult r;
  r.name = "engine-cross-check";
  r.passed = worst <= 1e-6;
  r.detail = "max |exact - quadrature| = " + sig(worst) + " over " +
             std::to_string(options.cross_check_samples) + " parameter sets";
  return r;
}

CheckResult check_dt_zero_law(const ValidationOptions&) {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double p_fb = i / 4.0;
      const double p_meas = j / 4.0;
      const double expected = 1.0 - p_fb * p_meas;
      worst = std::max(worst,
                       std::abs(average_fidelity({1, p_fb, p_meas, 0.0}) - expected));
      // Brute-force oracle: direct 8x8 simulation at omega = 0 and dt = 0.
      const double direct = fidelity_fixed_noise(
          {1, p_fb, p_meas, 0.0}, NoiseSample{}, make_logical_state(1.0, 0.0));
      worst = std::max(worst, std::abs(direct - 1.0 + p_fb * p_meas));
    }
  }
  CheckResult r;
  r.name = "dt-zero-law";
  r.passed = worst <= 1e-12;
  r.detail = "max |F1(x=0) - (1 - pfb*pmeas)| = " + sig(worst);
  return r;
}

CheckResult check_zeno_trend(const ValidationOptions& options) {
  QuadratureSpec quad = QuadratureSpec::gauss_hermite(options.quadrature_start_nodes);
  const int rounds[] = {1, 2, 5, 10, 20};
  double previous = -1.0;
  bool increasing = true;
  std::ostringstream detail;
  detail << "F(n) at pfb=0, x=1:";
  for (int n : rounds) {
    const QuadratureResult qr = quadrature_fidelity({n, 0.0, 0.3, 1.0}, quad);
    detail << ' ' << sig(qr.value);
    if (qr.value <= previous) increasing = false;
    previous = qr.value;
  }
  CheckResult r;
  r.name = "zeno-trend";
  r.passed = increasing;
  r.detail = detail.str();
  return r;
}

CheckResult check_fig1_optimum(const ValidationOptions& options) {
  const OptimizationResult cell = optimize_cell(0.22, 2.0, 10);
  QuadratureSpec quad = QuadratureSpec::gauss_hermite(options.quadrature_start_nodes);
  const ExperimentParams best{cell.best.n, cell.best.p_fb_star, 0.22, 2.0};
  const double exact = average_fidelity(best);
  const QuadratureResult qr = quadrature_fidelity(best, quad);
  CheckResult r;
  r.name = "hybrid-optimum-cell";
  r.passed = cell.best.n == 10 && std::abs(cell.best.p_fb_star - 0.488) <= 0.01 &&
             std::abs(cell.best.f_star - 0.674) <= 0.002 &&
             std::abs(exact - qr.value) <= 1e-6;
  r.detail = "best n = " + std::to_string(cell.best.n) + ", pfb* = " +
             sig(cell.best.p_fb_star) + ", exact F = " + sig(exact) +
             ", quadrature F = " + sig(qr.value);
  return r;
}

CheckResult check_baseline(const ValidationOptions&) {
  const double value = single_qubit_fidelity(2.0);
  const double expected = (2.0 + std::exp(-4.0)) / 3.0;
  CheckResult r;
  r.name = "single-qubit-baseline";
  r.passed = std::abs(value - expected) <= 1e-15 && value < 0.674;
  r.detail = "baseline(x=2) = " + sig(value) + ", below the optimized 0.674";
  return r;
}

CheckResult check_monte_carlo(const ValidationOptions& options) {
  const ExperimentParams params{3, 0.5, 0.2, 1.2};
  QuadratureSpec quad = QuadratureSpec::gauss_hermite(options.quadrature_start_nodes);
  const QuadratureResult qr = quadrature_fidelity(params, quad);
  const MonteCarloResult mc =
      monte_carlo_fidelity(params, {options.mc_samples, options.seed + 3});
  const double distance = std::abs(mc.mean - qr.value);
  CheckResult r;
  r.name = "monte-carlo-consistency";
  r.passed = distance <= 4.0 * mc.std_error;
  r.detail = "|mc - quadrature| = " + sig(distance) + " vs 4*SE = " +
             sig(4.0 * mc.std_error);
  return r;
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(check_cptp(options));
  results.push_back(check_closed_form_exact(options));
  results.push_back(check_closed_form_quadrature(options));
  results.push_back(check_engine_cross(options));
  results.push_back(check_dt_zero_law(options));
  results.push_back(check_zeno_trend(options));
  results.push_back(check_fig1_optimum(options));
  results.push_back(check_baseline(options));
  results.push_back(check_monte_carlo(options));
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace roqec
