// Command-line interface: fidelity evaluation, per-cell optimization, grid
// sweeps (phase maps), the single-qubit baseline curve, and the validation
// suite. Emits CSV/JSON with the resolved configuration echoed as '#'
// comments. Exit codes: 0 success, 1 validation failure, 2 bad arguments,
// 3 partial sweep failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roqec/io.hpp"
#include "roqec/validate.hpp"

namespace {

using nlohmann::json;
using namespace roqec;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitBadArguments = 2;
constexpr int kExitPartialSweep = 3;

struct BadArguments : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag value if given, else config-file value, else the default.
template <typename T>
T resolve(const std::optional<T>& flag, const json& config, const std::string& key,
          T fallback) {
  if (flag.has_value()) return *flag;
  if (config.contains(key)) {
    try {
      return config.at(key).get<T>();
    } catch (const json::exception&) {
      throw BadArguments("config key '" + key + "' has the wrong type");
    }
  }
  return fallback;
}

json load_config(const std::optional<std::string>& path,
                 const std::vector<std::string>& known_keys) {
  if (!path.has_value()) return json::object();
  std::ifstream in(*path);
  if (!in) throw BadArguments("cannot open config file '" + *path + "'");
  json config;
  try {
    in >> config;
  } catch (const json::exception& e) {
    throw BadArguments("config file '" + *path + "' is not valid JSON: " + e.what());
  }
  if (!config.is_object()) throw BadArguments("config file must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    (void)value;
    if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end()) {
      throw BadArguments("unknown config key '" + key + "'");
    }
  }
  return config;
}

void require_range(double value, double lo, double hi, const std::string& name) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream msg;
    msg << name << " must lie in [" << lo << ", " << hi << "], got " << value;
    throw BadArguments(msg.str());
  }
}

void require_at_least(double value, double lo, const std::string& name) {
  if (!(value >= lo)) {
    std::ostringstream msg;
    msg << name << " must be at least " << lo << ", got " << value;
    throw BadArguments(msg.str());
  }
}

int resolve_threads(const std::optional<int>& flag, const json& config) {
  if (flag.has_value()) return *flag;
  if (config.contains("threads")) return config.at("threads").get<int>();
  if (const char* env = std::getenv("ROQEC_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw BadArguments("ROQEC_THREADS must be an integer");
    }
  }
  return static_cast<int>(std::thread::hardware_concurrency());
}

// Writes to the path when given, else to stdout.
void emit(const std::optional<std::string>& path, const std::string& payload) {
  if (path.has_value()) {
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw BadArguments("cannot open output file '" + *path + "'");
    out << payload;
  } else {
    std::cout << payload;
  }
}

struct FidelityArgs {
  std::optional<int> n;
  std::optional<double> pfb, pmeas, dt;
  std::optional<std::string> engine, format, output, config_path;
  std::optional<int> nodes, threads;
  std::optional<long> samples;
  std::optional<std::uint64_t> seed;
};

int run_fidelity(const FidelityArgs& args) {
  const json config = load_config(
      args.config_path,
      {"n", "pfb", "pmeas", "dt", "engine", "format", "output", "nodes",
       "samples", "seed", "threads"});
  if (!args.n.has_value() && !config.contains("n"))
    throw BadArguments("missing required option --n");
  if (!args.pfb.has_value() && !config.contains("pfb"))
    throw BadArguments("missing required option --pfb");
  if (!args.pmeas.has_value() && !config.contains("pmeas"))
    throw BadArguments("missing required option --pmeas");
  if (!args.dt.has_value() && !config.contains("dt"))
    throw BadArguments("missing required option --dt");

  const int n = resolve(args.n, config, "n", 1);
  const double pfb = resolve(args.pfb, config, "pfb", 1.0);
  const double pmeas = resolve(args.pmeas, config, "pmeas", 0.0);
  const double dt = resolve(args.dt, config, "dt", 0.0);
  const int nodes = resolve(args.nodes, config, "nodes", 48);
  const long samples = resolve(args.samples, config, "samples", 100000L);
  const std::uint64_t seed = resolve(args.seed, config, "seed", std::uint64_t{0});
  const std::string format = resolve(args.format, config, "format", std::string("csv"));
  std::string engine = resolve(args.engine, config, "engine", std::string("auto"));
  const std::optional<std::string> output =
      args.output.has_value()
          ? args.output
          : (config.contains("output")
                 ? std::optional<std::string>(config.at("output").get<std::string>())
                 : std::nullopt);

  if (n < 1) throw BadArguments("n must be at least 1, got " + std::to_string(n));
  require_range(pfb, 0.0, 1.0, "pfb");
  require_range(pmeas, 0.0, 1.0, "pmeas");
  require_at_least(dt, 0.0, "dt");
  if (format != "csv" && format != "json")
    throw BadArguments("format must be csv or json");
  if (engine == "auto") engine = n <= kMaxSymbolicRounds ? "exact" : "quadrature";
  if (engine != "exact" && engine != "quadrature" && engine != "montecarlo")
    throw BadArguments("engine must be exact, quadrature, or montecarlo");
  if (engine == "exact" && n > kMaxSymbolicRounds)
    throw BadArguments("engine 'exact' supports n <= " +
                       std::to_string(kMaxSymbolicRounds) +
                       "; use --engine quadrature");

  const ExperimentParams params{n, pfb, pmeas, dt};
  ResultRecord record;
  record.x = dt;
  record.p_meas = pmeas;
  record.n = n;
  record.p_fb = pfb;
  record.engine = engine;
  record.baseline = single_qubit_fidelity(dt);
  if (engine == "exact") {
    record.fidelity = average_fidelity(params);
  } else if (engine == "quadrature") {
    const QuadratureResult qr =
        quadrature_fidelity(params, QuadratureSpec::gauss_hermite(nodes));
    record.fidelity = qr.value;
    record.tolerance_flag =
        qr.converged ? "ok" : "unconverged:" + format_sig(qr.achieved_tol);
  } else {
    const MonteCarloResult mc = monte_carlo_fidelity(params, {samples, seed});
    record.fidelity = mc.mean;
    record.tolerance_flag = "stderr:" + format_sig(mc.std_error);
  }

  ConfigLines lines{{"command", "fidelity"},   {"n", std::to_string(n)},
                    {"pfb", format_sig(pfb)},  {"pmeas", format_sig(pmeas)},
                    {"dt", format_sig(dt)},    {"engine", engine},
                    {"nodes", std::to_string(nodes)},
                    {"samples", std::to_string(samples)},
                    {"seed", std::to_string(seed)},
                    {"format", format}};
  std::ostringstream payload;
  if (format == "csv") {
    write_result_csv(payload, lines, {record});
  } else {
    payload << to_json(record).dump(2) << "\n";
  }
  emit(output, payload.str());
  return kExitOk;
}

struct OptimizeArgs {
  std::optional<double> dt, pmeas;
  std::optional<int> nmax;
  std::optional<std::string> output, config_path;
};

int run_optimize(const OptimizeArgs& args) {
  const json config =
      load_config(args.config_path, {"dt", "pmeas", "nmax", "output"});
  if (!args.dt.has_value() && !config.contains("dt"))
    throw BadArguments("missing required option --dt");
  if (!args.pmeas.has_value() && !config.contains("pmeas"))
    throw BadArguments("missing required option --pmeas");
  const double dt = resolve(args.dt, config, "dt", 0.0);
  const double pmeas = resolve(args.pmeas, config, "pmeas", 0.0);
  const int nmax = resolve(args.nmax, config, "nmax", 10);
  const std::optional<std::string> output =
      args.output.has_value()
          ? args.output
          : (config.contains("output")
                 ? std::optional<std::string>(config.at("output").get<std::string>())
                 : std::nullopt);

  require_at_least(dt, 0.0, "dt");
  require_range(pmeas, 0.0, 1.0, "pmeas");
  if (nmax < 1 || nmax > kMaxSymbolicRounds)
    throw BadArguments("nmax must lie in [1, " +
                       std::to_string(kMaxSymbolicRounds) + "]");

  const OptimizationResult result = optimize_cell(pmeas, dt, nmax);
  json j = to_json(result);
  j["config"] = {{"dt", dt}, {"pmeas", pmeas}, {"nmax", nmax}};
  emit(output, j.dump(2) + "\n");
  return kExitOk;
}

struct MapArgs {
  std::optional<double> xmin, xmax, pmeas_min, pmeas_max;
  std::optional<int> xsteps, pmeas_steps, nmax, threads;
  std::optional<std::string> output, per_n_output, config_path;
};

int run_map(const MapArgs& args) {
  const json config = load_config(
      args.config_path, {"xmin", "xmax", "xsteps", "pmeas-min", "pmeas-max",
                         "pmeas-steps", "nmax", "threads", "output", "per-n"});
  GridSpec grid;
  grid.x_min = resolve(args.xmin, config, "xmin", grid.x_min);
  grid.x_max = resolve(args.xmax, config, "xmax", grid.x_max);
  grid.x_steps = resolve(args.xsteps, config, "xsteps", grid.x_steps);
  grid.pmeas_min = resolve(args.pmeas_min, config, "pmeas-min", grid.pmeas_min);
  grid.pmeas_max = resolve(args.pmeas_max, config, "pmeas-max", grid.pmeas_max);
  grid.pmeas_steps = resolve(args.pmeas_steps, config, "pmeas-steps", grid.pmeas_steps);
  grid.n_max = resolve(args.nmax, config, "nmax", grid.n_max);
  const int threads = resolve_threads(args.threads, config);
  const std::optional<std::string> output =
      args.output.has_value()
          ? args.output
          : (config.contains("output")
                 ? std::optional<std::string>(config.at("output").get<std::string>())
                 : std::nullopt);
  const std::optional<std::string> per_n_output =
      args.per_n_output.has_value()
          ? args.per_n_output
          : (config.contains("per-n")
                 ? std::optional<std::string>(config.at("per-n").get<std::string>())
                 : std::nullopt);

  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw BadArguments(e.what());
  }

  const std::vector<OptimizationResult> results = sweep_grid(grid, threads);

  ConfigLines lines{{"command", "map"},
                    {"xmin", format_sig(grid.x_min)},
                    {"xmax", format_sig(grid.x_max)},
                    {"xsteps", std::to_string(grid.x_steps)},
                    {"pmeas-min", format_sig(grid.pmeas_min)},
                    {"pmeas-max", format_sig(grid.pmeas_max)},
                    {"pmeas-steps", std::to_string(grid.pmeas_steps)},
                    {"nmax", std::to_string(grid.n_max)},
                    {"threads", std::to_string(threads)}};
  std::ostringstream payload;
  write_map_csv(payload, lines, results);
  emit(output, payload.str());

  if (per_n_output.has_value()) {
    std::ostringstream per_n_payload;
    write_per_n_csv(per_n_payload, lines, results);
    emit(per_n_output, per_n_payload.str());
  }

  return sweep_success_fraction(results) >= 0.99 ? kExitOk : kExitPartialSweep;
}

struct BaselineArgs {
  std::optional<double> xmin, xmax;
  std::optional<int> steps;
  std::optional<std::string> output, config_path;
};

int run_baseline(const BaselineArgs& args) {
  const json config =
      load_config(args.config_path, {"xmin", "xmax", "steps", "output"});
  const double xmin = resolve(args.xmin, config, "xmin", 0.0);
  const double xmax = resolve(args.xmax, config, "xmax", 3.0);
  const int steps = resolve(args.steps, config, "steps", 61);
  const std::optional<std::string> output =
      args.output.has_value()
          ? args.output
          : (config.contains("output")
                 ? std::optional<std::string>(config.at("output").get<std::string>())
                 : std::nullopt);
  require_at_least(xmin, 0.0, "xmin");
  if (!(xmax >= xmin)) throw BadArguments("xmax must be at least xmin");
  if (steps < 2) throw BadArguments("steps must be at least 2");

  std::ostringstream payload;
  write_config_comments(payload, {{"command", "baseline"},
                                  {"xmin", format_sig(xmin)},
                                  {"xmax", format_sig(xmax)},
                                  {"steps", std::to_string(steps)}});
  payload << "x,fidelity\n";
  for (int i = 0; i < steps; ++i) {
    const double x = xmin + (xmax - xmin) * double(i) / double(steps - 1);
    payload << format_sig(x) << ',' << format_sig(single_qubit_fidelity(x)) << "\n";
  }
  emit(output, payload.str());
  return kExitOk;
}

struct ValidateArgs {
  std::optional<std::uint64_t> seed;
  bool inject_damping_sign_flip = false;
};

int run_validate(const ValidateArgs& args) {
  ValidationOptions options;
  if (args.seed.has_value()) options.seed = *args.seed;
  options.flip_damping_sign = args.inject_damping_sign_flip;
  const std::vector<CheckResult> results = run_validation(options);
  for (const CheckResult& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << ' ' << r.name << ": " << r.detail
              << "\n";
  }
  if (!all_passed(results)) {
    std::cout << "validation failed\n";
    return kExitValidationFailure;
  }
  std::cout << "all checks passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "roqec: fidelity simulator and recovery optimizer for the three-qubit "
      "phase-flip code under quasi-static Gaussian dephasing"};
  app.require_subcommand(1);

  FidelityArgs fidelity_args;
  CLI::App* fidelity = app.add_subcommand(
      "fidelity", "average fidelity for one (n, pfb, pmeas, dt) point");
  fidelity->add_option("--n", fidelity_args.n, "recovery rounds over [0, dt]");
  fidelity->add_option("--pfb", fidelity_args.pfb, "feedback probability in [0, 1]");
  fidelity->add_option("--pmeas", fidelity_args.pmeas,
                       "syndrome-error probability in [0, 1]");
  fidelity->add_option("--dt", fidelity_args.dt,
                       "total storage time as the dimensionless ratio dt/T2*");
  fidelity->add_option("--engine", fidelity_args.engine,
                       "exact | quadrature | montecarlo (default: exact for "
                       "n <= 12, else quadrature)");
  fidelity->add_option("--nodes", fidelity_args.nodes,
                       "quadrature nodes per dimension (default 48)");
  fidelity->add_option("--samples", fidelity_args.samples,
                       "Monte Carlo samples (default 100000)");
  fidelity->add_option("--seed", fidelity_args.seed, "Monte Carlo seed");
  fidelity->add_option("--format", fidelity_args.format, "csv | json");
  fidelity->add_option("--output", fidelity_args.output, "output path (default stdout)");
  fidelity->add_option("--config", fidelity_args.config_path,
                       "JSON config; explicit flags win");

  OptimizeArgs optimize_args;
  CLI::App* optimize = app.add_subcommand(
      "optimize", "best (n, pfb) for one (dt, pmeas) cell, with the per-n table");
  optimize->add_option("--dt", optimize_args.dt, "dt/T2*");
  optimize->add_option("--pmeas", optimize_args.pmeas, "syndrome-error probability");
  optimize->add_option("--nmax", optimize_args.nmax, "largest n to consider (default 10)");
  optimize->add_option("--output", optimize_args.output, "output path (default stdout)");
  optimize->add_option("--config", optimize_args.config_path, "JSON config");

  MapArgs map_args;
  CLI::App* map = app.add_subcommand(
      "map", "optimal-strategy phase map over an (dt/T2*, pmeas) grid");
  map->add_option("--xmin", map_args.xmin, "smallest dt/T2* (default 0.1)");
  map->add_option("--xmax", map_args.xmax, "largest dt/T2* (default 3.0)");
  map->add_option("--xsteps", map_args.xsteps, "grid points along dt/T2* (default 59)");
  map->add_option("--pmeas-min", map_args.pmeas_min, "smallest pmeas (default 0)");
  map->add_option("--pmeas-max", map_args.pmeas_max, "largest pmeas (default 0.5)");
  map->add_option("--pmeas-steps", map_args.pmeas_steps,
                  "grid points along pmeas (default 51)");
  map->add_option("--nmax", map_args.nmax, "largest n to consider (default 10)");
  map->add_option("--threads", map_args.threads,
                  "worker threads (default: ROQEC_THREADS or hardware)");
  map->add_option("--output", map_args.output, "map CSV path (default stdout)");
  map->add_option("--per-n", map_args.per_n_output,
                  "also write the long-format per-n optimum table here");
  map->add_option("--config", map_args.config_path, "JSON config");

  BaselineArgs baseline_args;
  CLI::App* baseline = app.add_subcommand(
      "baseline", "single-qubit fidelity curve over a dt/T2* range");
  baseline->add_option("--xmin", baseline_args.xmin, "range start (default 0)");
  baseline->add_option("--xmax", baseline_args.xmax, "range end (default 3)");
  baseline->add_option("--steps", baseline_args.steps, "points (default 61)");
  baseline->add_option("--output", baseline_args.output, "output path (default stdout)");
  baseline->add_option("--config", baseline_args.config_path, "JSON config");

  ValidateArgs validate_args;
  CLI::App* validate = app.add_subcommand(
      "validate", "run the reduced-scale cross-engine and closed-form checks");
  validate->add_option("--seed", validate_args.seed, "seed for randomized checks");
  validate
      ->add_flag("--inject-damping-sign-flip",
                 validate_args.inject_damping_sign_flip,
                 "self-test hook: flip the damping exponent sign; the "
                 "closed-form check must then fail")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArguments;
  }

  try {
    if (fidelity->parsed()) return run_fidelity(fidelity_args);
    if (optimize->parsed()) return run_optimize(optimize_args);
    if (map->parsed()) return run_map(map_args);
    if (baseline->parsed()) return run_baseline(baseline_args);
    if (validate->parsed()) return run_validate(validate_args);
  } catch (const BadArguments& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationFailure;
  }
  return kExitBadArguments;
}
