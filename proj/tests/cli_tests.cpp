// End-to-end checks of the roqec binary. The path to the built tool comes in
// through ROQEC_CLI (set by CTest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "roqec/optimizer.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string cli_path() {
  const char* path = std::getenv("ROQEC_CLI");
  REQUIRE_MESSAGE(path != nullptr, "ROQEC_CLI must point at the roqec binary");
  return path;
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string command = env_prefix + cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buffer[4096];
  while (std::size_t got = std::fread(buffer, 1, sizeof(buffer), pipe)) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Last non-comment, non-header CSV line, split at commas.
std::vector<std::string> last_csv_row(const std::string& text) {
  std::istringstream in(text);
  std::string line, last;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    last = line;
  }
  std::vector<std::string> fields;
  std::istringstream row(last);
  std::string field;
  while (std::getline(row, field, ',')) fields.push_back(field);
  return fields;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("roqec-cli-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("fidelity subcommand") {
  SUBCASE("reproduces the hybrid-optimum fidelity") {
    const CliResult r = run_cli("fidelity --n 10 --pfb 0.488 --pmeas 0.22 --dt 2.0");
    CHECK(r.exit_code == 0);
    const auto row = last_csv_row(r.output);
    REQUIRE(row.size() == 8);
    CHECK(std::stod(row[4]) == doctest::Approx(0.674).epsilon(0.002 / 0.674));
    CHECK(row[5] == "exact");
  }

  SUBCASE("dt = 0 gives 1 - pfb * pmeas") {
    const CliResult r = run_cli("fidelity --n 1 --pfb 0.5 --pmeas 0.5 --dt 0");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(last_csv_row(r.output)[4]) == doctest::Approx(0.75).epsilon(1e-12));
  }

  SUBCASE("out-of-range pmeas exits 2 and names the field") {
    const CliResult r = run_cli("fidelity --n 1 --pfb 0.5 --pmeas 1.5 --dt 1");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("pmeas") != std::string::npos);
  }

  SUBCASE("missing required option exits 2") {
    const CliResult r = run_cli("fidelity --n 1 --pfb 0.5 --dt 1");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("pmeas") != std::string::npos);
  }

  SUBCASE("quadrature engine agrees and reports convergence") {
    const CliResult r = run_cli(
        "fidelity --n 10 --pfb 0.488 --pmeas 0.22 --dt 2.0 --engine quadrature "
        "--nodes 24");
    CHECK(r.exit_code == 0);
    const auto row = last_csv_row(r.output);
    CHECK(std::stod(row[4]) == doctest::Approx(0.674).epsilon(0.002 / 0.674));
    CHECK(row[7] == "ok");
  }

  SUBCASE("json format") {
    const CliResult r =
        run_cli("fidelity --n 2 --pfb 0.3 --pmeas 0.1 --dt 0.5 --format json");
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j.at("engine") == "exact");
    CHECK(j.at("fidelity").get<double>() ==
          doctest::Approx(roqec::average_fidelity({2, 0.3, 0.1, 0.5}))
              .epsilon(1e-12));
  }
}

TEST_CASE("optimize subcommand") {
  SUBCASE("hybrid cell") {
    const CliResult r = run_cli("optimize --dt 2.0 --pmeas 0.22");
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j.at("best").at("n").get<int>() == 10);
    CHECK(std::abs(j.at("best").at("pfb").get<double>() - 0.488) <= 0.01);
    CHECK(std::abs(j.at("best").at("fidelity").get<double>() - 0.674) <= 0.002);
    CHECK(j.at("per_n").size() == 10);
  }

  SUBCASE("output re-parsed equals the in-memory result") {
    const CliResult r = run_cli("optimize --dt 1.3 --pmeas 0.3 --nmax 4");
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.output);
    const roqec::OptimizationResult direct = roqec::optimize_cell(0.3, 1.3, 4);
    CHECK(j.at("best").at("n").get<int>() == direct.best.n);
    CHECK(j.at("best").at("pfb").get<double>() == direct.best.p_fb_star);
    CHECK(j.at("best").at("fidelity").get<double>() == direct.best.f_star);
    CHECK(j.at("baseline").get<double>() == direct.baseline);
  }

  SUBCASE("Zeno regime keeps feedback off") {
    const CliResult r = run_cli("optimize --dt 0.3 --pmeas 0.45");
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j.at("best").at("pfb").get<double>() == 0.0);
  }

  SUBCASE("domain violations exit 2") {
    CHECK(run_cli("optimize --dt -1 --pmeas 0.2").exit_code == 2);
    CHECK(run_cli("optimize --dt 1 --pmeas 0.2 --nmax 99").exit_code == 2);
  }
}

TEST_CASE("map subcommand") {
  TempDir tmp;
  const std::string map_path = (tmp.path / "map.csv").string();
  const std::string per_n_path = (tmp.path / "per_n.csv").string();
  const std::string args =
      "map --xmin 0.5 --xmax 1.5 --xsteps 3 --pmeas-min 0 --pmeas-max 0.4 "
      "--pmeas-steps 3 --nmax 3 --threads 2 --output " + map_path +
      " --per-n " + per_n_path;

  const CliResult r = run_cli(args);
  CHECK(r.exit_code == 0);

  const std::string map_text = read_file(map_path);
  std::size_t data_rows = 0;
  std::istringstream in(map_text);
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    if (line.rfind("x,", 0) == 0) {
      saw_header = true;
      continue;
    }
    ++data_rows;
    CHECK(line.find(",ok") != std::string::npos);
  }
  CHECK(saw_header);
  CHECK(data_rows == 9);
  CHECK(map_text.find("# command = map\n") != std::string::npos);
  CHECK(map_text.find("# threads = 2\n") != std::string::npos);

  // per-n long format: one row per (cell, n)
  const std::string per_n_text = read_file(per_n_path);
  std::size_t per_n_rows = 0;
  std::istringstream in2(per_n_text);
  while (std::getline(in2, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("x,", 0) != 0) ++per_n_rows;
  }
  CHECK(per_n_rows == 9 * 3);

  SUBCASE("reruns are byte-identical") {
    const std::string first = map_text;
    const CliResult again = run_cli(args);
    CHECK(again.exit_code == 0);
    CHECK(read_file(map_path) == first);
  }

  SUBCASE("ROQEC_THREADS is the fallback worker count") {
    const std::string env_args =
        "map --xmin 0.5 --xmax 1.0 --xsteps 2 --pmeas-min 0 --pmeas-max 0.1 "
        "--pmeas-steps 2 --nmax 2 --output " + map_path;
    const CliResult env_run = run_cli(env_args, "ROQEC_THREADS=3 ");
    CHECK(env_run.exit_code == 0);
    CHECK(read_file(map_path).find("# threads = 3\n") != std::string::npos);
  }
}

TEST_CASE("baseline subcommand") {
  const CliResult r = run_cli("baseline --xmin 0 --xmax 2 --steps 3");
  CHECK(r.exit_code == 0);
  std::istringstream in(r.output);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("x,", 0) != 0) rows.push_back(line);
  }
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "0,1");
  const auto at2 = rows[2];
  CHECK(at2.substr(0, 2) == "2,");
  CHECK(std::stod(at2.substr(2)) == doctest::Approx((2.0 + std::exp(-4.0)) / 3.0));
}

TEST_CASE("config file merging") {
  TempDir tmp;
  const std::string config_path = (tmp.path / "config.json").string();

  SUBCASE("config supplies missing flags; explicit flags win") {
    std::ofstream(config_path)
        << R"({"n": 1, "pfb": 0.5, "pmeas": 0.5, "dt": 0.0})";
    const CliResult defaults = run_cli("fidelity --config " + config_path);
    CHECK(defaults.exit_code == 0);
    CHECK(std::stod(last_csv_row(defaults.output)[4]) ==
          doctest::Approx(0.75).epsilon(1e-12));

    const CliResult overridden =
        run_cli("fidelity --config " + config_path + " --pfb 0.25");
    CHECK(overridden.exit_code == 0);
    CHECK(std::stod(last_csv_row(overridden.output)[4]) ==
          doctest::Approx(0.875).epsilon(1e-12));
  }

  SUBCASE("unknown config keys are rejected") {
    std::ofstream(config_path) << R"({"n": 1, "bogus": 3})";
    const CliResult r = run_cli("fidelity --config " + config_path +
                                " --pfb 0.5 --pmeas 0.5 --dt 0");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("bogus") != std::string::npos);
  }
}

TEST_CASE("validate subcommand") {
  const CliResult r = run_cli("validate");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PASS cptp-channels") != std::string::npos);
  CHECK(r.output.find("PASS closed-form-f1-exact") != std::string::npos);
  CHECK(r.output.find("PASS hybrid-optimum-cell") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);
  CHECK(r.output.find("all checks passed") != std::string::npos);

  SUBCASE("fault injection is detected") {
    const CliResult injected = run_cli("validate --inject-damping-sign-flip");
    CHECK(injected.exit_code == 1);
    CHECK(injected.output.find("FAIL closed-form-f1-exact") != std::string::npos);
  }
}

TEST_CASE("bad subcommand exits 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
}
