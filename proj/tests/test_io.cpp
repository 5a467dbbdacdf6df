#include <doctest.h>

#include <sstream>

#include "roqec/io.hpp"
#include "roqec/validate.hpp"

using namespace roqec;

TEST_CASE("significant-digit formatting") {
  CHECK(format_sig(0.5) == "0.5");
  CHECK(format_sig(2.0) == "2");
  CHECK(format_sig(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig(0.673909803559) == "0.673909803559");
}

TEST_CASE("result CSV shape") {
  ResultRecord record;
  record.x = 2.0;
  record.p_meas = 0.22;
  record.n = 10;
  record.p_fb = 0.488;
  record.fidelity = 0.6739;
  record.engine = "exact";
  record.baseline = 0.6728;

  std::ostringstream out;
  write_result_csv(out, {{"command", "fidelity"}, {"n", "10"}}, {record});
  const std::string text = out.str();
  CHECK(text.find("# command = fidelity\n") == 0);
  CHECK(text.find("x,pmeas,n,pfb,fidelity,engine,baseline,tolerance_flag\n") !=
        std::string::npos);
  CHECK(text.find("2,0.22,10,0.488,0.6739,exact,0.6728,ok\n") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("result JSON carries every field") {
  ResultRecord record;
  record.x = 1.5;
  record.n = 3;
  record.engine = "quadrature";
  const nlohmann::json j = to_json(record);
  for (const char* key : {"x", "pmeas", "n", "pfb", "fidelity", "engine",
                          "baseline", "tolerance_flag"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("optimization result serialization round-trips") {
  const OptimizationResult cell = optimize_cell(0.2, 1.2, 3);
  const nlohmann::json j = to_json(cell);
  CHECK(j.at("x").get<double>() == cell.x);
  CHECK(j.at("pmeas").get<double>() == cell.p_meas);
  CHECK(j.at("best").at("n").get<int>() == cell.best.n);
  CHECK(j.at("best").at("pfb").get<double>() == cell.best.p_fb_star);
  CHECK(j.at("best").at("fidelity").get<double>() == cell.best.f_star);
  REQUIRE(j.at("per_n").size() == cell.per_n.size());
  for (std::size_t i = 0; i < cell.per_n.size(); ++i) {
    CHECK(j.at("per_n")[i].at("pfb").get<double>() == cell.per_n[i].p_fb_star);
  }
}

TEST_CASE("map CSV marks failed cells and counts successes") {
  OptimizationResult good;
  good.x = 1.0;
  good.p_meas = 0.1;
  good.best = {4, 0.5, 0.9};
  good.baseline = 0.8;
  OptimizationResult bad = good;
  bad.ok = false;
  bad.error = "synthetic";

  std::ostringstream out;
  write_map_csv(out, {}, {good, bad});
  const std::string text = out.str();
  CHECK(text.find("x,pmeas,best_n,best_pfb,fmax,baseline,status\n") == 0);
  CHECK(text.find(",ok\n") != std::string::npos);
  CHECK(text.find(",failed\n") != std::string::npos);
  CHECK(sweep_success_fraction({good, bad}) == 0.5);
  CHECK(sweep_success_fraction({good, good}) == 1.0);
}

TEST_CASE("per-n CSV is complete") {
  const OptimizationResult cell = optimize_cell(0.15, 0.9, 4);
  std::ostringstream out;
  write_per_n_csv(out, {}, {cell});
  const std::string text = out.str();
  std::size_t rows = 0;
  for (char c : text) rows += (c == '\n') ? 1 : 0;
  CHECK(rows == 1 + 4);  // header + one row per n
  CHECK(text.find("x,pmeas,n,pfb_n,f_n\n") == 0);
}

TEST_CASE("validation suite passes on a clean build") {
  ValidationOptions options;
  options.closed_form_samples = 10;
  options.cross_check_samples = 3;
  options.mc_samples = 5000;
  const std::vector<CheckResult> results = run_validation(options);
  CHECK(results.size() == 9);
  for (const CheckResult& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.passed);
  }
  CHECK(all_passed(results));
}
