#pragma once

// Flat-file serialization for CLI results: CSV with '#' config-comment
// headers and fixed 12-significant-digit formatting, plus JSON mirrors of the
// same records. Output is byte-stable for identical configurations.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "roqec/optimizer.hpp"

namespace roqec {

struct ResultRecord {
  double x = 0.0;
  double p_meas = 0.0;
  int n = 0;
  double p_fb = 0.0;
  double fidelity = 0.0;
  std::string engine;
  double baseline = 0.0;
  std::string tolerance_flag = "ok";
};

// 12 significant digits, locale-independent.
std::string format_sig(double value);

// Key/value lines of the fully resolved configuration, emitted as '# key = value'.
using ConfigLines = std::vector<std::pair<std::string, std::string>>;

void write_config_comments(std::ostream& os, const ConfigLines& config);

void write_result_csv(std::ostream& os, const ConfigLines& config,
                      const std::vector<ResultRecord>& records);

nlohmann::json to_json(const ResultRecord& record);
nlohmann::json to_json(const PfbOptimum& opt);
nlohmann::json to_json(const OptimizationResult& result);

// Map sweep: one row per cell, columns
// x,pmeas,best_n,best_pfb,fmax,baseline,status.
void write_map_csv(std::ostream& os, const ConfigLines& config,
                   const std::vector<OptimizationResult>& results);

// Long-format per-n companion: x,pmeas,n,pfb_n,f_n.
void write_per_n_csv(std::ostream& os, const ConfigLines& config,
                     const std::vector<OptimizationResult>& results);

// Fraction of cells with ok == true.
double sweep_success_fraction(const std::vector<OptimizationResult>& results);

}  // namespace roqec
