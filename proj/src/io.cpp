#include "roqec/io.hpp"

#include <cstdio>
#include <ostream>

namespace roqec {

std::string format_sig(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void write_config_comments(std::ostream& os, const ConfigLines& config) {
  for (const auto& [key, value] : config) {
    os << "# " << key << " = " << value << "\n";
  }
}

void write_result_csv(std::ostream& os, const ConfigLines& config,
                      const std::vector<ResultRecord>& records) {
  write_config_comments(os, config);
  os << "x,pmeas,n,pfb,fidelity,engine,baseline,tolerance_flag\n";
  for (const ResultRecord& r : records) {
    os << format_sig(r.x) << ',' << format_sig(r.p_meas) << ',' << r.n << ','
       << format_sig(r.p_fb) << ',' << format_sig(r.fidelity) << ',' << r.engine
       << ',' << format_sig(r.baseline) << ',' << r.tolerance_flag << "\n";
  }
}

nlohmann::json to_json(const ResultRecord& record) {
  return nlohmann::json{{"x", record.x},
                        {"pmeas", record.p_meas},
                        {"n", record.n},
                        {"pfb", record.p_fb},
                        {"fidelity", record.fidelity},
                        {"engine", record.engine},
                        {"baseline", record.baseline},
                        {"tolerance_flag", record.tolerance_flag}};
}

nlohmann::json to_json(const PfbOptimum& opt) {
  return nlohmann::json{
      {"n", opt.n}, {"pfb", opt.p_fb_star}, {"fidelity", opt.f_star}};
}

nlohmann::json to_json(const OptimizationResult& result) {
  nlohmann::json per_n = nlohmann::json::array();
  for (const PfbOptimum& opt : result.per_n) per_n.push_back(to_json(opt));
  nlohmann::json j{{"x", result.x},
                   {"pmeas", result.p_meas},
                   {"baseline", result.baseline},
                   {"best", to_json(result.best)},
                   {"per_n", per_n},
                   {"ok", result.ok}};
  if (!result.ok) j["error"] = result.error;
  return j;
}

void write_map_csv(std::ostream& os, const ConfigLines& config,
                   const std::vector<OptimizationResult>& results) {
  write_config_comments(os, config);
  os << "x,pmeas,best_n,best_pfb,fmax,baseline,status\n";
  for (const OptimizationResult& r : results) {
    os << format_sig(r.x) << ',' << format_sig(r.p_meas) << ',' << r.best.n
       << ',' << format_sig(r.best.p_fb_star) << ',' << format_sig(r.best.f_star)
       << ',' << format_sig(r.baseline) << ',' << (r.ok ? "ok" : "failed")
       << "\n";
  }
}

void write_per_n_csv(std::ostream& os, const ConfigLines& config,
                     const std::vector<OptimizationResult>& results) {
  write_config_comments(os, config);
  os << "x,pmeas,n,pfb_n,f_n\n";
  for (const OptimizationResult& r : results) {
    for (const PfbOptimum& opt : r.per_n) {
      os << format_sig(r.x) << ',' << format_sig(r.p_meas) << ',' << opt.n << ','
         << format_sig(opt.p_fb_star) << ',' << format_sig(opt.f_star) << "\n";
    }
  }
}

double sweep_success_fraction(const std::vector<OptimizationResult>& results) {
  if (results.empty()) return 1.0;
  std::size_t ok = 0;
  for (const OptimizationResult& r : results) ok += r.ok ? 1 : 0;
  return double(ok) / double(results.size());
}

}  // namespace roqec
