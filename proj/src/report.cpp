#include "itbm/report.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace itbm {

nlohmann::json to_json(const TestReport& r) {
  return nlohmann::json{
      {"name", r.name},
      {"statistic", r.statistic},
      {"threshold", r.threshold},
      {"p_value_approx", r.p_value_approx},
      {"pass", r.pass},
      {"seeds", r.seeds},
      {"sample_sizes", r.sample_sizes},
  };
}

bool all_pass(const std::vector<TestReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

void write_report_bundle(const std::string& path, const std::string& experiment,
                         std::uint64_t seed, const nlohmann::json& config,
                         const std::vector<TestReport>& reports) {
  nlohmann::json j{
      {"experiment", experiment},
      {"seed", seed},
      {"config", config},
      {"pass", all_pass(reports)},
  };
  auto& arr = j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write report: " + path);
  os << j.dump(2) << '\n';
}

}  // namespace itbm
