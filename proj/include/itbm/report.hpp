#pragma once
// Pass/fail record of one statistical check, serializable to JSON.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace itbm {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  double p_value_approx = 0.0;
  bool pass = false;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> sample_sizes;
};

nlohmann::json to_json(const TestReport& r);

// {experiment, seed, config, reports: [...], pass}; pass is the conjunction.
void write_report_bundle(const std::string& path, const std::string& experiment,
                         std::uint64_t seed, const nlohmann::json& config,
                         const std::vector<TestReport>& reports);

bool all_pass(const std::vector<TestReport>& reports);

}  // namespace itbm
