#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(ITBM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc)};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const fs::path kTmp = fs::temp_directory_path() / "itbm_cli_test";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("no-such-subcommand").exit_code == 2);
  CHECK(run_cli("marginal --bogus-flag 1").exit_code == 2);
  CHECK(run_cli("nu-p --start 1,1 --samples 10").exit_code == 2);
}

TEST_CASE("marginal: reproducible outputs, pass and fail paths") {
  const fs::path out1 = kTmp / "m1";
  const fs::path out2 = kTmp / "m2";
  fs::remove_all(kTmp);
  const std::string base =
      "marginal --n 6 --samples 4000 --threshold 0.05 --seed 7 --out ";
  CHECK(run_cli(base + out1.string()).exit_code == 0);
  CHECK(run_cli(base + out2.string()).exit_code == 0);
  CHECK(slurp(out1 / "marginal_samples.csv") == slurp(out2 / "marginal_samples.csv"));
  CHECK(slurp(out1 / "marginal_report.json") == slurp(out2 / "marginal_report.json"));

  const auto j = nlohmann::json::parse(slurp(out1 / "marginal_report.json"));
  CHECK(j.at("experiment") == "marginal");
  CHECK(j.at("seed") == 7);
  CHECK(j.at("pass") == true);
  CHECK(j.at("reports").at(0).at("statistic").get<double>() < 0.05);

  const std::string csv = slurp(out1 / "marginal_samples.csv");
  CHECK(csv.rfind("value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4001);

  // an impossible threshold must fail with exit code 1
  CHECK(run_cli("marginal --n 3 --samples 200 --threshold 0.0001 --seed 7 --out " +
                (kTmp / "m3").string())
            .exit_code == 1);
}

TEST_CASE("worker count does not change the bytes") {
  const fs::path out1 = kTmp / "w1";
  const fs::path out2 = kTmp / "w2";
  // few samples: the KS check may fail (exit 1), the bytes must still agree
  const std::string base =
      "occupation --n 4 --paths 600 --per-path 2 --seed 11 ";
  const int rc1 = run_cli(base + "--workers 1 --out " + out1.string()).exit_code;
  const int rc2 = run_cli(base + "--workers 3 --out " + out2.string()).exit_code;
  CHECK(rc1 == rc2);
  CHECK(rc1 < 2);
  CHECK(slurp(out1 / "occupation_samples.csv") ==
        slurp(out2 / "occupation_samples.csv"));
  CHECK(slurp(out1 / "occupation_report.json") ==
        slurp(out2 / "occupation_report.json"));
}

TEST_CASE("config file supplies defaults, flags override") {
  const fs::path cfg = kTmp / "cfg.json";
  fs::create_directories(kTmp);
  {
    std::ofstream os(cfg);
    os << R"({"seed": 5, "marginal": {"n": 4, "samples": 500, "threshold": 0.2}})";
  }
  const fs::path out1 = kTmp / "c1";
  CHECK(run_cli("--config " + cfg.string() + " marginal --out " + out1.string())
            .exit_code == 0);
  auto j = nlohmann::json::parse(slurp(out1 / "marginal_report.json"));
  CHECK(j.at("seed") == 5);
  CHECK(j.at("config").at("n") == 4);
  CHECK(j.at("config").at("samples") == 500);

  const fs::path out2 = kTmp / "c2";
  CHECK(run_cli("--config " + cfg.string() + " --seed 9 marginal --samples 600 --out " +
                out2.string())
            .exit_code == 0);
  j = nlohmann::json::parse(slurp(out2 / "marginal_report.json"));
  CHECK(j.at("seed") == 9);
  CHECK(j.at("config").at("samples") == 600);
}

TEST_CASE("seastar and fixed-point emit their artifacts") {
  const fs::path out = kTmp / "s1";
  CHECK(run_cli("seastar --steps 6 --samples 500 --seed 7 --out " + out.string())
            .exit_code == 0);
  const std::string csv = slurp(out / "seastar.csv");
  CHECK(csv.rfind("x1,x2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 501);

  CHECK(run_cli("fixed-point --m 20000 --threshold 0.03 --seed 3 --out " +
                (kTmp / "f1").string())
            .exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(kTmp / "f1" / "fixed_point_report.json"));
  CHECK(j.at("reports").at(0).at("name") == "fixed_point_E");
}

TEST_CASE("variation emits medians and the dichotomy checks") {
  const fs::path out = kTmp / "v1";
  CHECK(run_cli("variation --n 2 --orders 2,4 --lo-level 8 --hi-level 12 "
                "--paths 40 --seed 13 --out " +
                out.string())
            .exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "variation_report.json"));
  bool saw_quad = false, saw_quart = false;
  for (const auto& r : j.at("reports")) {
    if (r.at("name") == "quadratic_divergence") saw_quad = true;
    if (r.at("name") == "quartic_stabilization") saw_quart = true;
  }
  CHECK(saw_quad);
  CHECK(saw_quart);
  const std::string csv = slurp(out / "variation.csv");
  CHECK(csv.rfind("order,level,median\n", 0) == 0);
}

}  // TEST_SUITE
