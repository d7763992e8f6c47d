// Experiment driver: one subcommand per experiment, CSV data plus a JSON
// report bundle per run. Exit codes: 0 all configured checks pass, 1 a check
// failed, 2 usage/config/IO error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "itbm/acceptance.hpp"
#include "itbm/analysis.hpp"
#include "itbm/brownian.hpp"
#include "itbm/csv.hpp"
#include "itbm/iterate.hpp"
#include "itbm/kernels.hpp"
#include "itbm/occupation.hpp"
#include "itbm/parallel.hpp"
#include "itbm/report.hpp"
#include "itbm/rng.hpp"
#include "itbm/summation.hpp"

using nlohmann::json;
using namespace itbm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;

// stream-id experiment domains for the CLI subcommands (the acceptance
// criteria own 1..12)
enum : std::uint64_t {
  kCliMarginal = 32,
  kCliNuP = 33,
  kCliSeastar = 34,
  kCliOccupation = 35,
  kCliLocalTime = 36,
  kCliFourier = 37,
  kCliOscillation = 38,
  kCliVariation = 39,
  kCliDrift = 40,
  kCliFixedPoint = 41,
};

struct Global {
  std::uint64_t seed = kDefaultSeed;
  std::string out = "out";
  unsigned workers = 0;  // 0 = hardware concurrency
  json config;
};

const SignedExponential kE2{2.0};

double mean_of(std::span<const double> xs) {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

std::string out_path(const Global& g, const std::string& file) {
  return (std::filesystem::path(g.out) / file).string();
}

template <typename T>
void overlay(const json& cfg, const char* section, const char* key, T& var) {
  if (cfg.contains(section) && cfg[section].contains(key)) {
    var = cfg[section][key].get<T>();
  }
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stod(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

int finish(const Global& g, const std::string& experiment, const json& config,
           const std::vector<TestReport>& reports) {
  write_report_bundle(out_path(g, experiment + "_report.json"), experiment,
                      g.seed, config, reports);
  for (const auto& r : reports) {
    std::cout << "  [" << (r.pass ? "ok" : "FAIL") << "] " << r.name
              << ": D=" << r.statistic << " threshold=" << r.threshold << "\n";
  }
  const bool ok = all_pass(reports);
  std::cout << experiment << ": " << (ok ? "PASS" : "FAIL") << " ("
            << reports.size() << " checks), reports in " << g.out << "\n";
  return ok ? kExitOk : kExitChecksFailed;
}

// ---- subcommands ----

int run_marginal(const Global& g, int n, std::size_t samples, double threshold) {
  std::vector<double> x(samples);
  parallel_for(samples, g.workers, [&](std::size_t r) {
    IteratedPath path(n, g.seed, stream_id(kCliMarginal, r, 0));
    x[r] = path.evaluate(1.0);
  });
  CsvWriter csv(out_path(g, "marginal_samples.csv"), {"value"});
  for (double v : x) csv.row({v});
  auto rep = ks_one_sample(
      x, [](double v) { return kE2.cdf(v); }, threshold, "marginal_vs_E2");
  rep.seeds = {g.seed};
  return finish(g, "marginal", {{"n", n}, {"samples", samples}}, {rep});
}

int run_nu_p(const Global& g, int steps, std::size_t samples,
             const std::string& start_str) {
  const std::vector<double> start = parse_doubles(start_str);
  require_point_vector(start);
  const std::size_t p = start.size();
  std::vector<std::vector<double>> states(samples);
  parallel_for(samples, g.workers, [&](std::size_t r) {
    RngStream rng(g.seed, stream_id(kCliNuP, r, 0));
    states[r] = sample_nu_p(start, steps, rng);
  });
  {
    std::vector<std::string> names(p);
    for (std::size_t i = 0; i < p; ++i) names[i] = "x" + std::to_string(i + 1);
    CsvWriter csv(out_path(g, "nu_p_samples.csv"), names);
    for (const auto& s : states) csv.row(s);
  }
  std::vector<TestReport> reports;
  std::vector<double> col(samples);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t r = 0; r < samples; ++r) col[r] = states[r][i];
    reports.push_back(ks_one_sample(
        col, [](double v) { return kE2.cdf(v); }, 0.02,
        "X" + std::to_string(i + 1) + "_vs_E2"));
  }
  if (p >= 2) {
    std::vector<double> diff(samples), c1(samples), c2(samples);
    for (std::size_t r = 0; r < samples; ++r) {
      diff[r] = states[r][0] - states[r][1];
      c1[r] = states[r][0];
      c2[r] = states[r][1];
    }
    reports.push_back(ks_one_sample(
        diff, [](double v) { return kE2.cdf(v); }, 0.02, "X1_minus_X2_vs_E2"));
    reports.push_back(ks_two_sample(c1, c2, 0.03, "exchangeability"));
  }
  return finish(g, "nu_p",
                {{"p", p}, {"steps", steps}, {"samples", samples}, {"start", start}},
                reports);
}

int run_seastar(const Global& g, int steps, std::size_t samples) {
  std::vector<std::vector<double>> pts(samples);
  const double start[2] = {1.0, 2.0};
  parallel_for(samples, g.workers, [&](std::size_t r) {
    RngStream rng(g.seed, stream_id(kCliSeastar, r, 0));
    pts[r] = sample_nu_p(start, steps, rng);
  });
  CsvWriter csv(out_path(g, "seastar.csv"), {"x1", "x2"});
  for (const auto& s : pts) csv.row(s);
  std::cout << "seastar: wrote " << samples << " nu_2 samples to "
            << out_path(g, "seastar.csv") << "\n";
  write_report_bundle(out_path(g, "seastar_report.json"), "seastar", g.seed,
                      {{"steps", steps}, {"samples", samples}}, {});
  return kExitOk;
}

int run_occupation(const Global& g, int n, std::size_t paths,
                   std::size_t per_path, const std::string& law_name) {
  TimeLaw law = uniform_time_law();
  if (law_name == "exponential") law = exponential_time_law();
  else if (law_name == "normal") law = normal_time_law();
  else if (law_name != "uniform") {
    throw CLI::ValidationError("--time-law must be uniform|exponential|normal");
  }
  std::vector<double> pooled(paths * per_path);
  parallel_for(paths, g.workers, [&](std::size_t r) {
    const auto v = occupation_samples(n, per_path, g.seed,
                                      stream_id(kCliOccupation, r, 0), law);
    std::copy(v.begin(), v.end(), pooled.begin() + static_cast<std::ptrdiff_t>(r * per_path));
  });
  CsvWriter csv(out_path(g, "occupation_samples.csv"), {"value"});
  for (double v : pooled) csv.row({v});
  auto rep = ks_one_sample(
      pooled, [](double v) { return kE2.cdf(v); }, 0.01, "pooled_vs_E2");
  return finish(g, "occupation",
                {{"n", n}, {"paths", paths}, {"per_path", per_path}, {"time_law", law.name}},
                {rep});
}

int run_local_time(const Global& g, int n, std::size_t samples,
                   std::size_t bins, bool dump_knots) {
  const auto v = occupation_samples(n, samples, g.seed, stream_id(kCliLocalTime, 0, 0));
  const auto est = local_time_estimate(v, bins);
  {
    CsvWriter csv(out_path(g, "local_time_hist.csv"), {"bin_lo", "bin_hi", "mass"});
    for (std::size_t i = 0; i < est.masses.size(); ++i) {
      csv.row({est.bin_edges[i], est.bin_edges[i + 1], est.masses[i]});
    }
  }
  if (dump_knots) {
    IteratedPath path(n, g.seed, stream_id(kCliLocalTime, 1, 0));
    path.evaluate_batch(std::vector<double>(v.begin(), v.begin() + std::min<std::size_t>(v.size(), 256)));
    for (int i = 0; i < path.levels(); ++i) {
      std::ofstream os(out_path(g, "knots_level" + std::to_string(i) + ".csv"));
      path.level(i).dump_knots_csv(os);
    }
  }
  TestReport mass;
  mass.name = "mass_normalization";
  mass.statistic = std::fabs(est.total_mass() - 1.0);
  mass.threshold = 1e-12;
  mass.pass = mass.statistic < mass.threshold;
  mass.sample_sizes = {samples};
  std::vector<TestReport> reports{mass};
  if (samples >= 100000) {
    const std::vector<double> head(v.begin(),
                                   v.begin() + static_cast<std::ptrdiff_t>(samples / 10));
    const auto est_head = local_time_estimate(head, bins);
    TestReport l1;
    l1.name = "subsample_L1_consistency";
    l1.statistic = l1_distance(est, est_head);
    l1.threshold = 0.05;
    l1.pass = l1.statistic < l1.threshold;
    l1.sample_sizes = {samples, samples / 10};
    reports.push_back(l1);
  }
  // qualitative Hoelder quotient |L(x)-L(y)| / |x-y|^0.4 over adjacent bins
  double holder = 0.0;
  if (!est.degenerate) {
    const double w = est.bin_edges[1] - est.bin_edges[0];
    for (std::size_t i = 0; i + 1 < est.masses.size(); ++i) {
      const double dq = std::fabs(est.masses[i + 1] - est.masses[i]) / w;
      holder = std::max(holder, dq / std::pow(w, 0.4));
    }
  }
  return finish(g, "local_time",
                {{"n", n}, {"samples", samples}, {"bins", bins},
                 {"support", {est.support_lo, est.support_hi}},
                 {"holder_quotient_exp0.4", holder},
                 {"note", "Hoelder quotient is reported without a threshold"}},
                reports);
}

int run_fourier(const Global& g, int n, std::size_t replicas, std::size_t points,
                const std::string& xis_str, double tol) {
  const std::vector<double> xis = parse_doubles(xis_str);
  std::vector<std::vector<double>> acc(xis.size());
  for (auto& a : acc) a.resize(replicas);
  const double m = static_cast<double>(points);
  parallel_for(replicas, g.workers, [&](std::size_t r) {
    const auto w = occupation_samples(n, points, g.seed,
                                      stream_id(kCliFourier, r, 0));
    for (std::size_t k = 0; k < xis.size(); ++k) {
      double sc = 0.0, ss = 0.0;
      for (double v : w) {
        sc += std::cos(xis[k] * v);
        ss += std::sin(xis[k] * v);
      }
      acc[k][r] = (sc * sc + ss * ss - m) / (m * (m - 1.0));
    }
  });
  CsvWriter csv(out_path(g, "fourier_sweep.csv"),
                {"xi", "estimate", "target", "abs_error"});
  std::vector<TestReport> reports;
  for (std::size_t k = 0; k < xis.size(); ++k) {
    const double est = mean_of(acc[k]);
    const double target = 4.0 / (4.0 + xis[k] * xis[k]);
    csv.row({xis[k], est, target, std::fabs(est - target)});
    TestReport r;
    r.name = "fourier_xi_" + std::to_string(xis[k]);
    r.statistic = std::fabs(est - target);
    r.threshold = tol;
    r.pass = r.statistic < tol;
    r.sample_sizes = {replicas, points};
    reports.push_back(r);
  }
  return finish(g, "fourier",
                {{"n", n}, {"replicas", replicas}, {"points", points}, {"tol", tol}},
                reports);
}

int run_oscillation(const Global& g, int n, std::size_t grid,
                    std::size_t replicas, int terms, double threshold) {
  std::vector<double> grid_osc(replicas), limit_osc(replicas);
  parallel_for(replicas, g.workers, [&](std::size_t r) {
    grid_osc[r] = oscillation_on_grid(n, 1.0, grid, g.seed,
                                      stream_id(kCliOscillation, r, 0));
    RngStream rng(g.seed, stream_id(kCliOscillation, r,
                                    static_cast<std::uint64_t>(n)));
    limit_osc[r] = sample_limit_oscillation(rng, terms, grid);
  });
  {
    CsvWriter a(out_path(g, "oscillation_grid.csv"), {"value"});
    for (double v : grid_osc) a.row({v});
    CsvWriter b(out_path(g, "oscillation_limit.csv"), {"value"});
    for (double v : limit_osc) b.row({v});
  }
  auto rep = ks_two_sample(grid_osc, limit_osc, threshold, "oscillation_limit_law");
  return finish(g, "oscillation",
                {{"n", n}, {"grid", grid}, {"replicas", replicas}, {"terms", terms}},
                {rep});
}

int run_variation(const Global& g, int n, const std::string& orders_str,
                  int lo_level, int hi_level, std::size_t paths) {
  const std::vector<double> orders = parse_doubles(orders_str);
  std::vector<int> levels;
  for (int k = lo_level; k <= hi_level; ++k) levels.push_back(k);
  if (levels.empty()) throw CLI::ValidationError("empty level range");

  // per order, per level, per path; all orders share each path's realization
  std::vector<std::vector<std::vector<double>>> vals(
      orders.size(), std::vector<std::vector<double>>(paths));
  parallel_for(paths, g.workers, [&](std::size_t r) {
    for (std::size_t o = 0; o < orders.size(); ++o) {
      vals[o][r] = p_variation(n, orders[o], levels, g.seed,
                               stream_id(kCliVariation, r, 0));
    }
  });
  CsvWriter csv(out_path(g, "variation.csv"), {"order", "level", "median"});
  std::vector<std::vector<double>> medians(orders.size());
  for (std::size_t o = 0; o < orders.size(); ++o) {
    for (std::size_t k = 0; k < levels.size(); ++k) {
      std::vector<double> col(paths);
      for (std::size_t r = 0; r < paths; ++r) col[r] = vals[o][r][k];
      std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(paths / 2), col.end());
      medians[o].push_back(col[paths / 2]);
      csv.row({orders[o], static_cast<double>(levels[k]), medians[o].back()});
    }
  }
  std::vector<TestReport> reports;
  for (std::size_t o = 0; o < orders.size(); ++o) {
    if (n == 2 && orders[o] == 2.0 && levels.size() > 1) {
      TestReport r;
      r.name = "quadratic_divergence";
      double worst = 0.0;
      for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        worst = std::max(worst, medians[o][k] / medians[o][k + 1]);
      }
      r.statistic = worst;   // < 1 means strictly increasing medians
      r.threshold = 1.0;
      r.pass = worst < 1.0;
      r.sample_sizes = {paths};
      reports.push_back(r);
    }
    if (n == 2 && orders[o] == 4.0) {
      TestReport r;
      r.name = "quartic_stabilization";
      const auto [mn, mx] =
          std::minmax_element(medians[o].begin(), medians[o].end());
      r.statistic = *mx / *mn;
      r.threshold = 2.0;
      r.pass = r.statistic <= 2.0;
      r.sample_sizes = {paths};
      reports.push_back(r);
    }
  }
  return finish(g, "variation",
                {{"n", n}, {"orders", orders}, {"levels", {lo_level, hi_level}}, {"paths", paths}},
                reports);
}

int run_drift(const Global& g, std::size_t p, std::size_t n_states,
              std::size_t replicas) {
  const double c3 = c3_drift_bound(p, g.seed);
  RngStream gen(g.seed, stream_id(kCliDrift, 0, 0));
  std::vector<std::vector<double>> states;
  while (states.size() < n_states) {
    std::vector<double> x(p);
    if (states.size() % 2 == 0) {
      for (std::size_t i = 0; i < p; ++i) {
        x[i] = gen.sign() * (50.0 + 350.0 * gen.uniform01());
      }
    } else {
      x[0] = gen.sign() * (0.5 + 1.5 * gen.uniform01());
      for (std::size_t i = 1; i < p; ++i) {
        x[i] = x[i - 1] + (1e-6 + 1.9e-5 * gen.uniform01());
      }
    }
    if (!is_point_vector(x)) continue;
    if (std::sqrt(lyapunov_V(x)) <= 2.0 * c3) continue;
    states.push_back(std::move(x));
  }
  std::vector<DriftEstimate> est(states.size());
  parallel_for(states.size(), g.workers, [&](std::size_t i) {
    RngStream rng(g.seed, stream_id(kCliDrift, i + 1, 0));
    est[i] = drift_estimate(states[i], replicas, rng);
  });
  CsvWriter csv(out_path(g, "drift.csv"),
                {"V", "E_V_next", "drift", "std_error"});
  std::vector<TestReport> reports;
  for (std::size_t i = 0; i < states.size(); ++i) {
    csv.row({est[i].v_start, est[i].e_v_next, est[i].drift, est[i].std_error});
    TestReport r;
    r.name = "drift_negative_state_" + std::to_string(i);
    r.statistic = est[i].drift + 3.0 * est[i].std_error;  // must be < 0
    r.threshold = 0.0;
    r.pass = r.statistic < 0.0;
    r.sample_sizes = {replicas};
    reports.push_back(r);
  }
  return finish(g, "drift",
                {{"p", p}, {"states", n_states}, {"replicas", replicas}, {"C3", c3}},
                reports);
}

int run_fixed_point(const Global& g, std::size_t m, double threshold) {
  RngStream rng(g.seed, stream_id(kCliFixedPoint, 0, 0));
  auto rep = verify_fixed_point(rng, m, threshold);
  rep.seeds = {g.seed};
  return finish(g, "fixed_point", {{"m", m}}, {rep});
}

int run_selfcheck(const Global& g, const std::string& only_str) {
  std::vector<int> only;
  if (!only_str.empty()) {
    for (double v : parse_doubles(only_str)) only.push_back(static_cast<int>(v));
  }
  std::cout << "selfcheck: seed=" << g.seed << " workers=" << g.workers
            << " backend=" << kern::backend_name() << "\n";
  const auto results = run_acceptance(g.seed, g.workers, std::cout, only);
  json j{{"experiment", "selfcheck"}, {"seed", g.seed}};
  auto& arr = j["criteria"] = json::array();
  bool ok = true;
  for (const auto& r : results) {
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    ok = ok && r.pass;
  }
  j["pass"] = ok;
  const auto path = out_path(g, "selfcheck_report.json");
  std::filesystem::create_directories(g.out);
  std::ofstream os(path);
  os << j.dump(2) << '\n';
  std::cout << "selfcheck: " << (ok ? "PASS" : "FAIL") << ", report at " << path << "\n";
  return ok ? kExitOk : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  Global g;
  if (const char* env = std::getenv("ITBM_SEED")) {
    g.seed = std::strtoull(env, nullptr, 10);
  }

  // config file values become defaults; explicit flags override them
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream is(argv[i + 1]);
      if (!is) {
        std::cerr << "cannot read config file: " << argv[i + 1] << "\n";
        return kExitUsage;
      }
      try {
        is >> g.config;
      } catch (const std::exception& e) {
        std::cerr << "bad config JSON: " << e.what() << "\n";
        return kExitUsage;
      }
    }
  }
  if (g.config.contains("seed")) g.seed = g.config["seed"].get<std::uint64_t>();
  if (g.config.contains("out")) g.out = g.config["out"].get<std::string>();
  if (g.config.contains("workers")) g.workers = g.config["workers"].get<unsigned>();

  CLI::App app{"iterated-brownian-motion simulation experiments"};
  app.require_subcommand(1);
  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON config file (flags override it)");
  app.add_option("--seed", g.seed, "base seed (env ITBM_SEED, default 42)");
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads (0 = hardware)");

  auto* marginal = app.add_subcommand("marginal", "W_n(1) samples + KS vs +-E(2)");
  int ma_n = 10;
  std::size_t ma_samples = 100000;
  double ma_threshold = 0.01;
  overlay(g.config, "marginal", "n", ma_n);
  overlay(g.config, "marginal", "samples", ma_samples);
  overlay(g.config, "marginal", "threshold", ma_threshold);
  marginal->add_option("--n", ma_n, "iteration depth")->capture_default_str();
  marginal->add_option("--samples", ma_samples, "replicas")->capture_default_str();
  marginal->add_option("--threshold", ma_threshold, "KS threshold")->capture_default_str();

  auto* nup = app.add_subcommand("nu-p", "chain samples of nu_p + marginal checks");
  int np_steps = kDefaultChainSteps;
  std::size_t np_samples = 10000;
  std::string np_start = "1,2";
  overlay(g.config, "nu_p", "steps", np_steps);
  overlay(g.config, "nu_p", "samples", np_samples);
  overlay(g.config, "nu_p", "start", np_start);
  nup->add_option("--steps", np_steps, "chain steps")->capture_default_str();
  nup->add_option("--samples", np_samples, "replicas")->capture_default_str();
  nup->add_option("--start", np_start, "comma-separated start point")->capture_default_str();

  auto* seastar = app.add_subcommand("seastar", "nu_2 point cloud for plotting");
  int ss_steps = kDefaultChainSteps;
  std::size_t ss_samples = 300000;
  overlay(g.config, "seastar", "steps", ss_steps);
  overlay(g.config, "seastar", "samples", ss_samples);
  seastar->add_option("--steps", ss_steps, "chain steps")->capture_default_str();
  seastar->add_option("--samples", ss_samples, "points")->capture_default_str();

  auto* occ = app.add_subcommand("occupation", "pooled occupation samples + KS");
  int oc_n = 10;
  std::size_t oc_paths = 50000, oc_per = 2;
  std::string oc_law = "uniform";
  overlay(g.config, "occupation", "n", oc_n);
  overlay(g.config, "occupation", "paths", oc_paths);
  overlay(g.config, "occupation", "per_path", oc_per);
  overlay(g.config, "occupation", "time_law", oc_law);
  occ->add_option("--n", oc_n)->capture_default_str();
  occ->add_option("--paths", oc_paths)->capture_default_str();
  occ->add_option("--per-path", oc_per)->capture_default_str();
  occ->add_option("--time-law", oc_law, "uniform|exponential|normal")->capture_default_str();

  auto* lt = app.add_subcommand("local-time", "histogram local-time estimate of one path");
  int lt_n = 10;
  std::size_t lt_samples = 1000000, lt_bins = 100;
  bool lt_dump = false;
  overlay(g.config, "local_time", "n", lt_n);
  overlay(g.config, "local_time", "samples", lt_samples);
  overlay(g.config, "local_time", "bins", lt_bins);
  lt->add_option("--n", lt_n)->capture_default_str();
  lt->add_option("--samples", lt_samples)->capture_default_str();
  lt->add_option("--bins", lt_bins)->capture_default_str();
  lt->add_flag("--dump-knots", lt_dump, "dump per-level knots CSVs");

  auto* fr = app.add_subcommand("fourier", "ECF second-moment sweep vs 4/(4+xi^2)");
  int fr_n = 10;
  std::size_t fr_replicas = 2000, fr_points = 200;
  std::string fr_xis = "0,1,2,5";
  double fr_tol = 0.02;
  overlay(g.config, "fourier", "n", fr_n);
  overlay(g.config, "fourier", "replicas", fr_replicas);
  overlay(g.config, "fourier", "points", fr_points);
  overlay(g.config, "fourier", "xis", fr_xis);
  overlay(g.config, "fourier", "tol", fr_tol);
  fr->add_option("--n", fr_n)->capture_default_str();
  fr->add_option("--replicas", fr_replicas)->capture_default_str();
  fr->add_option("--points", fr_points)->capture_default_str();
  fr->add_option("--xis", fr_xis, "comma-separated frequencies")->capture_default_str();
  fr->add_option("--tol", fr_tol)->capture_default_str();

  auto* osc = app.add_subcommand("oscillation", "grid oscillation vs limit product law");
  int os_n = 8, os_terms = kDefaultProductTerms;
  std::size_t os_grid = (1u << 14) + 1, os_replicas = 10000;
  double os_threshold = 0.05;
  overlay(g.config, "oscillation", "n", os_n);
  overlay(g.config, "oscillation", "grid", os_grid);
  overlay(g.config, "oscillation", "replicas", os_replicas);
  overlay(g.config, "oscillation", "terms", os_terms);
  overlay(g.config, "oscillation", "threshold", os_threshold);
  osc->add_option("--n", os_n)->capture_default_str();
  osc->add_option("--grid", os_grid, "grid points")->capture_default_str();
  osc->add_option("--replicas", os_replicas)->capture_default_str();
  osc->add_option("--terms", os_terms)->capture_default_str();
  osc->add_option("--threshold", os_threshold)->capture_default_str();

  auto* var = app.add_subcommand("variation", "dyadic p-variation across levels");
  int va_n = 2, va_lo = 8, va_hi = 14;
  std::string va_orders = "2,4";
  std::size_t va_paths = 100;
  overlay(g.config, "variation", "n", va_n);
  overlay(g.config, "variation", "orders", va_orders);
  overlay(g.config, "variation", "lo_level", va_lo);
  overlay(g.config, "variation", "hi_level", va_hi);
  overlay(g.config, "variation", "paths", va_paths);
  var->add_option("--n", va_n)->capture_default_str();
  var->add_option("--orders", va_orders)->capture_default_str();
  var->add_option("--lo-level", va_lo)->capture_default_str();
  var->add_option("--hi-level", va_hi)->capture_default_str();
  var->add_option("--paths", va_paths)->capture_default_str();

  auto* dr = app.add_subcommand("drift", "Lyapunov drift at random high-V states");
  std::size_t dr_p = 2, dr_states = 20, dr_replicas = 4000;
  overlay(g.config, "drift", "p", dr_p);
  overlay(g.config, "drift", "states", dr_states);
  overlay(g.config, "drift", "replicas", dr_replicas);
  dr->add_option("--p", dr_p)->capture_default_str();
  dr->add_option("--states", dr_states)->capture_default_str();
  dr->add_option("--replicas", dr_replicas)->capture_default_str();

  auto* fp = app.add_subcommand("fixed-point", "two-sample KS for X =d sqrt(X)|N|");
  std::size_t fp_m = 100000;
  double fp_threshold = 0.01;
  overlay(g.config, "fixed_point", "m", fp_m);
  overlay(g.config, "fixed_point", "threshold", fp_threshold);
  fp->add_option("--m", fp_m)->capture_default_str();
  fp->add_option("--threshold", fp_threshold)->capture_default_str();

  auto* sc = app.add_subcommand("selfcheck", "run the full acceptance suite");
  std::string sc_only;
  sc->add_option("--only", sc_only, "comma-separated criterion ids");

  // global flags may appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (marginal->parsed()) return run_marginal(g, ma_n, ma_samples, ma_threshold);
    if (nup->parsed()) return run_nu_p(g, np_steps, np_samples, np_start);
    if (seastar->parsed()) return run_seastar(g, ss_steps, ss_samples);
    if (occ->parsed()) return run_occupation(g, oc_n, oc_paths, oc_per, oc_law);
    if (lt->parsed()) return run_local_time(g, lt_n, lt_samples, lt_bins, lt_dump);
    if (fr->parsed()) return run_fourier(g, fr_n, fr_replicas, fr_points, fr_xis, fr_tol);
    if (osc->parsed()) return run_oscillation(g, os_n, os_grid, os_replicas, os_terms, os_threshold);
    if (var->parsed()) return run_variation(g, va_n, va_orders, va_lo, va_hi, va_paths);
    if (dr->parsed()) return run_drift(g, dr_p, dr_states, dr_replicas);
    if (fp->parsed()) return run_fixed_point(g, fp_m, fp_threshold);
    if (sc->parsed()) return run_selfcheck(g, sc_only);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
