#pragma once
// Reference distributions, goodness-of-fit tests, and the Lyapunov drift
// diagnostics that turn the chain's stability argument into measurable
// checks.

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "itbm/report.hpp"
#include "itbm/rng.hpp"

namespace itbm {

// CDF of the signed exponential +-E(lambda), density lambda/2 * e^{-lambda|x|}
// (for lambda = 2 the density is exactly e^{-2|x|}).
double signed_exp_cdf(double x, double lambda);

struct SignedExponential {
  double lambda = 2.0;
  double cdf(double x) const { return signed_exp_cdf(x, lambda); }
};

// Asymptotic Kolmogorov survival function Q(x) = 2 sum (-1)^{k-1} e^{-2k^2x^2}.
double kolmogorov_sf(double x);

// One- and two-sample Kolmogorov-Smirnov. Pass iff statistic < threshold;
// the p-value is the asymptotic approximation (informational only, the
// acceptance thresholds are on D itself).
TestReport ks_one_sample(std::span<const double> samples,
                         const std::function<double(double)>& cdf,
                         double threshold, std::string name);
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double threshold, std::string name);

// V(x) = max_i |x_i| + sum_{0<=i<j<=p} |x_i - x_j|^{-1/2} with x_0 := 0.
// Throws std::invalid_argument when V is infinite (zero or coincident
// coordinates).
double lyapunov_V(std::span<const double> x);

// M^{-1} <= sup_i |x_i| <= M and min_{i != j} |x_i - x_j| >= M^{-1}.
bool is_M_sparse(std::span<const double> x, double M);

// E|N|^a = 2^{a/2} Gamma((a+1)/2) / Gamma(1/2) for a > -1.
double gaussian_abs_moment(double a);

struct DriftEstimate {
  double v_start = 0.0;    // V(x)
  double e_v_next = 0.0;   // Monte Carlo E_x[V(W_1)]
  double drift = 0.0;      // e_v_next - v_start
  double std_error = 0.0;  // from batch means
  std::size_t replicas = 0;
  std::size_t batches = 0;
};

// Monte Carlo drift DV(x) with a batch-mean standard error (>= 30 batches).
DriftEstimate drift_estimate(std::span<const double> x, std::size_t replicas,
                             RngStream& rng);

// C_1 = E[max_{[-1,1]} |B|], estimated on a 2^16 grid with 1e4 replicas and
// cached per (seed); C_2 = p E|N|^{-1/2}; C_3 = 2 max(C_1, C_2).
double c1_max_abs_bm(std::uint64_t seed);
double c3_drift_bound(std::size_t p, std::uint64_t seed);

}  // namespace itbm
