#pragma once
// Iterated Brownian motion W_n = B_n ∘ ... ∘ B_1, the induced Markov chain on
// p-uplets, and direct samplers for the limit laws that have a closed product
// form.

#include <cstdint>
#include <span>
#include <vector>

#include "itbm/brownian.hpp"
#include "itbm/report.hpp"
#include "itbm/rng.hpp"

namespace itbm {

// Documented defaults: 12 chain steps and 30 product terms push the
// remaining truncation error far below the Monte Carlo noise at the sample
// sizes used here (the product exponents halve every term).
inline constexpr int kDefaultChainSteps = 12;
inline constexpr int kDefaultProductTerms = 30;

class IteratedPath {
 public:
  // n_levels independent lazy paths on streams first_stream + 0..n_levels-1.
  IteratedPath(int n_levels, std::uint64_t seed, std::uint64_t first_stream);

  // W_n(t) = B_n(...B_1(t)...). Cached per level, so re-queries agree.
  double evaluate(double t);

  // Joint evaluation of W_n over a query set (same law as repeated
  // evaluate(), levels answer in value order).
  std::vector<double> evaluate_batch(std::span<const double> ts);

  int levels() const { return static_cast<int>(levels_.size()); }
  LazyBrownianPath& level(int i) { return levels_.at(static_cast<std::size_t>(i)); }

 private:
  std::vector<LazyBrownianPath> levels_;
};

// Membership in R^p: pairwise distinct nonzero coordinates.
bool is_point_vector(std::span<const double> x);
void require_point_vector(std::span<const double> x);

// One step of the chain: (B(x_1), ..., B(x_p)) under a fresh two-sided
// Brownian motion, sampled jointly. An exact floating-point collision among
// the outputs (or with zero) triggers a full redraw, keeping the state in
// R^p. Throws std::invalid_argument if x is not in R^p.
std::vector<double> chain_step(std::span<const double> x, RngStream& rng);

// Chain state after n_steps applications of chain_step; for n_steps around
// 10 or more this approximates a draw from nu_p regardless of the start.
std::vector<double> sample_nu_p(std::span<const double> x0, int n_steps,
                                RngStream& rng);

// prod_{i<n_terms} |N_i|^{2^-i}, the modulus of the one-dimensional limit.
double sample_limit_modulus(RngStream& rng, int n_terms);

// Fair sign times the modulus: a direct sampler of the +-E(2) limit law.
// Consumes one sign draw, then n_terms normals.
double sample_limit_marginal(RngStream& rng, int n_terms);

// Two-sample KS check of the fixed-point identity X =(d) sqrt(X)|N|:
// m moduli X_j against sqrt(X_j)|N_j| with fresh normals N_j.
TestReport verify_fixed_point(RngStream& rng, std::size_t m,
                              double threshold = 0.01);

// prod_{i<n_terms} D_i^{2^-i} with D_i the oscillation of an independent
// Brownian motion over [0,1], approximated on a uniform grid of grid_size
// points: the limit law of osc(W_n; [0,t]).
double sample_limit_oscillation(RngStream& rng, int n_terms,
                                std::size_t grid_size);

}  // namespace itbm
