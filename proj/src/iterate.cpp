#include "itbm/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "itbm/analysis.hpp"
#include "itbm/kernels.hpp"

namespace itbm {

IteratedPath::IteratedPath(int n_levels, std::uint64_t seed,
                           std::uint64_t first_stream) {
  if (n_levels < 1) throw std::invalid_argument("IteratedPath: need n >= 1");
  levels_.reserve(static_cast<std::size_t>(n_levels));
  for (int i = 0; i < n_levels; ++i) {
    levels_.emplace_back(RngStream(seed, first_stream + static_cast<std::uint64_t>(i)));
  }
}

double IteratedPath::evaluate(double t) {
  double v = t;
  for (auto& level : levels_) v = level.evaluate(v);
  return v;
}

std::vector<double> IteratedPath::evaluate_batch(std::span<const double> ts) {
  std::vector<double> v(ts.begin(), ts.end());
  for (auto& level : levels_) {
    std::vector<double> next(v.size());
    level.evaluate_batch(v, next);
    v = std::move(next);
  }
  return v;
}

bool is_point_vector(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || x[i] == 0.0) return false;
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[i] == x[j]) return false;
    }
  }
  return true;
}

void require_point_vector(std::span<const double> x) {
  if (!is_point_vector(x)) {
    throw std::invalid_argument(
        "point vector: coordinates must be finite, nonzero, pairwise distinct");
  }
}

std::vector<double> chain_step(std::span<const double> x, RngStream& rng) {
  require_point_vector(x);
  if (x.empty()) return {};
  for (;;) {
    std::vector<double> y = bm_images(x, rng);
    if (is_point_vector(y)) return y;
    // exact collision (probability ~0): redraw the whole step
  }
}

std::vector<double> sample_nu_p(std::span<const double> x0, int n_steps,
                                RngStream& rng) {
  if (n_steps < 1) throw std::invalid_argument("sample_nu_p: need n_steps >= 1");
  std::vector<double> state = chain_step(x0, rng);
  for (int s = 1; s < n_steps; ++s) state = chain_step(state, rng);
  return state;
}

namespace {

// prod |n_i|^{2^-i} evaluated inside-out as nested square roots
double modulus_product(std::span<const double> normals) {
  double r = std::fabs(normals.back());
  for (std::size_t i = normals.size() - 1; i-- > 0;) {
    r = std::fabs(normals[i]) * std::sqrt(r);
  }
  return r;
}

}  // namespace

double sample_limit_modulus(RngStream& rng, int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("need n_terms >= 1");
  std::vector<double> normals(static_cast<std::size_t>(n_terms));
  rng.fill_normals(normals);
  return modulus_product(normals);
}

double sample_limit_marginal(RngStream& rng, int n_terms) {
  const double sign = rng.sign();
  return sign * sample_limit_modulus(rng, n_terms);
}

TestReport verify_fixed_point(RngStream& rng, std::size_t m, double threshold) {
  if (m < 10000) throw std::invalid_argument("verify_fixed_point: need m >= 1e4");
  std::vector<double> lhs(m), rhs(m), normals(m);
  for (std::size_t i = 0; i < m; ++i) {
    lhs[i] = sample_limit_modulus(rng, kDefaultProductTerms);
  }
  rng.fill_normals(normals);
  for (std::size_t i = 0; i < m; ++i) {
    rhs[i] = std::sqrt(lhs[i]) * std::fabs(normals[i]);
  }
  TestReport r = ks_two_sample(lhs, rhs, threshold, "fixed_point_E");
  r.seeds = {rng.seed()};
  return r;
}

double sample_limit_oscillation(RngStream& rng, int n_terms,
                                std::size_t grid_size) {
  if (n_terms < 1) throw std::invalid_argument("need n_terms >= 1");
  if (grid_size < 2) throw std::invalid_argument("need grid_size >= 2");
  const std::size_t steps = grid_size - 1;
  const double scale = std::sqrt(1.0 / static_cast<double>(steps));
  std::vector<double> normals(steps);
  std::vector<double> walk(steps);
  std::vector<double> oscs(static_cast<std::size_t>(n_terms));
  for (int i = 0; i < n_terms; ++i) {
    rng.fill_normals(normals);
    double v = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
      v += scale * normals[j];
      walk[j] = v;
    }
    double lo, hi;
    kern::minmax(walk.data(), steps, lo, hi);
    lo = lo < 0.0 ? lo : 0.0;  // the grid includes the start point B(0) = 0
    hi = hi > 0.0 ? hi : 0.0;
    oscs[static_cast<std::size_t>(i)] = hi - lo;
  }
  return modulus_product(oscs);
}

}  // namespace itbm
