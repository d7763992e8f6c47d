#pragma once
// Occupation-measure statistics of W_n: sampled occupation draws, histogram
// local-time estimates, the empirical characteristic function, oscillations
// and p-variations.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "itbm/iterate.hpp"
#include "itbm/rng.hpp"

namespace itbm {

// Sampling time law: quantile transform applied to uniform draws. Must be
// non-atomic for the occupation interpretation; uniform on [0,1] by default.
struct TimeLaw {
  std::string name;
  std::function<double(double)> quantile;  // u in [0,1) -> t
};

TimeLaw uniform_time_law();
TimeLaw exponential_time_law();  // rate 1
TimeLaw normal_time_law();       // standard normal

// W_n(t_1), ..., W_n(t_m) for i.i.d. t_j from the time law, all on ONE
// fresh IteratedPath: conditionally on the path these are i.i.d. draws from
// the occupation measure mu_n. Streams used: first_stream + 0..n-1 for the
// levels, first_stream + n for the time draws.
std::vector<double> occupation_samples(int n_iter, std::size_t m,
                                       std::uint64_t seed,
                                       std::uint64_t first_stream,
                                       const TimeLaw& law = uniform_time_law());

struct OccupationEstimate {
  std::vector<double> bin_edges;  // bins + 1 ascending edges
  std::vector<double> masses;     // nonnegative, sums to 1
  std::size_t sample_count = 0;
  double support_lo = 0.0;
  double support_hi = 0.0;
  bool degenerate = false;  // all samples equal: single-bin estimate

  double total_mass() const;
};

// Equal-width histogram over [min, max] of the samples, masses normalized.
OccupationEstimate local_time_estimate(std::span<const double> samples,
                                       std::size_t bins);

// L1 distance between the piecewise-constant densities of two estimates,
// computed exactly on the merged edge grid.
double l1_distance(const OccupationEstimate& a, const OccupationEstimate& b);

// Mean over replicas of the pair-averaged |ECF|^2 of mu_n at frequency xi:
// per replica one fresh path, m time draws, U-statistic over distinct pairs
// (removes the +1/m diagonal bias), compensated summation across replicas.
double fourier_second_moment(double xi, int n_iter, std::size_t replicas,
                             std::size_t m_per_replica, std::uint64_t seed,
                             std::uint64_t experiment, unsigned workers = 1);

// max - min of W_n over a uniform grid of grid_size points on [0, t], one
// fresh IteratedPath on streams first_stream + 0..n-1.
double oscillation_on_grid(int n_iter, double t, std::size_t grid_size,
                           std::uint64_t seed, std::uint64_t first_stream);

// For ONE path, sum_j |W_n((j+1)/2^k) - W_n(j/2^k)|^order at each dyadic
// level k in grid_levels (ascending); the same path and cached values are
// shared across levels.
std::vector<double> p_variation(int n_iter, double order,
                                std::span<const int> grid_levels,
                                std::uint64_t seed, std::uint64_t first_stream);

}  // namespace itbm
