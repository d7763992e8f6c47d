#include "itbm/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "itbm/kernels.hpp"
#include "itbm/parallel.hpp"
#include "itbm/summation.hpp"

namespace itbm {

TimeLaw uniform_time_law() {
  return {"uniform01", [](double u) { return u; }};
}

TimeLaw exponential_time_law() {
  return {"exponential", [](double u) { return -std::log1p(-u); }};
}

TimeLaw normal_time_law() {
  // u = 0 is clamped into (0,1) so the quantile stays finite
  return {"normal", [](double u) {
            return kern::normal_quantile(u == 0.0 ? 0x1p-53 : u);
          }};
}

std::vector<double> occupation_samples(int n_iter, std::size_t m,
                                       std::uint64_t seed,
                                       std::uint64_t first_stream,
                                       const TimeLaw& law) {
  if (n_iter < 1) throw std::invalid_argument("occupation_samples: n_iter >= 1");
  if (m < 1) throw std::invalid_argument("occupation_samples: m >= 1");
  RngStream times(seed, first_stream + static_cast<std::uint64_t>(n_iter));
  std::vector<double> ts(m);
  times.fill_uniform01(ts);
  for (double& t : ts) {
    t = law.quantile(t);
    if (!std::isfinite(t)) {
      throw std::invalid_argument("occupation_samples: time law produced a non-finite time");
    }
  }
  IteratedPath path(n_iter, seed, first_stream);
  return path.evaluate_batch(ts);
}

double OccupationEstimate::total_mass() const {
  NeumaierSum s;
  for (double m : masses) s.add(m);
  return s.value();
}

OccupationEstimate local_time_estimate(std::span<const double> samples,
                                       std::size_t bins) {
  if (samples.empty()) throw std::invalid_argument("local_time_estimate: empty input");
  if (bins < 2) throw std::invalid_argument("local_time_estimate: bins >= 2");
  double lo, hi;
  kern::minmax(samples.data(), samples.size(), lo, hi);
  OccupationEstimate est;
  est.sample_count = samples.size();
  est.support_lo = lo;
  est.support_hi = hi;
  if (lo == hi) {
    est.degenerate = true;
    est.bin_edges = {lo, hi};
    est.masses = {1.0};
    return est;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  est.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    est.bin_edges[i] = lo + static_cast<double>(i) * width;
  }
  est.bin_edges.back() = hi;
  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    if (b >= bins) b = bins - 1;  // x == hi lands in the last bin
    ++counts[b];
  }
  est.masses.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    est.masses[i] = static_cast<double>(counts[i]) /
                    static_cast<double>(samples.size());
  }
  return est;
}

double l1_distance(const OccupationEstimate& a, const OccupationEstimate& b) {
  // merge both edge sets; densities are piecewise constant between edges
  std::vector<double> edges;
  edges.reserve(a.bin_edges.size() + b.bin_edges.size());
  edges.insert(edges.end(), a.bin_edges.begin(), a.bin_edges.end());
  edges.insert(edges.end(), b.bin_edges.begin(), b.bin_edges.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  auto density_at = [](const OccupationEstimate& e, double x) {
    if (e.degenerate || x < e.bin_edges.front() || x >= e.bin_edges.back()) {
      return 0.0;
    }
    const auto it =
        std::upper_bound(e.bin_edges.begin(), e.bin_edges.end(), x);
    const std::size_t bin =
        static_cast<std::size_t>(it - e.bin_edges.begin()) - 1;
    const double w = e.bin_edges[bin + 1] - e.bin_edges[bin];
    return e.masses[bin] / w;
  };

  NeumaierSum s;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    s.add(std::fabs(density_at(a, mid) - density_at(b, mid)) *
          (edges[i + 1] - edges[i]));
  }
  return s.value();
}

double fourier_second_moment(double xi, int n_iter, std::size_t replicas,
                             std::size_t m_per_replica, std::uint64_t seed,
                             std::uint64_t experiment, unsigned workers) {
  if (replicas < 1) throw std::invalid_argument("fourier_second_moment: replicas >= 1");
  if (m_per_replica < 2) throw std::invalid_argument("fourier_second_moment: m >= 2");
  const int n = n_iter;
  const double m = static_cast<double>(m_per_replica);
  std::vector<double> per_replica(replicas);
  parallel_for(replicas, workers, [&](std::size_t r) {
    const std::vector<double> w = occupation_samples(
        n, m_per_replica, seed,
        stream_id(experiment, static_cast<std::uint64_t>(r), 0));
    double sc = 0.0, ss = 0.0;
    for (double v : w) {
      sc += std::cos(xi * v);
      ss += std::sin(xi * v);
    }
    per_replica[r] = (sc * sc + ss * ss - m) / (m * (m - 1.0));
  });
  NeumaierSum s;
  for (double u : per_replica) s.add(u);
  return s.value() / static_cast<double>(replicas);
}

double oscillation_on_grid(int n_iter, double t, std::size_t grid_size,
                           std::uint64_t seed, std::uint64_t first_stream) {
  if (!(t > 0.0)) throw std::invalid_argument("oscillation_on_grid: t > 0");
  if (grid_size < 2) throw std::invalid_argument("oscillation_on_grid: grid_size >= 2");
  std::vector<double> ts(grid_size);
  const double step = t / static_cast<double>(grid_size - 1);
  for (std::size_t j = 0; j < grid_size; ++j) {
    ts[j] = static_cast<double>(j) * step;
  }
  ts.back() = t;
  IteratedPath path(n_iter, seed, first_stream);
  const std::vector<double> v = path.evaluate_batch(ts);
  double lo, hi;
  kern::minmax(v.data(), v.size(), lo, hi);
  return hi - lo;
}

std::vector<double> p_variation(int n_iter, double order,
                                std::span<const int> grid_levels,
                                std::uint64_t seed,
                                std::uint64_t first_stream) {
  if (!(order > 0.0)) throw std::invalid_argument("p_variation: order > 0");
  if (grid_levels.empty()) throw std::invalid_argument("p_variation: no levels");
  for (std::size_t i = 0; i + 1 < grid_levels.size(); ++i) {
    if (grid_levels[i] >= grid_levels[i + 1]) {
      throw std::invalid_argument("p_variation: levels must ascend");
    }
  }
  if (grid_levels.front() < 0 || grid_levels.back() > 26) {
    throw std::invalid_argument("p_variation: level out of range");
  }
  const int finest = grid_levels.back();
  const std::size_t n_pts = (std::size_t{1} << finest) + 1;
  std::vector<double> ts(n_pts);
  const double step = 1.0 / static_cast<double>(std::size_t{1} << finest);
  for (std::size_t j = 0; j < n_pts; ++j) {
    ts[j] = static_cast<double>(j) * step;
  }
  IteratedPath path(n_iter, seed, first_stream);
  const std::vector<double> v = path.evaluate_batch(ts);

  std::vector<double> out;
  out.reserve(grid_levels.size());
  std::vector<double> scratch;
  for (int k : grid_levels) {
    const std::size_t stride = std::size_t{1} << (finest - k);
    const std::size_t pts = (std::size_t{1} << k) + 1;
    scratch.resize(pts);
    for (std::size_t j = 0; j < pts; ++j) scratch[j] = v[j * stride];
    out.push_back(kern::power_sum_diff(scratch.data(), pts, order));
  }
  return out;
}

}  // namespace itbm
