#pragma once
// Lazily materialized two-sided Brownian motion.
//
// A path keeps every answered query as a knot, pinned at (0, 0). Point
// queries condition on the neighboring knots only (Markov property), so the
// joint law of any query set does not depend on query order. Batch queries
// are answered in time order, which changes the realized values relative to
// one-at-a-time evaluation but not the joint law.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "itbm/rng.hpp"

namespace itbm {

// Images (B(p_1), ..., B(p_m)) of one fresh two-sided Brownian motion,
// sampled jointly: sort, walk outward from the origin with Gaussian
// increments of variance equal to the gaps, un-sort. Duplicate points
// receive equal values. One normal draw is consumed per point, in sorted
// order.
std::vector<double> bm_images(std::span<const double> points, RngStream& rng);

class LazyBrownianPath {
 public:
  explicit LazyBrownianPath(RngStream rng);

  // B(t). Caches the answer; re-queries return the cached value and draw
  // nothing. Throws std::invalid_argument for non-finite t.
  double evaluate(double t);

  // Same joint law as mapping evaluate() over ts in order; queries are
  // answered in time order and duplicates resolve to one knot.
  void evaluate_batch(std::span<const double> ts, std::span<double> out);
  std::vector<double> evaluate_batch(std::span<const double> ts);

  std::size_t knot_count() const { return times_.size(); }
  std::span<const double> knot_times() const { return times_; }
  std::span<const double> knot_values() const { return values_; }

  // "time,value" rows, ascending time, 17 significant digits.
  void dump_knots_csv(std::ostream& os) const;

 private:
  double draw_at(double t, std::size_t pos);

  // parallel arrays, times strictly ascending, always containing (0, 0)
  std::vector<double> times_;
  std::vector<double> values_;
  RngStream rng_;
};

}  // namespace itbm
