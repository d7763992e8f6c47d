#include "itbm/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace itbm {

namespace {

void require_finite(double t) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument("brownian: non-finite time");
  }
}

}  // namespace

std::vector<double> bm_images(std::span<const double> points, RngStream& rng) {
  const std::size_t m = points.size();
  std::vector<double> out(m);
  if (m == 0) return out;
  for (double p : points) require_finite(p);

  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return points[a] < points[b] || (points[a] == points[b] && a < b);
  });

  std::vector<double> normals(m);
  rng.fill_normals(normals);

  // walk the sorted points with the origin appended as anchor
  std::vector<double> ts(m);
  for (std::size_t i = 0; i < m; ++i) ts[i] = points[order[i]];
  const std::size_t z = static_cast<std::size_t>(
      std::lower_bound(ts.begin(), ts.end(), 0.0) - ts.begin());

  std::vector<double> vs(m);
  double v = 0.0, prev = 0.0;
  for (std::size_t i = z; i < m; ++i) {  // rightward from 0
    v += std::sqrt(ts[i] - prev) * normals[i];
    prev = ts[i];
    vs[i] = v;
  }
  v = 0.0;
  prev = 0.0;
  for (std::size_t i = z; i-- > 0;) {  // leftward from 0
    v -= std::sqrt(prev - ts[i]) * normals[i];
    prev = ts[i];
    vs[i] = v;
  }
  for (std::size_t i = 0; i < m; ++i) out[order[i]] = vs[i];
  return out;
}

LazyBrownianPath::LazyBrownianPath(RngStream rng)
    : times_{0.0}, values_{0.0}, rng_(rng) {}

double LazyBrownianPath::draw_at(double t, std::size_t pos) {
  if (pos == 0) {
    return values_.front() + std::sqrt(times_.front() - t) * rng_.normal();
  }
  if (pos == times_.size()) {
    return values_.back() + std::sqrt(t - times_.back()) * rng_.normal();
  }
  const double tl = times_[pos - 1], tr = times_[pos];
  const double vl = values_[pos - 1], vr = values_[pos];
  const double w = (t - tl) / (tr - tl);
  const double mean = vl + w * (vr - vl);
  const double var = (t - tl) * (tr - t) / (tr - tl);
  return mean + std::sqrt(var) * rng_.normal();
}

double LazyBrownianPath::evaluate(double t) {
  require_finite(t);
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const std::size_t pos = static_cast<std::size_t>(it - times_.begin());
  if (pos < times_.size() && times_[pos] == t) return values_[pos];
  const double v = draw_at(t, pos);
  times_.insert(times_.begin() + static_cast<std::ptrdiff_t>(pos), t);
  values_.insert(values_.begin() + static_cast<std::ptrdiff_t>(pos), v);
  return v;
}

void LazyBrownianPath::evaluate_batch(std::span<const double> ts,
                                      std::span<double> out) {
  const std::size_t m = ts.size();
  if (out.size() != m) {
    throw std::invalid_argument("evaluate_batch: output size mismatch");
  }
  if (m == 0) return;
  for (double t : ts) require_finite(t);

  // queries in time order; ties broken by position to keep replays identical
  struct Q {
    double t;
    std::uint32_t idx;
  };
  std::vector<Q> qs(m);
  bool presorted = true;
  for (std::size_t j = 0; j < m; ++j) {
    qs[j] = {ts[j], static_cast<std::uint32_t>(j)};
    if (j > 0 && ts[j] < ts[j - 1]) presorted = false;
  }
  if (!presorted) {
    std::sort(qs.begin(), qs.end(), [](const Q& a, const Q& b) {
      return a.t < b.t || (a.t == b.t && a.idx < b.idx);
    });
  }

  // count fresh knots, then draw their normals in one bulk fill
  std::size_t draws = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (j > 0 && qs[j].t == qs[j - 1].t) continue;
    if (std::binary_search(times_.begin(), times_.end(), qs[j].t)) continue;
    ++draws;
  }
  std::vector<double> normals(draws);
  rng_.fill_normals(normals);
  std::size_t next_normal = 0;

  const std::size_t k = times_.size();
  std::vector<double> nt, nv;
  nt.reserve(k + draws);
  nv.reserve(k + draws);

  std::size_t i = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double t = qs[j].t;
    while (i < k && times_[i] < t) {
      nt.push_back(times_[i]);
      nv.push_back(values_[i]);
      ++i;
    }
    double v;
    if (i < k && times_[i] == t) {
      v = values_[i];  // existing knot; emitted by the merge loop later
    } else if (!nt.empty() && nt.back() == t) {
      v = nv.back();  // duplicate query
    } else {
      if (nt.empty()) {  // below every existing knot
        v = values_.front() +
            std::sqrt(times_.front() - t) * normals[next_normal++];
      } else if (i == k) {  // above every knot placed so far
        v = nv.back() + std::sqrt(t - nt.back()) * normals[next_normal++];
      } else {  // bridge between the last placed knot and the next old one
        const double tl = nt.back(), vl = nv.back();
        const double tr = times_[i], vr = values_[i];
        const double w = (t - tl) / (tr - tl);
        const double var = (t - tl) * (tr - t) / (tr - tl);
        v = vl + w * (vr - vl) + std::sqrt(var) * normals[next_normal++];
      }
      nt.push_back(t);
      nv.push_back(v);
    }
    out[qs[j].idx] = v;
  }
  while (i < k) {
    nt.push_back(times_[i]);
    nv.push_back(values_[i]);
    ++i;
  }
  times_ = std::move(nt);
  values_ = std::move(nv);
}

std::vector<double> LazyBrownianPath::evaluate_batch(
    std::span<const double> ts) {
  std::vector<double> out(ts.size());
  evaluate_batch(ts, out);
  return out;
}

void LazyBrownianPath::dump_knots_csv(std::ostream& os) const {
  os << "time,value\n";
  char buf[64];
  for (std::size_t i = 0; i < times_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", times_[i], values_[i]);
    os << buf;
  }
}

}  // namespace itbm
