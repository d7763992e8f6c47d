#include "itbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "itbm/iterate.hpp"
#include "itbm/kernels.hpp"
#include "itbm/summation.hpp"

namespace itbm {

double signed_exp_cdf(double x, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("signed_exp_cdf: lambda <= 0");
  if (x < 0.0) return 0.5 * std::exp(lambda * x);
  return 1.0 - 0.5 * std::exp(-lambda * x);
}

double kolmogorov_sf(double x) {
  if (x <= 0.05) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k & 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * s));
}

namespace {

double stephens_p(double d, double n_eff) {
  const double rn = std::sqrt(n_eff);
  return kolmogorov_sf(d * (rn + 0.12 + 0.11 / rn));
}

}  // namespace

TestReport ks_one_sample(std::span<const double> samples,
                         const std::function<double(double)>& cdf,
                         double threshold, std::string name) {
  if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty input");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  TestReport r;
  r.name = std::move(name);
  r.statistic = d;
  r.threshold = threshold;
  r.p_value_approx = stephens_p(d, n);
  r.pass = d < threshold;
  r.sample_sizes = {s.size()};
  return r;
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double threshold, std::string name) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty input");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  TestReport r;
  r.name = std::move(name);
  r.statistic = d;
  r.threshold = threshold;
  r.p_value_approx = stephens_p(d, na * nb / (na + nb));
  r.pass = d < threshold;
  r.sample_sizes = {sa.size(), sb.size()};
  return r;
}

double lyapunov_V(std::span<const double> x) {
  require_point_vector(x);
  double vmax = 0.0;
  for (double xi : x) vmax = std::max(vmax, std::fabs(xi));
  // pair sum over the augmented vector (0, x_1, ..., x_p)
  double g = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    g += 1.0 / std::sqrt(std::fabs(x[i]));  // |x_0 - x_i| with x_0 = 0
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      g += 1.0 / std::sqrt(std::fabs(x[i] - x[j]));
    }
  }
  return vmax + g;
}

bool is_M_sparse(std::span<const double> x, double M) {
  if (!(M > 1.0)) throw std::invalid_argument("is_M_sparse: need M > 1");
  double sup = 0.0;
  for (double xi : x) sup = std::max(sup, std::fabs(xi));
  if (sup < 1.0 / M || sup > M) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (std::fabs(x[i] - x[j]) < 1.0 / M) return false;
    }
  }
  return true;
}

double gaussian_abs_moment(double a) {
  if (!(a > -1.0)) throw std::invalid_argument("gaussian_abs_moment: need a > -1");
  return std::pow(2.0, 0.5 * a) * std::tgamma(0.5 * (a + 1.0)) /
         std::tgamma(0.5);
}

DriftEstimate drift_estimate(std::span<const double> x, std::size_t replicas,
                             RngStream& rng) {
  if (replicas < 100) throw std::invalid_argument("drift_estimate: need replicas >= 100");
  const double v0 = lyapunov_V(x);
  const std::size_t batches = 30;
  std::vector<double> batch_means;
  batch_means.reserve(batches);
  NeumaierSum total;
  std::size_t done = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t n_b = (replicas * (b + 1)) / batches - done;
    NeumaierSum bs;
    for (std::size_t r = 0; r < n_b; ++r) {
      const std::vector<double> y = chain_step(x, rng);
      bs.add(lyapunov_V(y));
    }
    done += n_b;
    total.add(bs.value());
    batch_means.push_back(bs.value() / static_cast<double>(n_b));
  }
  const double mean = total.value() / static_cast<double>(replicas);
  double var = 0.0;
  const double bm = kern::sum(batch_means.data(), batch_means.size()) /
                    static_cast<double>(batches);
  for (double m : batch_means) var += (m - bm) * (m - bm);
  var /= static_cast<double>(batches - 1);
  DriftEstimate d;
  d.v_start = v0;
  d.e_v_next = mean;
  d.drift = mean - v0;
  d.std_error = std::sqrt(var / static_cast<double>(batches));
  d.replicas = replicas;
  d.batches = batches;
  return d;
}

namespace {
constexpr std::uint64_t kConstantsExperiment = 0xC1;
}

double c1_max_abs_bm(std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::uint64_t, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(seed); it != cache.end()) return it->second;
  }
  // grid 2^16 over [-1,1]: 2^15 steps per half-line, 1e4 replicas
  constexpr std::size_t kHalf = std::size_t{1} << 15;
  constexpr std::size_t kReplicas = 10000;
  const double scale = std::sqrt(1.0 / static_cast<double>(kHalf));
  std::vector<double> normals(2 * kHalf);
  NeumaierSum acc;
  for (std::size_t r = 0; r < kReplicas; ++r) {
    RngStream s(seed, stream_id(kConstantsExperiment, r, 0));
    s.fill_normals(normals);
    double m = 0.0, v = 0.0;
    for (std::size_t j = 0; j < kHalf; ++j) {  // positive half
      v += scale * normals[j];
      const double a = std::fabs(v);
      m = a > m ? a : m;
    }
    v = 0.0;
    for (std::size_t j = kHalf; j < 2 * kHalf; ++j) {  // negative half
      v += scale * normals[j];
      const double a = std::fabs(v);
      m = a > m ? a : m;
    }
    acc.add(m);
  }
  const double c1 = acc.value() / static_cast<double>(kReplicas);
  std::lock_guard<std::mutex> lock(mu);
  cache[seed] = c1;
  return c1;
}

double c3_drift_bound(std::size_t p, std::uint64_t seed) {
  const double c1 = c1_max_abs_bm(seed);
  const double c2 = static_cast<double>(p) * gaussian_abs_moment(-0.5);
  return 2.0 * std::max(c1, c2);
}

}  // namespace itbm
