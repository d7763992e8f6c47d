#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "itbm/analysis.hpp"
#include "itbm/brownian.hpp"
#include "itbm/rng.hpp"
#include "itbm/summation.hpp"

using namespace itbm;

namespace {

double mean(const std::vector<double>& x) {
  NeumaierSum s;
  for (double v : x) s.add(v);
  return s.value() / static_cast<double>(x.size());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

constexpr std::uint64_t kSeed = 42;

}  // namespace

TEST_SUITE("brownian") {

TEST_CASE("pinned at the origin and cache-consistent") {
  LazyBrownianPath p(RngStream(kSeed, 1));
  CHECK(p.evaluate(0.0) == 0.0);
  const double v = p.evaluate(0.7);
  CHECK(p.evaluate(0.7) == v);
  CHECK(p.knot_count() == 2);
  CHECK_THROWS_AS(p.evaluate(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(p.evaluate(INFINITY), std::invalid_argument);
}

TEST_CASE("covariance structure of the point oracle") {
  const std::size_t n = 100000;
  std::vector<double> v3(n), v8(n), v1(n), vm(n);
  for (std::size_t r = 0; r < n; ++r) {
    LazyBrownianPath p(RngStream(kSeed, stream_id(40, r, 0)));
    v3[r] = p.evaluate(0.3);
    v8[r] = p.evaluate(0.8);
    v1[r] = p.evaluate(1.0);
    vm[r] = p.evaluate(-0.5);
  }
  std::vector<double> p38(n), sq(n), pneg(n);
  for (std::size_t i = 0; i < n; ++i) {
    p38[i] = v3[i] * v8[i];
    sq[i] = v1[i] * v1[i];
    pneg[i] = vm[i] * v8[i];
  }
  CHECK(mean(p38) - mean(v3) * mean(v8) == doctest::Approx(0.3).epsilon(0.07));
  CHECK(mean(sq) == doctest::Approx(1.0).epsilon(0.02));
  // independent half-lines: 0 +- 3/sqrt(replicas)
  CHECK(std::fabs(mean(pneg) - mean(vm) * mean(v8)) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("increments of fresh queries are gaussian") {
  const std::size_t n = 10000;
  std::vector<double> z(n);
  for (std::size_t r = 0; r < n; ++r) {
    LazyBrownianPath p(RngStream(kSeed, stream_id(41, r, 0)));
    const double a = p.evaluate(0.3);
    const double b = p.evaluate(0.5);
    z[r] = (b - a) / std::sqrt(0.2);
  }
  const auto rep = ks_one_sample(z, normal_cdf, 0.02, "incr");
  CHECK(rep.pass);
}

TEST_CASE("bridge consistency: query order does not change the law") {
  const std::size_t n = 10000;
  std::vector<double> direct(n), bridged(n);
  for (std::size_t r = 0; r < n; ++r) {
    LazyBrownianPath pa(RngStream(kSeed, stream_id(42, r, 0)));
    direct[r] = pa.evaluate(0.5);
    LazyBrownianPath pb(RngStream(kSeed, stream_id(42, r, 1)));
    pb.evaluate(0.25);
    pb.evaluate(0.75);
    bridged[r] = pb.evaluate(0.5);
  }
  const auto rep = ks_two_sample(direct, bridged, 0.02, "order");
  CHECK(rep.pass);
}

TEST_CASE("evaluate_batch basics") {
  LazyBrownianPath p(RngStream(kSeed, 5));
  const double ts0[] = {0.0};
  CHECK(p.evaluate_batch(ts0)[0] == 0.0);

  const double dup[] = {0.4, 0.9, 0.4, -0.2, 0.9};
  const auto v = p.evaluate_batch(dup);
  CHECK(v[0] == v[2]);
  CHECK(v[1] == v[4]);
  CHECK(p.knot_count() == 4);  // 0, -0.2, 0.4, 0.9

  // re-query through batch returns cached values and draws nothing
  const auto again = p.evaluate_batch(dup);
  for (std::size_t i = 0; i < 5; ++i) CHECK(again[i] == v[i]);
}

TEST_CASE("sorted batch replays exactly as sequential evaluation") {
  LazyBrownianPath a(RngStream(kSeed, 6));
  const double ts[] = {0.2, 0.5, 0.9};
  const auto av = a.evaluate_batch(ts);
  LazyBrownianPath b(RngStream(kSeed, 6));
  CHECK(av[0] == b.evaluate(0.2));
  CHECK(av[1] == b.evaluate(0.5));
  CHECK(av[2] == b.evaluate(0.9));
}

TEST_CASE("batch and single-query mixes stay consistent") {
  LazyBrownianPath p(RngStream(kSeed, 7));
  const double first[] = {-1.0, 2.0, 0.5};
  const auto v1 = p.evaluate_batch(first);
  const double second[] = {0.5, -1.0, 3.0, -2.0, 0.25};
  const auto v2 = p.evaluate_batch(second);
  CHECK(v2[0] == v1[2]);
  CHECK(v2[1] == v1[0]);
  CHECK(p.evaluate(3.0) == v2[2]);
  CHECK(p.knot_count() == 7);
  // knots stay sorted with exact values
  const auto kt = p.knot_times();
  for (std::size_t i = 1; i < kt.size(); ++i) CHECK(kt[i - 1] < kt[i]);
}

TEST_CASE("bm_images: empty input, duplicates, covariance") {
  RngStream rng(kSeed, 8);
  CHECK(bm_images({}, rng).empty());

  const double pts[] = {0.7, -0.4, 0.7};
  const auto img = bm_images(pts, rng);
  CHECK(img[0] == img[2]);

  const std::size_t n = 100000;
  std::vector<double> a(n), b(n);
  for (std::size_t r = 0; r < n; ++r) {
    RngStream s(kSeed, stream_id(43, r, 0));
    const double q[] = {-1.0, 1.0};
    const auto v = bm_images(q, s);
    a[r] = v[0];
    b[r] = v[1];
  }
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = a[i] * b[i];
  CHECK(std::fabs(mean(prod) - mean(a) * mean(b)) < 0.02);
}

TEST_CASE("knot dump is csv with ascending times") {
  LazyBrownianPath p(RngStream(kSeed, 9));
  p.evaluate(0.5);
  p.evaluate(-0.25);
  std::ostringstream os;
  p.dump_knots_csv(os);
  const std::string s = os.str();
  CHECK(s.rfind("time,value\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);  // header + three knots
  CHECK(s.find("-0.25,") != std::string::npos);
}

}  // TEST_SUITE
