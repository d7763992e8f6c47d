#include <doctest.h>

#include <cmath>
#include <vector>

#include "itbm/rng.hpp"
#include "itbm/summation.hpp"

using namespace itbm;

namespace {

double mean(const std::vector<double>& x) {
  NeumaierSum s;
  for (double v : x) s.add(v);
  return s.value() / static_cast<double>(x.size());
}

}  // namespace

TEST_SUITE("rng") {

TEST_CASE("replay determinism") {
  RngStream a(42, 0), b(42, 0);
  for (int i = 0; i < 1000; ++i) CHECK(a.normal() == b.normal());
  CHECK(a.position() == 1000);
}

TEST_CASE("substream independence: cross-correlation") {
  const std::size_t n = 100000;
  std::vector<double> x(n), y(n);
  RngStream a(42, 0), b(42, 1);
  a.fill_normals(x);
  b.fill_normals(y);
  NeumaierSum s;
  for (std::size_t i = 0; i < n; ++i) s.add(x[i] * y[i]);
  const double corr = s.value() / static_cast<double>(n);
  CHECK(std::fabs(corr) < 0.02);  // ~3/sqrt(n)
}

TEST_CASE("normal moments") {
  const std::size_t n = 1000000;
  std::vector<double> x(n);
  RngStream s(42, 2);
  s.fill_normals(x);
  const double m = mean(x);
  CHECK(std::fabs(m) < 0.004);  // 3 sigma / sqrt(n) with slack
  NeumaierSum v;
  for (double xi : x) v.add((xi - m) * (xi - m));
  CHECK(v.value() / static_cast<double>(n) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("fair sign and uniform range") {
  RngStream s(42, 3);
  NeumaierSum sum;
  for (int i = 0; i < 1000000; ++i) sum.add(s.sign());
  CHECK(std::fabs(sum.value()) / 1e6 < 0.01);

  RngStream u(42, 4);
  std::vector<double> us(100000);
  u.fill_uniform01(us);
  for (double v : us) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  CHECK(mean(us) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("skip is equivalent to drawing") {
  RngStream a(9, 9);
  a.skip(12345);
  RngStream b(9, 9);
  for (int i = 0; i < 12345; ++i) b.next_u64();
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("stream id layout stays injective over the used ranges") {
  CHECK(stream_id(1, 0, 0) != stream_id(0, 1, 0));
  CHECK(stream_id(1, 2, 3) == ((1ull << 48) | (2ull << 16) | 3ull));
  CHECK(stream_id(0, 0, 1) != stream_id(0, 1, 0));
}

}  // TEST_SUITE
