// AVX2 kernel variants. Four Philox blocks per iteration, one 32-bit word per
// 64-bit lane; the normal quantile vectorizes the central branch and falls
// back to the shared scalar tail per lane. Operation order matches the scalar
// reference so both backends emit identical bits.

#include "kernels_internal.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace itbm::kern::detail {
namespace {

const __m256i kMask32 = _mm256_set1_epi64x(0xffffffffll);

struct PhiloxState {
  __m256i c0, c1, c2, c3;
};

// Four consecutive blocks [b, b+4) of substream (seed, stream).
inline PhiloxState philox4_avx2(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t b) {
  __m256i c0 = _mm256_and_si256(
      _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(b)),
                       _mm256_set_epi64x(3, 2, 1, 0)),
      kMask32);
  // carries from the low word into the high word of the 64-bit block index
  __m256i c1 = _mm256_and_si256(
      _mm256_srli_epi64(
          _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(b)),
                           _mm256_set_epi64x(3, 2, 1, 0)),
          32),
      kMask32);
  __m256i c2 = _mm256_set1_epi64x(static_cast<long long>(stream & 0xffffffffu));
  __m256i c3 = _mm256_set1_epi64x(static_cast<long long>(stream >> 32));
  __m256i k0 = _mm256_set1_epi64x(static_cast<long long>(seed & 0xffffffffu));
  __m256i k1 = _mm256_set1_epi64x(static_cast<long long>(seed >> 32));
  const __m256i m0 = _mm256_set1_epi64x(kPhiloxM0);
  const __m256i m1 = _mm256_set1_epi64x(kPhiloxM1);
  const __m256i w0 = _mm256_set1_epi64x(kPhiloxW0);
  const __m256i w1 = _mm256_set1_epi64x(kPhiloxW1);
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k0 = _mm256_and_si256(_mm256_add_epi64(k0, w0), kMask32);
      k1 = _mm256_and_si256(_mm256_add_epi64(k1, w1), kMask32);
    }
    const __m256i p0 = _mm256_mul_epu32(m0, c0);
    const __m256i p1 = _mm256_mul_epu32(m1, c2);
    const __m256i hi0 = _mm256_srli_epi64(p0, 32);
    const __m256i lo0 = _mm256_and_si256(p0, kMask32);
    const __m256i hi1 = _mm256_srli_epi64(p1, 32);
    const __m256i lo1 = _mm256_and_si256(p1, kMask32);
    const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
    const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
  }
  return {c0, c1, c2, c3};
}

// u64 draws 2b..2b+7 in sequence order (two per block).
inline void philox4_u64s(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t b, __m256i& u_lo, __m256i& u_hi) {
  const PhiloxState s = philox4_avx2(seed, stream, b);
  const __m256i even =
      _mm256_or_si256(_mm256_slli_epi64(s.c1, 32), s.c0);  // draws 2b+2j
  const __m256i odd =
      _mm256_or_si256(_mm256_slli_epi64(s.c3, 32), s.c2);  // draws 2b+2j+1
  const __m256i lo = _mm256_unpacklo_epi64(even, odd);  // e0 o0 e2 o2
  const __m256i hi = _mm256_unpackhi_epi64(even, odd);  // e1 o1 e3 o3
  u_lo = _mm256_permute2x128_si256(lo, hi, 0x20);       // e0 o0 e1 o1
  u_hi = _mm256_permute2x128_si256(lo, hi, 0x31);       // e2 o2 e3 o3
}

// exact double(v) for v < 2^52
inline __m256d u52_to_double(__m256i v) {
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic)),
                       _mm256_set1_pd(0x1p52));
}

inline __m256d horner8(const double* cs, __m256d r) {
  __m256d acc = _mm256_set1_pd(cs[7]);
  for (int i = 6; i >= 0; --i) {
    acc = _mm256_add_pd(_mm256_mul_pd(acc, r), _mm256_set1_pd(cs[i]));
  }
  return acc;
}

// four normals from four u64 draws
inline void normals4(__m256i u, double* out) {
  const __m256d d = u52_to_double(_mm256_srli_epi64(u, 12));
  const __m256d p = _mm256_mul_pd(_mm256_add_pd(d, _mm256_set1_pd(0.5)),
                                  _mm256_set1_pd(0x1p-52));
  const __m256d q = _mm256_sub_pd(p, _mm256_set1_pd(0.5));
  const __m256d absq = _mm256_andnot_pd(_mm256_set1_pd(-0.0), q);
  const __m256d central =
      _mm256_cmp_pd(absq, _mm256_set1_pd(0.425), _CMP_LE_OQ);
  const int mask = _mm256_movemask_pd(central);
  const __m256d r =
      _mm256_sub_pd(_mm256_set1_pd(0.180625), _mm256_mul_pd(q, q));
  const __m256d num = horner8(kQA, r);
  const __m256d den = horner8(kQB, r);
  const __m256d res = _mm256_mul_pd(q, _mm256_div_pd(num, den));
  _mm256_storeu_pd(out, res);
  if (mask != 0xF) {
    alignas(32) double ps[4], qs[4];
    _mm256_store_pd(ps, p);
    _mm256_store_pd(qs, q);
    for (int j = 0; j < 4; ++j) {
      if (!(mask & (1 << j))) out[j] = quantile_tail(ps[j], qs[j]);
    }
  }
}

inline void uniforms4(__m256i u, double* out) {
  const __m256d d = u52_to_double(_mm256_srli_epi64(u, 12));
  _mm256_storeu_pd(out, _mm256_mul_pd(d, _mm256_set1_pd(0x1p-52)));
}

void philox_blocks_avx2(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t block0, std::size_t nblocks,
                        std::uint32_t* out) {
  std::size_t b = 0;
  for (; b + 4 <= nblocks; b += 4) {
    const PhiloxState s = philox4_avx2(seed, stream, block0 + b);
    alignas(32) std::uint64_t w0[4], w1[4], w2[4], w3[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(w0), s.c0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w1), s.c1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w2), s.c2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w3), s.c3);
    for (int j = 0; j < 4; ++j) {
      out[4 * (b + j) + 0] = static_cast<std::uint32_t>(w0[j]);
      out[4 * (b + j) + 1] = static_cast<std::uint32_t>(w1[j]);
      out[4 * (b + j) + 2] = static_cast<std::uint32_t>(w2[j]);
      out[4 * (b + j) + 3] = static_cast<std::uint32_t>(w3[j]);
    }
  }
  for (; b < nblocks; ++b) {
    philox_block_scalar(seed, stream, block0 + b, out + 4 * b);
  }
}

inline std::uint64_t u64_draw_scalar(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t k) {
  std::uint32_t w[4];
  philox_block_scalar(seed, stream, k >> 1, w);
  const int e = static_cast<int>(k & 1);
  return (static_cast<std::uint64_t>(w[2 * e + 1]) << 32) | w[2 * e];
}

template <void Emit4(__m256i, double*), double Emit1(std::uint64_t)>
void fill_avx2(std::uint64_t seed, std::uint64_t stream, std::uint64_t k0,
               std::size_t n, double* out) {
  std::size_t i = 0;
  std::uint64_t k = k0;
  if (n == 0) return;
  if (k & 1) {
    out[i++] = Emit1(u64_draw_scalar(seed, stream, k));
    ++k;
  }
  while (n - i >= 8) {
    __m256i lo, hi;
    philox4_u64s(seed, stream, k >> 1, lo, hi);
    Emit4(lo, out + i);
    Emit4(hi, out + i + 4);
    i += 8;
    k += 8;
  }
  for (; i < n; ++i, ++k) {
    out[i] = Emit1(u64_draw_scalar(seed, stream, k));
  }
}

double normal1(std::uint64_t u) { return normal_from_u64(u); }
double uniform1(std::uint64_t u) {
  return static_cast<double>(u >> 12) * 0x1p-52;
}

void fill_normals_avx2(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t k0, std::size_t n, double* out) {
  fill_avx2<normals4, normal1>(seed, stream, k0, n, out);
}

void fill_uniform01_avx2(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t k0, std::size_t n, double* out) {
  fill_avx2<uniforms4, uniform1>(seed, stream, k0, n, out);
}

void minmax_avx2(const double* x, std::size_t n, double& lo, double& hi) {
  const std::size_t n4 = n & ~std::size_t{3};
  double lanes_lo[4] = {x[0], x[0], x[0], x[0]};
  double lanes_hi[4] = {x[0], x[0], x[0], x[0]};
  if (n4 != 0) {
    __m256d vlo = _mm256_set1_pd(x[0]);
    __m256d vhi = vlo;
    for (std::size_t i = 0; i < n4; i += 4) {
      const __m256d v = _mm256_loadu_pd(x + i);
      // operand order matches the scalar "x < lo ? x : lo" ternaries
      vlo = _mm256_min_pd(v, vlo);
      vhi = _mm256_max_pd(v, vhi);
    }
    _mm256_storeu_pd(lanes_lo, vlo);
    _mm256_storeu_pd(lanes_hi, vhi);
  }
  for (std::size_t i = n4; i < n; ++i) {
    lanes_lo[0] = x[i] < lanes_lo[0] ? x[i] : lanes_lo[0];
    lanes_hi[0] = x[i] > lanes_hi[0] ? x[i] : lanes_hi[0];
  }
  double l0 = lanes_lo[2] < lanes_lo[0] ? lanes_lo[2] : lanes_lo[0];
  double l1 = lanes_lo[3] < lanes_lo[1] ? lanes_lo[3] : lanes_lo[1];
  lo = l1 < l0 ? l1 : l0;
  double h0 = lanes_hi[2] > lanes_hi[0] ? lanes_hi[2] : lanes_hi[0];
  double h1 = lanes_hi[3] > lanes_hi[1] ? lanes_hi[3] : lanes_hi[1];
  hi = h1 > h0 ? h1 : h0;
}

double sum_avx2(const double* x, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n4; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t i = n4; i < n; ++i) lanes[i - n4] += x[i];
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

double power_sum_diff_avx2(const double* x, std::size_t n, double order) {
  if (n < 2) return 0.0;
  if (order != 2.0 && order != 4.0) {
    return kScalarTable.power_sum_diff(x, n, order);
  }
  const std::size_t m = n - 1;
  const std::size_t m4 = m & ~std::size_t{3};
  const bool quartic = order == 4.0;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < m4; i += 4) {
    const __m256d a = _mm256_loadu_pd(x + i + 1);
    const __m256d b = _mm256_loadu_pd(x + i);
    __m256d d = _mm256_sub_pd(a, b);
    d = _mm256_mul_pd(d, d);
    if (quartic) d = _mm256_mul_pd(d, d);
    acc = _mm256_add_pd(acc, d);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t i = m4; i < m; ++i) {
    double d = x[i + 1] - x[i];
    d *= d;
    if (quartic) d *= d;
    lanes[i - m4] += d;
  }
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

}  // namespace

const KernelTable kAvx2Table = {
    &philox_blocks_avx2, &fill_normals_avx2, &fill_uniform01_avx2,
    &minmax_avx2,        &sum_avx2,          &power_sum_diff_avx2,
};

}  // namespace itbm::kern::detail
