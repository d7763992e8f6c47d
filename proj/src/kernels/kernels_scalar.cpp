#include "kernels_internal.hpp"

#include <cmath>

namespace itbm::kern::detail {

double quantile_tail(double p, double q) {
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double num, den;
  if (r <= 5.0) {
    r -= 1.6;
    num = kQC[7];
    den = kQD[7];
    for (int i = 6; i >= 0; --i) {
      num = num * r + kQC[i];
      den = den * r + kQD[i];
    }
  } else {
    r -= 5.0;
    num = kQE[7];
    den = kQF[7];
    for (int i = 6; i >= 0; --i) {
      num = num * r + kQE[i];
      den = den * r + kQF[i];
    }
  }
  const double v = num / den;
  return q < 0.0 ? -v : v;
}

namespace {

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

void philox_blocks_scalar(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t block0, std::size_t nblocks,
                          std::uint32_t* out) {
  for (std::size_t b = 0; b < nblocks; ++b) {
    philox_block_scalar(seed, stream, block0 + b, out + 4 * b);
  }
}

// Walks the u64 draw sequence [k0, k0+n) one block at a time.
template <typename Emit>
inline void for_each_u64(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t k0, std::size_t n, Emit emit) {
  std::uint64_t k = k0;
  std::size_t i = 0;
  std::uint32_t w[4];
  while (i < n) {
    philox_block_scalar(seed, stream, k >> 1, w);
    if ((k & 1) == 0 && i + 1 < n) {
      emit(i++, (static_cast<std::uint64_t>(w[1]) << 32) | w[0]);
      emit(i++, (static_cast<std::uint64_t>(w[3]) << 32) | w[2]);
      k += 2;
    } else {
      const int e = static_cast<int>(k & 1);
      emit(i++, (static_cast<std::uint64_t>(w[2 * e + 1]) << 32) | w[2 * e]);
      k += 1;
    }
  }
}

void fill_normals_scalar(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t k0, std::size_t n, double* out) {
  for_each_u64(seed, stream, k0, n,
               [out](std::size_t i, std::uint64_t u) { out[i] = normal_from_u64(u); });
}

void fill_uniform01_scalar(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t k0, std::size_t n, double* out) {
  for_each_u64(seed, stream, k0, n, [out](std::size_t i, std::uint64_t u) {
    out[i] = static_cast<double>(u >> 12) * 0x1p-52;
  });
}

void minmax_scalar(const double* x, std::size_t n, double& lo, double& hi) {
  double lo0 = x[0], lo1 = x[0], lo2 = x[0], lo3 = x[0];
  double hi0 = x[0], hi1 = x[0], hi2 = x[0], hi3 = x[0];
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    lo0 = x[i] < lo0 ? x[i] : lo0;
    hi0 = x[i] > hi0 ? x[i] : hi0;
    lo1 = x[i + 1] < lo1 ? x[i + 1] : lo1;
    hi1 = x[i + 1] > hi1 ? x[i + 1] : hi1;
    lo2 = x[i + 2] < lo2 ? x[i + 2] : lo2;
    hi2 = x[i + 2] > hi2 ? x[i + 2] : hi2;
    lo3 = x[i + 3] < lo3 ? x[i + 3] : lo3;
    hi3 = x[i + 3] > hi3 ? x[i + 3] : hi3;
  }
  for (std::size_t i = n4; i < n; ++i) {
    lo0 = x[i] < lo0 ? x[i] : lo0;
    hi0 = x[i] > hi0 ? x[i] : hi0;
  }
  lo0 = lo2 < lo0 ? lo2 : lo0;
  lo1 = lo3 < lo1 ? lo3 : lo1;
  lo = lo1 < lo0 ? lo1 : lo0;
  hi0 = hi2 > hi0 ? hi2 : hi0;
  hi1 = hi3 > hi1 ? hi3 : hi1;
  hi = hi1 > hi0 ? hi1 : hi0;
}

double sum_scalar(const double* x, std::size_t n) {
  double a[4] = {0, 0, 0, 0};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    a[0] += x[i];
    a[1] += x[i + 1];
    a[2] += x[i + 2];
    a[3] += x[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) a[i - n4] += x[i];
  return (a[0] + a[2]) + (a[1] + a[3]);
}

double power_sum_diff_scalar(const double* x, std::size_t n, double order) {
  if (n < 2) return 0.0;
  const std::size_t m = n - 1;
  const std::size_t m4 = m & ~std::size_t{3};
  double a[4] = {0, 0, 0, 0};
  if (order == 2.0 || order == 4.0) {
    const bool quartic = order == 4.0;
    for (std::size_t i = 0; i < m4; i += 4) {
      for (int j = 0; j < 4; ++j) {
        double d = x[i + j + 1] - x[i + j];
        d *= d;
        if (quartic) d *= d;
        a[j] += d;
      }
    }
    for (std::size_t i = m4; i < m; ++i) {
      double d = x[i + 1] - x[i];
      d *= d;
      if (quartic) d *= d;
      a[i - m4] += d;
    }
    return (a[0] + a[2]) + (a[1] + a[3]);
  }
  // general order: shared scalar path on every backend
  for (std::size_t i = 0; i < m4; i += 4) {
    for (int j = 0; j < 4; ++j) {
      a[j] += std::pow(std::fabs(x[i + j + 1] - x[i + j]), order);
    }
  }
  for (std::size_t i = m4; i < m; ++i) {
    a[i - m4] += std::pow(std::fabs(x[i + 1] - x[i]), order);
  }
  return (a[0] + a[2]) + (a[1] + a[3]);
}

}  // namespace

void philox_block_scalar(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t block, std::uint32_t out[4]) {
  std::uint32_t c0 = static_cast<std::uint32_t>(block);
  std::uint32_t c1 = static_cast<std::uint32_t>(block >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(stream);
  std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo32(kPhiloxM0, c0, hi0, lo0);
    mulhilo32(kPhiloxM1, c2, hi1, lo1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
  }
  out[0] = c0;
  out[1] = c1;
  out[2] = c2;
  out[3] = c3;
}

const KernelTable kScalarTable = {
    &philox_blocks_scalar, &fill_normals_scalar, &fill_uniform01_scalar,
    &minmax_scalar,        &sum_scalar,          &power_sum_diff_scalar,
};

}  // namespace itbm::kern::detail
