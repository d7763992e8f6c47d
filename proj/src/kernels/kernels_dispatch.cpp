#include "itbm/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace itbm::kern {

namespace {

bool avx2_supported() {
#if ITBM_HAVE_AVX2
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend resolve_backend() {
  if (const char* env = std::getenv("ITBM_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!avx2_supported())
        throw std::runtime_error("ITBM_BACKEND=avx2 but AVX2 is unavailable");
      return Backend::avx2;
    }
    if (std::strcmp(env, "auto") != 0)
      throw std::runtime_error(std::string("unknown ITBM_BACKEND value: ") + env);
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const detail::KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const detail::KernelTable& table() {
  const detail::KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t) return *t;
  const Backend b = resolve_backend();
#if ITBM_HAVE_AVX2
  t = b == Backend::avx2 ? &detail::kAvx2Table : &detail::kScalarTable;
#else
  t = &detail::kScalarTable;
#endif
  g_backend.store(b, std::memory_order_relaxed);
  g_table.store(t, std::memory_order_release);
  return *t;
}

}  // namespace

Backend active_backend() {
  table();
  return g_backend.load(std::memory_order_relaxed);
}

std::string_view backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::avx2) {
#if ITBM_HAVE_AVX2
    if (!avx2_supported()) throw std::runtime_error("AVX2 unavailable");
    g_table.store(&detail::kAvx2Table, std::memory_order_release);
#else
    throw std::runtime_error("AVX2 backend not built");
#endif
  } else {
    g_table.store(&detail::kScalarTable, std::memory_order_release);
  }
  g_backend.store(b, std::memory_order_relaxed);
}

void philox_blocks(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t block0, std::size_t nblocks,
                   std::uint32_t* out) {
  table().philox_blocks(seed, stream, block0, nblocks, out);
}

std::uint64_t philox_u64(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t k) {
  std::uint32_t w[4];
  detail::philox_block_scalar(seed, stream, k >> 1, w);
  const int e = static_cast<int>(k & 1);
  return (static_cast<std::uint64_t>(w[2 * e + 1]) << 32) | w[2 * e];
}

double normal_quantile(double p) {
  const double q = p - 0.5;
  if (q <= 0.425 && q >= -0.425) return detail::quantile_central(q);
  return detail::quantile_tail(p, q);
}

void fill_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t k0,
              std::size_t n, std::uint64_t* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = philox_u64(seed, stream, k0 + i);
}

void fill_uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t k0,
                    std::size_t n, double* out) {
  table().fill_uniform01(seed, stream, k0, n, out);
}

void fill_normals(std::uint64_t seed, std::uint64_t stream, std::uint64_t k0,
                  std::size_t n, double* out) {
  table().fill_normals(seed, stream, k0, n, out);
}

void minmax(const double* x, std::size_t n, double& lo, double& hi) {
  if (n == 0) throw std::invalid_argument("minmax: empty input");
  table().minmax(x, n, lo, hi);
}

double sum(const double* x, std::size_t n) { return table().sum(x, n); }

double power_sum_diff(const double* x, std::size_t n, double order) {
  return table().power_sum_diff(x, n, order);
}

}  // namespace itbm::kern
