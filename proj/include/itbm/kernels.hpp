#pragma once
// Batch kernels behind the random-number and statistics hot loops.
//
// Every kernel has a scalar reference implementation and (on x86-64) an AVX2
// variant chosen at runtime. The two are bit-identical: the AVX2 code uses the
// same operation order as the scalar code, both translation units are built
// with FMA contraction off, and the tail branches of the normal quantile are
// shared scalar code. Simulation output therefore does not depend on which
// backend runs.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace itbm::kern {

enum class Backend { scalar, avx2 };

// Backend resolved on first use: AVX2 when the CPU supports it, scalar
// otherwise. Environment variable ITBM_BACKEND=scalar|avx2 overrides.
Backend active_backend();
std::string_view backend_name();

// Testing hook. Throws std::runtime_error if the backend is unsupported here.
void force_backend(Backend b);

// ---- counter-based generator core (Philox4x32-10) ----
//
// A substream is addressed by (seed, stream): the 64-bit seed is the Philox
// key and the 64-bit stream id sits in the upper half of the 128-bit counter.
// Block b of a substream yields the four words out[4b..4b+3]; word pairs form
// the u64 draw sequence: draw k = (word[2k+1] << 32) | word[2k].

void philox_blocks(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t block0, std::size_t nblocks,
                   std::uint32_t* out);

std::uint64_t philox_u64(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t k);

// ---- u64 -> double maps (top 52 bits) ----

inline double u64_to_unit(std::uint64_t u) {          // [0, 1)
  return static_cast<double>(u >> 12) * 0x1p-52;
}
inline double u64_to_open_unit(std::uint64_t u) {     // (0, 1)
  return (static_cast<double>(u >> 12) + 0.5) * 0x1p-52;
}

// Standard-normal quantile, Wichura's AS241 (PPND16), |err| ~ 1e-15.
double normal_quantile(double p);

// ---- bulk draws: out[i] = f(draw k0+i) of substream (seed, stream) ----

void fill_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t k0,
              std::size_t n, std::uint64_t* out);
void fill_uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t k0,
                    std::size_t n, double* out);
void fill_normals(std::uint64_t seed, std::uint64_t stream, std::uint64_t k0,
                  std::size_t n, double* out);

// ---- reductions (fixed 4-lane blocking, identical across backends) ----

void minmax(const double* x, std::size_t n, double& lo, double& hi);
double sum(const double* x, std::size_t n);

// sum_i |x[i+1] - x[i]|^order; order 2 and 4 take the vectorized path,
// any other order falls back to a shared std::pow loop.
double power_sum_diff(const double* x, std::size_t n, double order);

}  // namespace itbm::kern
