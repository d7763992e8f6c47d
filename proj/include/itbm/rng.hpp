#pragma once
// Deterministic, splittable randomness.
//
// A stream is addressed by (seed, stream_id); the k-th draw is a pure
// function of (seed, stream_id, k), so streams can be replayed, skipped and
// handed to workers without coordination. Distinct stream ids give
// statistically independent sequences (Philox4x32-10 keystream).
//
// Normals come from the AS241 inverse CDF applied to one 52-bit uniform per
// draw; uniforms and signs also consume exactly one u64 draw each.

#include <cstdint>
#include <span>

#include "itbm/kernels.hpp"

namespace itbm {

inline constexpr std::uint64_t kDefaultSeed = 42;

// Stream-id layout used by the experiments: 16 bits of experiment id,
// 32 bits of replica index, 16 bits of lane within the replica.
inline constexpr std::uint64_t stream_id(std::uint64_t experiment,
                                         std::uint64_t replica,
                                         std::uint64_t lane) {
  return (experiment << 48) | (replica << 16) | lane;
}

class RngStream {
 public:
  RngStream() : RngStream(kDefaultSeed, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    return kern::philox_u64(seed_, stream_, pos_++);
  }

  double uniform01() { return kern::u64_to_unit(next_u64()); }

  double normal() {
    return kern::normal_quantile(kern::u64_to_open_unit(next_u64()));
  }

  double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  // Bulk draws; identical to calling normal()/uniform01() element-wise.
  void fill_normals(std::span<double> out) {
    kern::fill_normals(seed_, stream_, pos_, out.size(), out.data());
    pos_ += out.size();
  }
  void fill_uniform01(std::span<double> out) {
    kern::fill_uniform01(seed_, stream_, pos_, out.size(), out.data());
    pos_ += out.size();
  }

  void skip(std::uint64_t n) { pos_ += n; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t position() const { return pos_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t pos_ = 0;
};

}  // namespace itbm
