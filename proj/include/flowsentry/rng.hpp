#pragma once

#include <cmath>
#include <cstdint>

namespace flowsentry {

// Deterministic 64-bit generator (splitmix64). One fixed algorithm so that a
// given seed produces the same stream on every platform and build. All
// randomness in the project flows through this type; nothing uses <random>
// engines, whose streams are implementation-defined.
//
// Parallel or independent consumers do not share a generator: they derive a
// child with fork(stream_id), a pure function of (current state, stream id).
class Rng64 {
 public:
  explicit Rng64(std::uint64_t seed) noexcept : state_(seed) {}

  // Next raw 64-bit value of the stream.
  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform real in [0, 1), using the top 53 bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  // Uniform integer in [0, n). n = 0 returns 0. Multiply-shift bounded draw;
  // the bound rule is part of the documented stream.
  std::uint64_t below(std::uint64_t n) noexcept {
    if (n == 0) return 0;
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Exponential with the given mean (consumes one uniform).
  double exponential(double mean) noexcept {
    return -mean * std::log1p(-uniform());
  }

  // Standard normal via Box-Muller; consumes two uniforms, no cached spare.
  double normal() noexcept {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Child generator for a named substream. Pure function of the current
  // state and `stream`; does not advance the parent.
  Rng64 fork(std::uint64_t stream) const noexcept {
    std::uint64_t z = state_ + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng64(z ^ (z >> 31));
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace flowsentry
