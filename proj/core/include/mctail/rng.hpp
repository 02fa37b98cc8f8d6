#pragma once

#include <cmath>
#include <cstdint>

namespace mctail {

// 64-bit avalanche mix (the splitmix64 finalizer).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Minimal splitmix64 generator. Every source of randomness in the library
// draws from an instance of this, so results depend only on the seeds that
// created the streams, never on scheduling or platform RNG internals.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Uniform double in [0, 1), 53 mantissa bits.
  double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second deviate of each pair is cached.
  double next_gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - next_unit();  // (0, 1]
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Independent stream for (master seed, stream index). Used for per-replica
// streams in the simulator: replica k always sees the same deviates no
// matter which worker runs it.
inline SplitMix64 derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept {
  return SplitMix64(mix64(master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1)));
}

}  // namespace mctail
