#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace torind {

// Philox4x64-10 counter-based generator, keyed by (seed, stream).
// Independent streams under the same seed are obtained by varying the second
// key word, which makes substream derivation trivial and deterministic under
// any degree of parallelism. Conventions follow numpy.random.Philox exactly
// (counter is pre-incremented, block words are served in order, doubles take
// the top 53 bits), so reference vectors can be generated there.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{seed, stream} {}

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  // Unbiased uniform integer in [0, s) by masked rejection.
  std::uint64_t bounded(std::uint64_t s);

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> buf_{};
  unsigned pos_ = 4;  // buffer exhausted; refill on first use
};

// Substream id layout: the high 32 bits tag the consumer so concurrent uses
// of one user seed never collide.
namespace streams {
inline constexpr std::uint64_t kMain = 0;
inline constexpr std::uint64_t kPermutation = 1ull << 32;  // + b
inline constexpr std::uint64_t kPowerRep = 2ull << 32;     // + replicate
inline constexpr std::uint64_t kCriticalA = 3ull << 32;    // + replicate
inline constexpr std::uint64_t kCriticalB = 4ull << 32;    // + replicate
}  // namespace streams

// In-place Fisher-Yates (descending index, masked-rejection draws).
void shuffle_indices(std::vector<std::uint32_t>& idx, Philox& rng);

}  // namespace torind
