#include "torind/rng.hpp"

#include <bit>

namespace torind {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

void Philox::refill() {
  // 256-bit counter increment happens before the block is produced.
  if (++ctr_[0] == 0)
    if (++ctr_[1] == 0)
      if (++ctr_[2] == 0) ++ctr_[3];

  std::uint64_t x0 = ctr_[0], x1 = ctr_[1], x2 = ctr_[2], x3 = ctr_[3];
  std::uint64_t k0 = key_[0], k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, x0, hi0, lo0);
    mulhilo(kM1, x2, hi1, lo1);
    x0 = hi1 ^ x1 ^ k0;
    x1 = lo1;
    x2 = hi0 ^ x3 ^ k1;
    x3 = lo0;
    k0 += kW0;
    k1 += kW1;
  }
  buf_ = {x0, x1, x2, x3};
  pos_ = 0;
}

std::uint64_t Philox::next_u64() {
  if (pos_ == 4) refill();
  return buf_[pos_++];
}

std::uint64_t Philox::bounded(std::uint64_t s) {
  if (s <= 1) return 0;
  const std::uint64_t mask = ~0ull >> std::countl_zero(s - 1);
  for (;;) {
    const std::uint64_t r = next_u64() & mask;
    if (r < s) return r;
  }
}

void shuffle_indices(std::vector<std::uint32_t>& idx, Philox& rng) {
  for (std::size_t i = idx.size(); i-- > 1;) {
    const std::uint64_t j = rng.bounded(i + 1);
    std::swap(idx[i], idx[j]);
  }
}

}  // namespace torind
