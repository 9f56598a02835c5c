#pragma once

// Philox4x32-10 counter-based generator and per-sample bit streams.

#include <array>
#include <cstdint>

namespace lep {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

inline Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

/// Bit stream that is a pure function of (master_seed, sample_index). Blocks
/// of 128 bits come from Philox with key = seed and counter = (block, sample).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t sample_index)
      : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
        sample_(sample_index) {}

  /// One fair bit.
  bool bit() {
    if (avail_ == 0) refill();
    const bool b = (word_ & 1u) != 0;
    word_ >>= 1;
    --avail_;
    return b;
  }

  /// 32 fresh bits (starts a new 128-bit block word, discarding leftovers).
  std::uint32_t next_u32() {
    if (lane_ >= 4) {
      block_ = philox4x32_10(counter(), key_);
      ++block_index_;
      lane_ = 0;
    }
    avail_ = 0;
    return block_[lane_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = next_u32() >> 5, lo = next_u32() >> 6;
    return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo)) * (1.0 / 9007199254740992.0);
  }

  std::uint64_t bits_consumed() const { return bits_; }

 private:
  Philox4x32Counter counter() const {
    return {static_cast<std::uint32_t>(block_index_), static_cast<std::uint32_t>(block_index_ >> 32),
            static_cast<std::uint32_t>(sample_), static_cast<std::uint32_t>(sample_ >> 32)};
  }

  void refill() {
    word_ = next_u32();
    avail_ = 32;
    bits_ += 32;
  }

  Philox4x32Key key_;
  std::uint64_t sample_;
  std::uint64_t block_index_ = 0;
  Philox4x32Counter block_{};
  int lane_ = 4;
  std::uint32_t word_ = 0;
  int avail_ = 0;
  std::uint64_t bits_ = 0;
};

}  // namespace lep
