#pragma once

#include <array>
#include <cstdint>

namespace omega_lab {

/// Philox4x32-10 counter-based bijection (Salmon et al., Random123).
/// Output is a pure function of (counter, key); no state is carried between calls.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
  static constexpr int kRounds = 10;

  static constexpr Counter apply(Counter ctr, Key key) noexcept {
    for (int round = 0; round < kRounds; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

/// Stream of 64-bit words for one (seed, index) pair: word j is two lanes of
/// Philox4x32-10 with key = seed and counter = (index, block); each block yields
/// two words.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::uint64_t index) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        index_(index) {}

  constexpr std::uint64_t next() noexcept {
    if (lane_ == 2) {
      const Philox4x32::Counter ctr = {
          static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
          static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)};
      block_out_ = Philox4x32::apply(ctr, key_);
      ++block_;
      lane_ = 0;
    }
    const std::uint64_t word = (std::uint64_t{block_out_[2 * lane_ + 1]} << 32) |
                               block_out_[2 * lane_];
    ++lane_;
    return word;
  }

  constexpr std::uint64_t blocks_consumed() const noexcept { return block_; }

 private:
  Philox4x32::Key key_;
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  unsigned lane_ = 2;
  Philox4x32::Counter block_out_{};
};

}  // namespace omega_lab
