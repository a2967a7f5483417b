#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ranges>
#include <string>
#include <string_view>
#include <vector>

namespace omega_lab {

/// Upper end N of the sampling interval [1, N], kept as its decimal string.
class BigBound {
 public:
  /// Accepts a non-empty digit string without leading zeros and value >= 1.
  static BigBound parse(std::string_view decimal);
  static BigBound from_u64(std::uint64_t value);

  const std::string& decimal() const noexcept { return decimal_; }
  const mpz_class& value() const noexcept { return value_; }
  /// ceil(log2(N + 1)), the number of bits needed to write N.
  std::size_t bit_length() const noexcept { return bit_length_; }
  /// The value when it fits in 64 bits.
  std::optional<std::uint64_t> to_u64() const;

  bool operator==(const BigBound& other) const { return decimal_ == other.decimal_; }

 private:
  std::string decimal_;
  mpz_class value_;
  std::size_t bit_length_ = 0;
};

/// One draw plus the number of rejection rounds it took (1 = first candidate accepted).
struct SampleDraw {
  mpz_class value;
  std::uint32_t rounds = 0;
};

/// The index-th value of the (seed) stream, exactly uniform on [1, N].
///
/// Each round reads bit_length() bits from a Philox4x32-10 stream keyed by seed
/// with counter (index, block), forming a candidate v in [0, 2^bits). The draw
/// is v + 1 when v < N; otherwise the next round continues the same stream.
/// Since N >= 2^(bits-1), a round is accepted with probability >= 1/2.
mpz_class sample_uniform(const BigBound& bound, std::uint64_t index, std::uint64_t seed);
SampleDraw sample_uniform_traced(const BigBound& bound, std::uint64_t index, std::uint64_t seed);

struct SampleBatch {
  std::uint64_t seed = 0;
  std::uint64_t first_index = 0;
  BigBound bound;
  std::vector<mpz_class> values;

  std::size_t count() const noexcept { return values.size(); }
};

/// Samples first_index .. first_index + count - 1. Identical for any thread count.
SampleBatch sample_batch(const BigBound& bound, std::uint64_t seed, std::uint64_t count,
                         std::uint64_t first_index = 0, unsigned threads = 1);

/// Every integer of [1, n] once, ascending. n = 0 is a DomainError; n above
/// kRangeCap is a CapacityError.
std::ranges::iota_view<std::uint64_t, std::uint64_t> exhaustive_range(std::uint64_t n);

}  // namespace omega_lab
