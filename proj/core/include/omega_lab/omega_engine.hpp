#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <vector>

#include "omega_lab/prime_engine.hpp"

namespace omega_lab {

/// Upper bound on omega(n) for n < 2^64: the product of the first 16 primes exceeds 2^64.
inline constexpr unsigned kMaxOmega64 = 15;

/// Exact omega(n) for every n in [lo, hi], one byte per integer.
struct OmegaRange {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  std::vector<std::uint8_t> counts;

  std::size_t size() const noexcept { return counts.size(); }
  /// omega(n) for lo <= n <= hi.
  unsigned at(std::uint64_t n) const;
};

/// frequencies[k] = number of integers in the range with omega = k.
using OmegaFrequencies = std::array<std::uint64_t, kMaxOmega64 + 1>;

struct OmegaOptions {
  std::uint64_t segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
};

/// Sieves omega over [lo, hi]. Requires 1 <= lo <= hi <= kRangeCap; lo = 0 is a
/// DomainError since every prime divides 0.
OmegaRange omega_range(std::uint64_t lo, std::uint64_t hi, const OmegaOptions& options = {});

/// Same sieve, streamed segment by segment into a frequency table so that ranges
/// far larger than memory can be summarized. Independent of thread count.
OmegaFrequencies omega_frequencies(std::uint64_t lo, std::uint64_t hi,
                                   const OmegaOptions& options = {});

/// omega(n) by repeated division with smallest prime factors. 2 <= n <= spf.bound().
unsigned omega_via_spf(std::uint64_t n, const SpfTable& spf);

/// Distinct prime divisors p <= bound of an arbitrary-precision integer.
struct TruncatedOmega {
  unsigned value_omega = 0;
  std::uint64_t bound = 0;

  bool operator==(const TruncatedOmega&) const = default;
};

/// Primes <= bound grouped into consecutive runs whose product stays below 2^61.
/// One remainder is taken per run (from precomputed limb weights 2^(64i) mod m for
/// values up to kFastLimbs limbs, through GMP beyond that); each prime of the run
/// is then tested against the 64-bit remainder with a multiply-compare.
class TrialDivisionPlan {
 public:
  /// Uses every prime in `table` up to `bound` (default: the whole table).
  explicit TrialDivisionPlan(const PrimeTable& table);
  TrialDivisionPlan(const PrimeTable& table, std::uint64_t bound);

  std::uint64_t bound() const noexcept { return bound_; }
  std::size_t prime_count() const noexcept { return primes_.size(); }
  std::size_t chunk_count() const noexcept { return chunks_.size(); }

  /// Throws DomainError for x < 1.
  TruncatedOmega count(const mpz_class& x) const;

 private:
  static constexpr std::size_t kFastLimbs = 8;

  struct Chunk {
    std::uint64_t product;
    std::uint32_t first;  // index into primes_
    std::uint32_t last;   // one past
    std::uint64_t weight[kFastLimbs];  // 2^(64 i) mod product
  };
  // n divisible by odd p <=> n * inverse (mod 2^64) <= limit.
  struct Divisor {
    std::uint64_t inverse;
    std::uint64_t limit;
  };

  unsigned count_in_chunk(const Chunk& chunk, std::uint64_t residue) const noexcept;

  std::uint64_t bound_;
  std::vector<std::uint32_t> primes_;
  std::vector<Divisor> divisors_;
  std::vector<Chunk> chunks_;
};

/// omega_B(x) with B = table.bound().
TruncatedOmega omega_truncated(const mpz_class& x, const PrimeTable& table);

}  // namespace omega_lab
