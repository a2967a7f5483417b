#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace omega_lab {

/// Largest bound accepted by primes_up_to and omega_range. Primes are stored as
/// 32-bit values, so the cap is the largest 32-bit unsigned integer.
inline constexpr std::uint64_t kRangeCap = 4'294'967'295ULL;

/// Largest bound accepted by spf_table (4 bytes per entry, 1 GiB at the cap).
inline constexpr std::uint64_t kSpfCap = 1ULL << 28;

/// Numbers covered by one sieve segment unless overridden.
inline constexpr std::uint64_t kDefaultSegmentSize = 1ULL << 20;

struct SieveOptions {
  std::uint64_t segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
};

/// floor(sqrt(n)) computed exactly for every 64-bit n.
std::uint64_t isqrt(std::uint64_t n) noexcept;

/// Ascending primes up to an inclusive bound, plus an odd-only membership
/// bit-set: bit i stands for the odd number 2i + 1. Immutable once built.
class PrimeTable {
 public:
  PrimeTable() = default;

  std::uint64_t bound() const noexcept { return bound_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }

  /// Membership test for 0 <= n <= bound().
  bool contains(std::uint64_t n) const;

  /// pi(n) for n <= bound().
  std::size_t count_up_to(std::uint64_t n) const;

  /// Primes p <= n, n <= bound().
  std::span<const std::uint32_t> primes_up_to(std::uint64_t n) const;

  /// Number of odd-only membership bits, i.e. odd integers in [1, bound].
  std::uint64_t membership_bits() const noexcept { return (bound_ + 1) / 2; }
  std::span<const std::uint64_t> membership_words() const noexcept { return words_; }

  /// Rebuilds the prime list from an odd-only membership bit-set.
  static PrimeTable from_membership(std::uint64_t bound, std::vector<std::uint64_t> words);

 private:
  friend PrimeTable primes_up_to(std::uint64_t bound, const SieveOptions& options);

  std::uint64_t bound_ = 0;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint64_t> words_;
};

/// Smallest-prime-factor table: entry n holds the least prime dividing n, 2 <= n <= bound.
class SpfTable {
 public:
  SpfTable() = default;

  std::uint64_t bound() const noexcept { return bound_; }

  /// Smallest prime factor of n; throws PreconditionError outside [2, bound].
  std::uint32_t at(std::uint64_t n) const;
  std::uint32_t operator[](std::uint64_t n) const noexcept { return spf_[n]; }

 private:
  friend SpfTable spf_table(std::uint64_t bound);

  std::uint64_t bound_ = 0;
  std::vector<std::uint32_t> spf_;
};

/// Primes in [lo, hi], one bit per integer.
class SegmentPrimes {
 public:
  SegmentPrimes(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }

  bool contains(std::uint64_t n) const noexcept;
  std::size_t count() const noexcept;
  std::vector<std::uint64_t> to_vector() const;

  bool operator==(const SegmentPrimes&) const = default;

 private:
  friend SegmentPrimes sieve_segment(std::uint64_t lo, std::uint64_t hi, const PrimeTable& base);

  std::uint64_t lo_;
  std::uint64_t hi_;
  std::vector<std::uint64_t> bits_;
};

/// Complete prime table up to `bound` via an odd-only segmented sieve.
/// Throws DomainError for bound < 2 and CapacityError above kRangeCap.
PrimeTable primes_up_to(std::uint64_t bound, const SieveOptions& options = {});

/// Linear sieve of smallest prime factors. Throws DomainError for bound < 2 and
/// CapacityError above kSpfCap.
SpfTable spf_table(std::uint64_t bound);

/// Sieves [lo, hi] with the base primes. Requires 2 <= lo <= hi and
/// base.bound() >= floor(sqrt(hi)); a short base table is a PreconditionError.
SegmentPrimes sieve_segment(std::uint64_t lo, std::uint64_t hi, const PrimeTable& base);

// Binary cache: "EKPRIME1", little-endian u64 bound, then the odd-only
// membership bits packed little-endian, least-significant bit first per byte.

void save_prime_table(const PrimeTable& table, std::ostream& out);
void save_prime_table(const PrimeTable& table, const std::filesystem::path& path);

/// Loads a cache and verifies its magic and bound. Throws FormatError on mismatch.
PrimeTable load_prime_table(std::istream& in, std::uint64_t expected_bound);
PrimeTable load_prime_table(const std::filesystem::path& path, std::uint64_t expected_bound);

}  // namespace omega_lab
