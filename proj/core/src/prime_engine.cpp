#include "omega_lab/prime_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "omega_lab/errors.hpp"
#include "omega_lab/parallel.hpp"

namespace omega_lab {

namespace {

constexpr std::array<char, 8> kCacheMagic = {'E', 'K', 'P', 'R', 'I', 'M', 'E', '1'};

void validate_bound(std::uint64_t bound, std::uint64_t cap, const char* what) {
  if (bound < 2) throw DomainError(std::string(what) + ": bound must be >= 2");
  if (bound > cap)
    throw CapacityError(std::string(what) + ": bound " + std::to_string(bound) +
                        " exceeds cap " + std::to_string(cap));
}

inline void clear_bit(std::vector<std::uint64_t>& words, std::uint64_t i) noexcept {
  words[i >> 6] &= ~(1ULL << (i & 63));
}

inline bool test_bit(std::span<const std::uint64_t> words, std::uint64_t i) noexcept {
  return (words[i >> 6] >> (i & 63)) & 1U;
}

std::vector<std::uint64_t> all_ones(std::uint64_t bits) {
  std::vector<std::uint64_t> words((bits + 63) / 64, ~0ULL);
  if (bits % 64 != 0 && !words.empty()) words.back() = (1ULL << (bits % 64)) - 1;
  return words;
}

// Plain sieve for the base primes up to sqrt(bound); these are at most 65535.
std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::uint32_t> collect_primes(std::uint64_t bound,
                                          std::span<const std::uint64_t> words) {
  std::vector<std::uint32_t> primes;
  if (bound >= 2) primes.push_back(2);
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t word = words[w];
    while (word != 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(word));
      primes.push_back(static_cast<std::uint32_t>(2 * (w * 64 + bit) + 1));
      word &= word - 1;
    }
  }
  return primes;
}

}  // namespace

std::uint64_t isqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (r > 0xFFFFFFFFULL || r * r > n)) --r;
  while (r < 0xFFFFFFFFULL && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

// ---------------------------------------------------------------- PrimeTable

bool PrimeTable::contains(std::uint64_t n) const {
  if (n > bound_) throw PreconditionError("PrimeTable::contains: value above table bound");
  if (n == 2) return true;
  if (n % 2 == 0) return false;
  return test_bit(words_, n / 2);
}

std::size_t PrimeTable::count_up_to(std::uint64_t n) const {
  return primes_up_to(n).size();
}

std::span<const std::uint32_t> PrimeTable::primes_up_to(std::uint64_t n) const {
  if (n > bound_) throw PreconditionError("PrimeTable::primes_up_to: value above table bound");
  const auto end = std::upper_bound(primes_.begin(), primes_.end(), n);
  return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
}

PrimeTable PrimeTable::from_membership(std::uint64_t bound, std::vector<std::uint64_t> words) {
  validate_bound(bound, kRangeCap, "from_membership");
  PrimeTable table;
  table.bound_ = bound;
  const std::uint64_t bits = table.membership_bits();
  if (words.size() != (bits + 63) / 64)
    throw FormatError("membership bit-set size does not match bound");
  if (bits % 64 != 0) words.back() &= (1ULL << (bits % 64)) - 1;
  table.words_ = std::move(words);
  table.primes_ = collect_primes(bound, table.words_);
  return table;
}

PrimeTable primes_up_to(std::uint64_t bound, const SieveOptions& options) {
  validate_bound(bound, kRangeCap, "primes_up_to");
  if (options.segment_size < 128) throw DomainError("primes_up_to: segment size must be >= 128");

  PrimeTable table;
  table.bound_ = bound;
  const std::uint64_t bits = table.membership_bits();
  table.words_ = all_ones(bits);
  clear_bit(table.words_, 0);  // 1 is not prime

  const auto base = small_primes(isqrt(bound));
  // Segments cover whole words so concurrent segments never share one.
  const std::uint64_t seg_bits = std::max<std::uint64_t>(64, options.segment_size / 2 / 64 * 64);
  const std::uint64_t segments = (bits + seg_bits - 1) / seg_bits;

  parallel_for(segments, options.threads, [&](std::size_t s) {
    const std::uint64_t first = s * seg_bits;
    const std::uint64_t last = std::min(bits, first + seg_bits);  // exclusive
    const std::uint64_t top = 2 * (last - 1) + 1;
    for (const std::uint32_t p : base) {
      if (p == 2) continue;
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > top) break;
      const std::uint64_t seg_lo = 2 * first + 1;
      std::uint64_t m = std::max(pp, (seg_lo + p - 1) / p * p);
      if (m % 2 == 0) m += p;
      for (std::uint64_t i = m / 2; i < last; i += p) clear_bit(table.words_, i);
    }
  });

  table.primes_ = collect_primes(bound, table.words_);
  return table;
}

// ------------------------------------------------------------------ SpfTable

std::uint32_t SpfTable::at(std::uint64_t n) const {
  if (n < 2 || n > bound_)
    throw PreconditionError("SpfTable::at: " + std::to_string(n) + " outside [2, " +
                            std::to_string(bound_) + "]");
  return spf_[n];
}

SpfTable spf_table(std::uint64_t bound) {
  validate_bound(bound, kSpfCap, "spf_table");
  SpfTable table;
  table.bound_ = bound;
  table.spf_.assign(bound + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (table.spf_[i] == 0) {
      table.spf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t limit = table.spf_[i];
    for (const std::uint32_t p : primes) {
      if (p > limit || i * p > bound) break;
      table.spf_[i * p] = p;
    }
  }
  return table;
}

// ------------------------------------------------------------- SegmentPrimes

SegmentPrimes::SegmentPrimes(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {
  bits_ = all_ones(hi - lo + 1);
}

bool SegmentPrimes::contains(std::uint64_t n) const noexcept {
  if (n < lo_ || n > hi_) return false;
  return test_bit(bits_, n - lo_);
}

std::size_t SegmentPrimes::count() const noexcept {
  std::size_t total = 0;
  for (const auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::vector<std::uint64_t> SegmentPrimes::to_vector() const {
  std::vector<std::uint64_t> out;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t word = bits_[w];
    while (word != 0) {
      out.push_back(lo_ + w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

SegmentPrimes sieve_segment(std::uint64_t lo, std::uint64_t hi, const PrimeTable& base) {
  if (lo < 2) throw DomainError("sieve_segment: lo must be >= 2");
  if (lo > hi) throw DomainError("sieve_segment: lo must not exceed hi");
  if (hi - lo >= kRangeCap) throw CapacityError("sieve_segment: segment longer than range cap");
  const std::uint64_t root = isqrt(hi);
  if (base.bound() < root)
    throw PreconditionError("sieve_segment: base table bound " + std::to_string(base.bound()) +
                            " is below sqrt(hi) = " + std::to_string(root));

  SegmentPrimes out(lo, hi);
  for (const std::uint32_t p : base.primes_up_to(root)) {
    const std::uint64_t pp = std::uint64_t{p} * p;
    std::uint64_t m = std::max(pp, lo + (p - lo % p) % p);
    for (; m <= hi; m += p) {
      clear_bit(out.bits_, m - lo);
      if (hi - m < p) break;  // next step would overflow past UINT64_MAX
    }
  }
  return out;
}

// --------------------------------------------------------------------- cache

void save_prime_table(const PrimeTable& table, std::ostream& out) {
  out.write(kCacheMagic.data(), kCacheMagic.size());
  std::array<unsigned char, 8> bound_bytes{};
  for (int i = 0; i < 8; ++i) bound_bytes[i] = static_cast<unsigned char>(table.bound() >> (8 * i));
  out.write(reinterpret_cast<const char*>(bound_bytes.data()), bound_bytes.size());

  const std::uint64_t byte_count = (table.membership_bits() + 7) / 8;
  const auto words = table.membership_words();
  std::vector<char> bytes(byte_count);
  for (std::uint64_t k = 0; k < byte_count; ++k)
    bytes[k] = static_cast<char>(static_cast<unsigned char>(words[k / 8] >> (8 * (k % 8))));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("failed to write prime table cache");
}

void save_prime_table(const PrimeTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  save_prime_table(table, out);
}

PrimeTable load_prime_table(std::istream& in, std::uint64_t expected_bound) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kCacheMagic) throw FormatError("prime cache: bad magic");

  std::array<unsigned char, 8> bound_bytes{};
  in.read(reinterpret_cast<char*>(bound_bytes.data()), bound_bytes.size());
  if (!in) throw FormatError("prime cache: truncated header");
  std::uint64_t bound = 0;
  for (int i = 0; i < 8; ++i) bound |= std::uint64_t{bound_bytes[i]} << (8 * i);
  if (bound != expected_bound)
    throw FormatError("prime cache: bound " + std::to_string(bound) + " != expected " +
                      std::to_string(expected_bound));
  if (bound < 2 || bound > kRangeCap) throw FormatError("prime cache: bound out of range");

  const std::uint64_t bits = (bound + 1) / 2;
  const std::uint64_t byte_count = (bits + 7) / 8;
  std::vector<char> bytes(byte_count);
  in.read(bytes.data(), static_cast<std::streamsize>(byte_count));
  if (static_cast<std::uint64_t>(in.gcount()) != byte_count)
    throw FormatError("prime cache: truncated bit-set");

  std::vector<std::uint64_t> words((bits + 63) / 64, 0);
  for (std::uint64_t k = 0; k < byte_count; ++k)
    words[k / 8] |= std::uint64_t{static_cast<unsigned char>(bytes[k])} << (8 * (k % 8));
  return PrimeTable::from_membership(bound, std::move(words));
}

PrimeTable load_prime_table(const std::filesystem::path& path, std::uint64_t expected_bound) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return load_prime_table(in, expected_bound);
}

}  // namespace omega_lab
