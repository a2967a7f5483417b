#include "omega_lab/omega_engine.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "omega_lab/errors.hpp"
#include "omega_lab/parallel.hpp"

namespace omega_lab {

namespace {

__extension__ typedef unsigned __int128 u128;

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t),
              "mpz_fdiv_ui must accept a full 64-bit divisor");

void validate_range(std::uint64_t lo, std::uint64_t hi, const char* what) {
  if (lo == 0) throw DomainError(std::string(what) + ": omega(0) is undefined, lo must be >= 1");
  if (lo > hi) throw DomainError(std::string(what) + ": lo must not exceed hi");
  if (hi > kRangeCap)
    throw CapacityError(std::string(what) + ": hi exceeds range cap " + std::to_string(kRangeCap));
}

// Writes omega(n) for n in [a, b] into out[0 .. b-a]. `prod` is scratch of the
// same length. For every base prime p it accumulates p^k over each multiple of
// p^k, so afterwards prod[i] == n exactly when n has no prime factor above
// sqrt(b); otherwise one such factor remains and is counted once.
void sieve_omega_segment(std::uint64_t a, std::uint64_t b,
                         std::span<const std::uint32_t> base, std::span<std::uint8_t> out,
                         std::vector<std::uint64_t>& prod) {
  const std::size_t len = static_cast<std::size_t>(b - a + 1);
  prod.assign(len, 1);
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(len), 0);

  for (const std::uint32_t p : base) {
    std::uint64_t first = (a + p - 1) / p * p;
    for (std::uint64_t m = first; m <= b; m += p) {
      out[m - a] += 1;
      prod[m - a] *= p;
    }
    // Higher powers contribute to prod only.
    for (std::uint64_t pk = std::uint64_t{p} * p; pk <= b; pk *= p) {
      first = (a + pk - 1) / pk * pk;
      for (std::uint64_t m = first; m <= b; m += pk) prod[m - a] *= p;
      if (pk > b / p) break;
    }
  }
  for (std::size_t i = 0; i < len; ++i)
    if (prod[i] != a + i) out[i] += 1;
}

std::vector<std::uint32_t> base_primes_for(std::uint64_t hi) {
  const std::uint64_t root = isqrt(hi);
  if (root < 2) return {};
  const auto table = primes_up_to(root);
  return {table.primes().begin(), table.primes().end()};
}

}  // namespace

unsigned OmegaRange::at(std::uint64_t n) const {
  if (n < lo || n > hi) throw PreconditionError("OmegaRange::at: value outside range");
  return counts[n - lo];
}

OmegaRange omega_range(std::uint64_t lo, std::uint64_t hi, const OmegaOptions& options) {
  validate_range(lo, hi, "omega_range");
  if (options.segment_size == 0) throw DomainError("omega_range: segment size must be positive");

  OmegaRange range{lo, hi, std::vector<std::uint8_t>(hi - lo + 1)};
  const auto base = base_primes_for(hi);
  const std::uint64_t total = hi - lo + 1;
  const std::uint64_t segments = (total + options.segment_size - 1) / options.segment_size;

  parallel_for(segments, options.threads, [&](std::size_t s) {
    const std::uint64_t a = lo + s * options.segment_size;
    const std::uint64_t b = std::min(hi, a + options.segment_size - 1);
    std::vector<std::uint64_t> prod;
    sieve_omega_segment(a, b, base, std::span(range.counts).subspan(a - lo), prod);
  });
  return range;
}

OmegaFrequencies omega_frequencies(std::uint64_t lo, std::uint64_t hi,
                                   const OmegaOptions& options) {
  validate_range(lo, hi, "omega_frequencies");
  if (options.segment_size == 0)
    throw DomainError("omega_frequencies: segment size must be positive");

  const auto base = base_primes_for(hi);
  const std::uint64_t total = hi - lo + 1;
  const std::uint64_t segments = (total + options.segment_size - 1) / options.segment_size;
  std::vector<OmegaFrequencies> partial(segments, OmegaFrequencies{});

  parallel_for(segments, options.threads, [&](std::size_t s) {
    const std::uint64_t a = lo + s * options.segment_size;
    const std::uint64_t b = std::min(hi, a + options.segment_size - 1);
    std::vector<std::uint8_t> counts(static_cast<std::size_t>(b - a + 1));
    std::vector<std::uint64_t> prod;
    sieve_omega_segment(a, b, base, counts, prod);
    for (const auto c : counts) ++partial[s][c];
  });

  OmegaFrequencies result{};
  for (const auto& part : partial)
    for (std::size_t k = 0; k < result.size(); ++k) result[k] += part[k];
  return result;
}

unsigned omega_via_spf(std::uint64_t n, const SpfTable& spf) {
  if (n < 2 || n > spf.bound())
    throw PreconditionError("omega_via_spf: " + std::to_string(n) + " outside [2, " +
                            std::to_string(spf.bound()) + "]");
  unsigned omega = 0;
  while (n > 1) {
    const std::uint32_t p = spf[n];
    ++omega;
    while (n % p == 0) n /= p;
  }
  return omega;
}

// --------------------------------------------------------- TrialDivisionPlan

TrialDivisionPlan::TrialDivisionPlan(const PrimeTable& table)
    : TrialDivisionPlan(table, table.bound()) {}

TrialDivisionPlan::TrialDivisionPlan(const PrimeTable& table, std::uint64_t bound)
    : bound_(bound) {
  if (bound > table.bound())
    throw PreconditionError("TrialDivisionPlan: truncation bound above prime table bound");
  const auto primes = table.primes_up_to(bound);
  primes_.assign(primes.begin(), primes.end());

  divisors_.reserve(primes_.size());
  for (const std::uint64_t p : primes_) {
    // Newton iteration for p^-1 mod 2^64; p = 2 is handled by a parity test.
    std::uint64_t inv = p;
    for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
    divisors_.push_back({inv, std::numeric_limits<std::uint64_t>::max() / p});
  }

  // Products stay below 2^61 so that kFastLimbs weighted limbs sum inside 128 bits.
  constexpr std::uint64_t kMaxProduct = std::uint64_t{1} << 61;
  auto close = [&](std::uint64_t product, std::uint32_t first, std::uint32_t last) {
    Chunk c{product, first, last, {}};
    const u128 base = (u128{1} << 64) % product;
    c.weight[0] = 1 % product;
    for (std::size_t i = 1; i < kFastLimbs; ++i)
      c.weight[i] = static_cast<std::uint64_t>(c.weight[i - 1] * base % product);
    chunks_.push_back(c);
  };
  std::uint32_t first = 0;
  std::uint64_t product = 1;
  for (std::uint32_t i = 0; i < primes_.size(); ++i) {
    const std::uint64_t p = primes_[i];
    if (product >= kMaxProduct / p) {
      close(product, first, i);
      first = i;
      product = 1;
    }
    product *= p;
  }
  if (first < primes_.size()) close(product, first, static_cast<std::uint32_t>(primes_.size()));
}

unsigned TrialDivisionPlan::count_in_chunk(const Chunk& chunk, std::uint64_t residue) const noexcept {
  if (residue == 0) return chunk.last - chunk.first;
  unsigned hits = 0;
  for (std::uint32_t i = chunk.first; i < chunk.last; ++i) {
    if (primes_[i] == 2)
      hits += (residue & 1) == 0;
    else
      hits += residue * divisors_[i].inverse <= divisors_[i].limit;
  }
  return hits;
}

TruncatedOmega TrialDivisionPlan::count(const mpz_class& x) const {
  if (sgn(x) <= 0) throw DomainError("omega_truncated: x must be >= 1");
  const mpz_srcptr z = x.get_mpz_t();
  const std::size_t limbs = mpz_size(z);
  unsigned omega = 0;
  if (GMP_NUMB_BITS == 64 && limbs <= kFastLimbs) {
    std::uint64_t digit[kFastLimbs] = {};
    for (std::size_t i = 0; i < limbs; ++i) digit[i] = mpz_getlimbn(z, static_cast<mp_size_t>(i));
    for (const Chunk& chunk : chunks_) {
      u128 acc = 0;
      for (std::size_t i = 0; i < limbs; ++i) acc += static_cast<u128>(digit[i]) * chunk.weight[i];
      omega += count_in_chunk(chunk, static_cast<std::uint64_t>(acc % chunk.product));
    }
  } else {
    for (const Chunk& chunk : chunks_) omega += count_in_chunk(chunk, mpz_fdiv_ui(z, chunk.product));
  }
  return {omega, bound_};
}

TruncatedOmega omega_truncated(const mpz_class& x, const PrimeTable& table) {
  return TrialDivisionPlan(table).count(x);
}

}  // namespace omega_lab
