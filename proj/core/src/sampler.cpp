#include "omega_lab/sampler.hpp"

#include <algorithm>

#include "omega_lab/errors.hpp"
#include "omega_lab/parallel.hpp"
#include "omega_lab/philox.hpp"
#include "omega_lab/prime_engine.hpp"

namespace omega_lab {

BigBound BigBound::parse(std::string_view decimal) {
  if (decimal.empty()) throw DomainError("bound: empty decimal string");
  if (!std::all_of(decimal.begin(), decimal.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw DomainError("bound: '" + std::string(decimal) + "' is not a decimal integer");
  if (decimal.front() == '0')
    throw DomainError("bound: '" + std::string(decimal) + "' must be >= 1 without leading zeros");

  BigBound bound;
  bound.decimal_ = std::string(decimal);
  bound.value_ = mpz_class(bound.decimal_, 10);
  bound.bit_length_ = mpz_sizeinbase(bound.value_.get_mpz_t(), 2);
  return bound;
}

BigBound BigBound::from_u64(std::uint64_t value) { return parse(std::to_string(value)); }

std::optional<std::uint64_t> BigBound::to_u64() const {
  if (bit_length_ > 64) return std::nullopt;
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value_.get_mpz_t());
  return out;
}

SampleDraw sample_uniform_traced(const BigBound& bound, std::uint64_t index, std::uint64_t seed) {
  const std::size_t bits = bound.bit_length();
  const std::size_t words = (bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(bits % 64);
  const std::uint64_t top_mask = top_bits == 0 ? ~0ULL : (1ULL << top_bits) - 1;

  CounterStream stream(seed, index);
  std::vector<std::uint64_t> limbs(words);
  SampleDraw draw;
  for (;;) {
    ++draw.rounds;
    for (auto& limb : limbs) limb = stream.next();
    limbs.back() &= top_mask;
    mpz_import(draw.value.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, limbs.data());
    if (draw.value < bound.value()) {
      draw.value += 1;
      return draw;
    }
  }
}

mpz_class sample_uniform(const BigBound& bound, std::uint64_t index, std::uint64_t seed) {
  return sample_uniform_traced(bound, index, seed).value;
}

SampleBatch sample_batch(const BigBound& bound, std::uint64_t seed, std::uint64_t count,
                         std::uint64_t first_index, unsigned threads) {
  SampleBatch batch{seed, first_index, bound, std::vector<mpz_class>(count)};
  parallel_for(count, threads, [&](std::size_t i) {
    batch.values[i] = sample_uniform(bound, first_index + i, seed);
  });
  return batch;
}

std::ranges::iota_view<std::uint64_t, std::uint64_t> exhaustive_range(std::uint64_t n) {
  if (n == 0) throw DomainError("exhaustive_range: n must be >= 1");
  if (n > kRangeCap) throw CapacityError("exhaustive_range: n exceeds range cap");
  return std::views::iota(std::uint64_t{1}, n + 1);
}

}  // namespace omega_lab
