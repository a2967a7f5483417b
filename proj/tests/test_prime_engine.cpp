#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "omega_lab/errors.hpp"
#include "omega_lab/prime_engine.hpp"
#include "oracles.hpp"

using namespace omega_lab;

TEST_SUITE("prime_engine") {
  TEST_CASE("primes_up_to small bounds") {
    const auto ten = primes_up_to(10);
    CHECK(std::vector<std::uint32_t>(ten.primes().begin(), ten.primes().end()) ==
          std::vector<std::uint32_t>{2, 3, 5, 7});
    const auto two = primes_up_to(2);
    REQUIRE(two.size() == 1);
    CHECK(two.primes()[0] == 2);
    CHECK(primes_up_to(3).size() == 2);
  }

  TEST_CASE("table up to 100 matches trial division") {
    const auto t = primes_up_to(100);
    const auto expected = oracle::primes_between(2, 100);
    CHECK(t.size() == 25);
    CHECK(std::vector<std::uint64_t>(t.primes().begin(), t.primes().end()) == expected);
  }

  TEST_CASE("membership bit set exactly for listed values") {
    const auto t = primes_up_to(5000);
    std::size_t listed = 0;
    for (std::uint64_t n = 0; n <= t.bound(); ++n) {
      const bool in = t.contains(n);
      CHECK(in == oracle::is_prime(n));
      listed += in;
    }
    CHECK(listed == t.size());
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t.primes()[i - 1] < t.primes()[i]);
  }

  TEST_CASE("prime counting spot checks") {
    // pi(1e4) from the trial-division oracle; pi(1e6) is a regression constant.
    CHECK(oracle::primes_between(2, 10000).size() == 1229);
    CHECK(primes_up_to(10000).size() == 1229);
    CHECK(primes_up_to(1'000'000).size() == 78498);
  }

  TEST_CASE("segment size and thread count do not change the table") {
    const auto reference = primes_up_to(200'003);
    for (const std::uint64_t seg : {128ULL, 1000ULL, 4096ULL, 1ULL << 16}) {
      for (const unsigned threads : {1u, 3u}) {
        const auto t = primes_up_to(200'003, {seg, threads});
        CHECK(std::equal(t.primes().begin(), t.primes().end(), reference.primes().begin(),
                         reference.primes().end()));
      }
    }
  }

  TEST_CASE("primes_up_to errors") {
    CHECK_THROWS_AS(primes_up_to(0), DomainError);
    CHECK_THROWS_AS(primes_up_to(1), DomainError);
    CHECK_THROWS_AS(primes_up_to(kRangeCap + 1), CapacityError);
  }

  TEST_CASE("isqrt is exact") {
    CHECK(isqrt(0) == 0);
    CHECK(isqrt(15) == 3);
    CHECK(isqrt(16) == 4);
    CHECK(isqrt(~0ULL) == 0xFFFFFFFFULL);
    CHECK(isqrt(0xFFFFFFFE00000001ULL) == 0xFFFFFFFFULL);
    CHECK(isqrt(0xFFFFFFFE00000000ULL) == 0xFFFFFFFEULL);
  }

  TEST_CASE("spf_table") {
    const auto small = spf_table(12);
    CHECK(small[12] == 2);
    CHECK(small[9] == 3);
    CHECK(small.at(11) == 11);
    CHECK_THROWS_AS(small.at(13), PreconditionError);
    CHECK_THROWS_AS(small.at(1), PreconditionError);
    CHECK_THROWS_AS(spf_table(1), DomainError);
    CHECK_THROWS_AS(spf_table(kSpfCap + 1), CapacityError);
  }

  TEST_CASE("spf_table up to 1e5 against trial division and the prime table") {
    const auto spf = spf_table(100'000);
    const auto primes = primes_up_to(100'000);
    for (std::uint64_t n = 2; n <= 100'000; ++n) {
      REQUIRE(spf[n] == oracle::smallest_prime_factor(n));
      REQUIRE((spf[n] == n) == primes.contains(n));
    }
  }

  TEST_CASE("sieve_segment examples") {
    const auto base10 = primes_up_to(10);
    CHECK(sieve_segment(90, 100, base10).to_vector() == std::vector<std::uint64_t>{97});
    CHECK(sieve_segment(2, 10, base10).to_vector() == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(sieve_segment(2, 2, base10).to_vector() == std::vector<std::uint64_t>{2});
  }

  TEST_CASE("sieve_segment window near 1e6 equals brute force") {
    const auto base = primes_up_to(1100);
    const auto seg = sieve_segment(1'000'000, 1'010'000, base);
    CHECK(seg.to_vector() == oracle::primes_between(1'000'000, 1'010'000));
    CHECK(seg.count() == seg.to_vector().size());
  }

  TEST_CASE("sieve_segment preconditions") {
    const auto base = primes_up_to(10);
    CHECK_THROWS_AS(sieve_segment(100, 200, base), PreconditionError);  // sqrt(200) > 10
    CHECK_THROWS_AS(sieve_segment(1, 10, base), DomainError);
    CHECK_THROWS_AS(sieve_segment(20, 10, base), DomainError);
  }

  TEST_CASE("sieve_segment near 1e12") {
    const auto base = primes_up_to(1'000'000);
    const std::uint64_t hi = 1'000'000'000'000ULL;
    const auto seg = sieve_segment(hi - 100, hi, base);
    CHECK(seg.to_vector() == oracle::primes_between(hi - 100, hi));
    CHECK(seg.contains(hi - 11));  // largest prime below 1e12
  }

  TEST_CASE("segment composition: any split reproduces the whole") {
    const auto base = primes_up_to(2000);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
      const std::uint64_t lo = 2 + rng() % 3'000'000;
      const std::uint64_t hi = lo + rng() % 20'000;
      const std::uint64_t mid = lo + rng() % (hi - lo + 1);
      auto left = sieve_segment(lo, mid, base).to_vector();
      if (mid < hi) {
        const auto right = sieve_segment(mid + 1, hi, base).to_vector();
        left.insert(left.end(), right.begin(), right.end());
      }
      CHECK(left == sieve_segment(lo, hi, base).to_vector());
    }
  }

  TEST_CASE("concatenated segments reproduce primes_up_to") {
    const auto full = primes_up_to(500'000);
    const auto base = primes_up_to(isqrt(500'000));
    std::vector<std::uint64_t> joined;
    for (std::uint64_t lo = 2; lo <= 500'000; lo += 37'501) {
      const auto part = sieve_segment(lo, std::min<std::uint64_t>(500'000, lo + 37'500), base);
      const auto v = part.to_vector();
      joined.insert(joined.end(), v.begin(), v.end());
    }
    CHECK(std::equal(joined.begin(), joined.end(), full.primes().begin(), full.primes().end()));
  }

  TEST_CASE("cache file layout and round trip") {
    const auto t = primes_up_to(30);
    std::stringstream buf;
    save_prime_table(t, buf);
    const std::string bytes = buf.str();
    // magic + u64 bound + ceil(15 odd numbers / 8) bytes
    REQUIRE(bytes.size() == 8 + 8 + 2);
    CHECK(bytes.substr(0, 8) == "EKPRIME1");
    CHECK(static_cast<unsigned char>(bytes[8]) == 30);
    for (int i = 9; i < 16; ++i) CHECK(bytes[i] == 0);
    // Bits for odd numbers 1,3,5,...: primes 3,5,7 | 11,13 | 17,19 | 23 | 29.
    // byte 0 covers 1..15: bits 1,2,3,5,6 -> 0b01101110
    CHECK(static_cast<unsigned char>(bytes[16]) == 0x6E);
    // byte 1 covers 17..29: 17(b0) 19(b1) 23(b3) 29(b6) -> 0b01001011
    CHECK(static_cast<unsigned char>(bytes[17]) == 0x4B);

    std::stringstream in(bytes);
    const auto loaded = load_prime_table(in, 30);
    CHECK(std::equal(loaded.primes().begin(), loaded.primes().end(), t.primes().begin(),
                     t.primes().end()));
  }

  TEST_CASE("cache loader verifies magic and bound") {
    const auto t = primes_up_to(1000);
    std::stringstream buf;
    save_prime_table(t, buf);
    std::string bytes = buf.str();

    std::stringstream wrong_bound(bytes);
    CHECK_THROWS_AS(load_prime_table(wrong_bound, 999), FormatError);

    std::string bad_magic = bytes;
    bad_magic[7] = '2';
    std::stringstream bm(bad_magic);
    CHECK_THROWS_AS(load_prime_table(bm, 1000), FormatError);

    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(load_prime_table(truncated, 1000), FormatError);

    std::stringstream ok(bytes);
    CHECK(load_prime_table(ok, 1000).size() == 168);
  }
}
