#pragma once

// Independent brute-force references used only by tests.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace omega_lab::oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t smallest_prime_factor(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

/// Distinct prime factors by trial division.
inline unsigned omega(std::uint64_t n) {
  unsigned count = 0;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    ++count;
    while (n % d == 0) n /= d;
  }
  return count + (n > 1 ? 1 : 0);
}

/// One big-integer remainder per prime p <= bound.
inline unsigned truncated_omega(const mpz_class& x, std::uint64_t bound) {
  unsigned count = 0;
  for (std::uint64_t p = 2; p <= bound; ++p)
    if (is_prime(p) && mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p))) ++count;
  return count;
}

inline std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo; n <= hi; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

}  // namespace omega_lab::oracle
