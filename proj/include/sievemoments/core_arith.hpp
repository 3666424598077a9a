#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sievemoments/options.hpp"

namespace sievemoments {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// An integer n >= 1 together with its prime factorization (primes ascending).
class FactoredInteger {
 public:
  FactoredInteger() = default;
  // Throws UsageError if the factors do not multiply to `value` or are not
  // strictly increasing primes with positive exponents.
  FactoredInteger(std::uint64_t value, std::vector<PrimePower> factors);
  // Skips validation; for factorizations produced by this library.
  static FactoredInteger trusted(std::uint64_t value, std::vector<PrimePower> factors);

  std::uint64_t value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }

  // P+(n); P+(1) = 1.
  std::uint64_t largest_prime() const;
  // P-(n); P-(1) = +infinity, represented by UINT64_MAX.
  std::uint64_t smallest_prime() const;

  bool is_squarefree() const;
  unsigned distinct_primes() const { return static_cast<unsigned>(factors_.size()); }
  unsigned total_primes() const;
  std::uint64_t divisor_count() const;

  friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;

 private:
  std::uint64_t value_ = 1;
  std::vector<PrimePower> factors_;
};

inline constexpr std::uint64_t kInfinitePrime = std::numeric_limits<std::uint64_t>::max();

// Smallest-prime-factor table for 2 <= n <= limit (linear sieve).
class SpfTable {
 public:
  static SpfTable build(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  std::uint64_t spf(std::uint64_t n) const;
  const std::vector<std::uint32_t>& primes() const { return primes_; }

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Uses `table` when n is in range, otherwise trial division by primes below
// 2^16 followed by Miller-Rabin and Pollard rho on the cofactor.
FactoredInteger factor(std::uint64_t n, const SpfTable* table = nullptr);

int mobius(const FactoredInteger& n);
int mobius(std::uint64_t n);

// All divisors ascending. Throws ScaleError when tau(n) exceeds `cap`.
std::vector<std::uint64_t> divisors(const FactoredInteger& n,
                                    std::uint64_t cap = kDefaultDivisorCap);

// Squarefree divisors ascending, paired with their Moebius value.
struct SignedDivisor {
  std::uint64_t d;
  int mu;
};
std::vector<SignedDivisor> squarefree_divisors(const FactoredInteger& n,
                                               std::uint64_t cap = kDefaultDivisorCap);

// Omega(n; r, R) = sum of exponents of primes p with r < p <= R.
// With r = 1 this is Omega(n; R).
unsigned omega_upto(const FactoredInteger& n, std::uint64_t r, std::uint64_t R);

// All n <= bound with P+(n) <= R, ascending.
std::vector<std::uint64_t> smooth_numbers(std::uint64_t R, std::uint64_t bound);

// Squarefree n in [1, limit] with mu(n), ascending.
std::vector<SignedDivisor> squarefree_up_to(std::uint64_t limit);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

}  // namespace sievemoments
