#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sievemoments/core_arith.hpp"
#include "sievemoments/error.hpp"

using namespace sievemoments;

TEST_CASE("least prime factor table") {
  const auto t = SpfTable::build(10000);
  const std::uint64_t small[] = {0, 0, 2, 3, 2, 5, 2, 7, 2, 3, 2};
  for (std::uint64_t n = 2; n <= 10; ++n) CHECK(t.spf(n) == small[n]);
  CHECK(t.spf(49) == 7);
  CHECK(t.spf(9973) == 9973);
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    const auto f = oracle::trial_factor(n);
    REQUIRE(t.spf(n) == f.front().first);
  }
  std::uint64_t count = 0;
  for (std::uint64_t n = 2; n <= 10000; ++n) count += oracle::prime(n);
  CHECK(t.primes().size() == count);
  CHECK_THROWS_AS(SpfTable::build(1), UsageError);
  CHECK_THROWS_AS(t.spf(10001), UsageError);
}

TEST_CASE("factorization") {
  CHECK(factor(1).factors().empty());
  CHECK(factor(12).factors() == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factor(286).factors() == std::vector<PrimePower>{{2, 1}, {11, 1}, {13, 1}});
  CHECK_THROWS_AS(factor(0), UsageError);

  const auto table = SpfTable::build(5000);
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    const auto want = oracle::trial_factor(n);
    for (const auto* tp : {static_cast<const SpfTable*>(nullptr), &table}) {
      const auto got = factor(n, tp).factors();
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].prime == want[i].first);
        CHECK(got[i].exponent == want[i].second);
      }
    }
  }

  // products of two large primes and a few awkward 64-bit values
  const std::uint64_t big[] = {1000003ull * 1000033ull, 4294967291ull * 4294967279ull,
                               (1ull << 61) - 1, 600851475143ull, 999999999989ull * 3ull};
  for (auto n : big) {
    const auto f = factor(n);
    std::uint64_t prod = 1;
    for (const auto& pp : f.factors()) {
      CHECK(is_prime(pp.prime));
      for (unsigned i = 0; i < pp.exponent; ++i) prod *= pp.prime;
    }
    CHECK(prod == n);
  }
}

TEST_CASE("FactoredInteger validation") {
  CHECK_NOTHROW(FactoredInteger(12, {{2, 2}, {3, 1}}));
  CHECK_THROWS_AS(FactoredInteger(12, {{3, 1}, {2, 2}}), UsageError);
  CHECK_THROWS_AS(FactoredInteger(13, {{2, 2}, {3, 1}}), UsageError);
  const auto f = factor(360);
  CHECK(f.divisor_count() == 24);
  CHECK(f.largest_prime() == 5);
  CHECK(f.smallest_prime() == 2);
  CHECK(factor(1).smallest_prime() == kInfinitePrime);
  CHECK(!f.is_squarefree());
  CHECK(factor(30).is_squarefree());
}

TEST_CASE("mobius") {
  CHECK(mobius(std::uint64_t{1}) == 1);
  CHECK(mobius(std::uint64_t{6}) == 1);
  CHECK(mobius(std::uint64_t{12}) == 0);
  for (std::uint64_t n = 1; n <= 10000; ++n) REQUIRE(mobius(n) == oracle::mu(n));
}

TEST_CASE("divisors") {
  CHECK(divisors(factor(1)) == std::vector<std::uint64_t>{1});
  CHECK(divisors(factor(12)) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(factor(143)) == std::vector<std::uint64_t>{1, 11, 13, 143});
  for (std::uint64_t n = 1; n <= 3000; ++n) REQUIRE(divisors(factor(n)) == oracle::divisors(n));

  for (std::uint64_t n = 1; n <= 3000; ++n) {
    std::vector<std::pair<std::uint64_t, int>> want;
    for (auto d : oracle::divisors(n))
      if (oracle::mu(d)) want.emplace_back(d, oracle::mu(d));
    auto got = squarefree_divisors(factor(n));
    std::vector<std::pair<std::uint64_t, int>> g;
    for (auto [d, m] : got) g.emplace_back(d, m);
    std::sort(g.begin(), g.end());
    REQUIRE(g == want);
  }
  // 2^21 squarefree divisors is over the default cap
  std::vector<PrimePower> many;
  std::uint64_t value = 1;
  for (auto p : primes_up_to(100)) {
    if (many.size() == 15) break;
    many.push_back({p, 1});
    value *= p;
  }
  CHECK_THROWS_AS(divisors(FactoredInteger(value, many), 1000), ScaleError);
}

TEST_CASE("prime-factor counts in a range") {
  CHECK(omega_upto(factor(12), 1, 10) == 3);
  CHECK(omega_upto(factor(12), 2, 10) == 1);
  CHECK(omega_upto(factor(1), 1, 100) == 0);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t n = rng() % 100000 + 1, R = rng() % 200 + 2, r = rng() % R + 1;
    unsigned want = 0;
    for (auto [p, e] : oracle::trial_factor(n))
      if (p > r && p <= R) want += e;
    REQUIRE(omega_upto(factor(n), r, R) == want);
  }
  CHECK_THROWS_AS(omega_upto(factor(12), 5, 4), UsageError);
}

TEST_CASE("smooth numbers") {
  CHECK(smooth_numbers(2, 10) == std::vector<std::uint64_t>{1, 2, 4, 8});
  CHECK(smooth_numbers(3, 12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 8, 9, 12});
  std::vector<std::uint64_t> want;
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    const auto f = oracle::trial_factor(n);
    if (f.empty() || f.back().first <= 5) want.push_back(n);
  }
  CHECK(smooth_numbers(5, 10000) == want);
  CHECK_THROWS_AS(smooth_numbers(1, 10), UsageError);
}

TEST_CASE("squarefree numbers with their mobius values") {
  const auto sf = squarefree_up_to(2000);
  std::vector<std::pair<std::uint64_t, int>> got, want;
  for (auto [d, m] : sf) got.emplace_back(d, m);
  std::sort(got.begin(), got.end());
  for (std::uint64_t n = 1; n <= 2000; ++n)
    if (oracle::mu(n)) want.emplace_back(n, oracle::mu(n));
  CHECK(got == want);
}

TEST_CASE("primality and prime lists") {
  std::vector<std::uint64_t> want;
  for (std::uint64_t n = 0; n <= 5000; ++n) {
    REQUIRE(is_prime(n) == oracle::prime(n));
    if (oracle::prime(n)) want.push_back(n);
  }
  CHECK(primes_up_to(5000) == want);
  CHECK(is_prime(18446744073709551557ull));
  CHECK(!is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
}
