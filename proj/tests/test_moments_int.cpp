#include <doctest.h>

#include <cmath>
#include <gmpxx.h>

#include "oracles.hpp"
#include "sievemoments/core_arith.hpp"
#include "sievemoments/error.hpp"
#include "sievemoments/moments_int.hpp"

using namespace sievemoments;
using doctest::Approx;

namespace {

bool supported(const WeightFunction& w, std::uint64_t d, double R) {
  if (w.kind == WeightKind::DyadicWindow) return 2.0 * d > R && d <= R;
  return d <= R;
}

// Sum over all ordered k-tuples of mu(d_i) w(d_i) / lcm(d_1..d_k), no symmetry tricks.
mpq_class brute_moment(const WeightFunction& w, double R, unsigned k) {
  std::vector<std::uint64_t> ds;
  for (std::uint64_t d = 1; d <= static_cast<std::uint64_t>(R); ++d)
    if (oracle::mu(d) && supported(w, d, R)) ds.push_back(d);
  mpq_class total = 0;
  std::vector<std::size_t> idx(k, 0);
  if (ds.empty()) return total;
  while (true) {
    int sign = 1;
    std::uint64_t l = 1;
    for (auto i : idx) {
      sign *= oracle::mu(ds[i]);
      l = std::lcm(l, ds[i]);
    }
    total += mpq_class(sign, l);
    std::size_t j = 0;
    while (j < k && ++idx[j] == ds.size()) idx[j++] = 0;
    if (j == k) break;
  }
  total.canonicalize();
  return total;
}

double brute_empirical(const WeightFunction& w, double R, unsigned k, std::uint64_t x, unsigned lo = 0,
                       unsigned hi = UINT_MAX) {
  double s = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    unsigned om = 0;
    double m = 0;
    for (auto [p, e] : oracle::trial_factor(n))
      if (p <= R) om += e;
    if (om < lo || om > hi) continue;
    for (auto d : oracle::divisors(n))
      if (oracle::mu(d) && supported(w, d, R))
        m += oracle::mu(d) * (w.kind == WeightKind::PowerSmooth ? std::pow(1 - std::log(double(d)) / std::log(R), w.A)
                                                                 : 1.0);
    s += std::pow(m, k);
  }
  return s / double(x);
}

}  // namespace

TEST_CASE("moment sums: worked values") {
  CHECK(moment_direct(WeightFunction::sharp(), 3, 1).value.rational() == mpq_class(1, 6));
  CHECK(moment_direct(WeightFunction::sharp(), 2, 2).value.rational() == mpq_class(1, 2));
  CHECK(moment_direct(WeightFunction::dyadic(), 2, 2).value.rational() == mpq_class(1, 2));
  CHECK(moment_grouped(WeightFunction::dyadic(), 2, 2).value.rational() == mpq_class(1, 2));
  for (unsigned k = 1; k <= 3; ++k) {
    CHECK(moment_direct(WeightFunction::sharp(), 1.5, k).value.rational() == 1);
    CHECK(moment_direct(WeightFunction::power(2), 1.9, k).value.to_double() == Approx(1.0));
  }
}

TEST_CASE("direct and grouped agree with the tuple-sum definition") {
  for (const auto& w : {WeightFunction::sharp(), WeightFunction::dyadic()})
    for (double R : {2.0, 5.0, 10.0, 17.0, 30.0}) {
      for (unsigned k = 1; k <= 2; ++k) {
        const auto want = brute_moment(w, R, k);
        CHECK(moment_direct(w, R, k).value.rational() == want);
        CHECK(moment_grouped(w, R, k).value.rational() == want);
      }
      if (R <= 17) {
        const auto want = brute_moment(w, R, 3);
        CHECK(moment_direct(w, R, 3).value.rational() == want);
        CHECK(moment_grouped(w, R, 3).value.rational() == want);
      }
    }
  for (double R : {50.0, 80.0})
    for (unsigned k = 1; k <= 2; ++k)
      CHECK(moment_direct(WeightFunction::sharp(), R, k).value == moment_grouped(WeightFunction::sharp(), R, k).value);
  CHECK(moment_direct(WeightFunction::dyadic(), 24, 4).value == moment_grouped(WeightFunction::dyadic(), 24, 4).value);
}

TEST_CASE("power weights give matching floating values") {
  for (unsigned A = 1; A <= 3; ++A)
    for (double R : {10.0, 25.0}) {
      const double a = moment_direct(WeightFunction::power(A), R, 2).value.to_double();
      const double b = moment_grouped(WeightFunction::power(A), R, 2).value.to_double();
      CHECK(a == Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("thread count does not change results") {
  ComputeOptions one, many;
  many.threads = 4;
  CHECK(moment_direct(WeightFunction::sharp(), 60, 2, one).value == moment_direct(WeightFunction::sharp(), 60, 2, many).value);
  const auto a = empirical_moment(WeightFunction::power(2), 20, 2, 300000, one);
  const auto b = empirical_moment(WeightFunction::power(2), 20, 2, 300000, many);
  CHECK(a.value == b.value);
  CHECK(support_count(30, 500000, one) == support_count(30, 500000, many));
}

TEST_CASE("caps raise scale errors") {
  ComputeOptions tight;
  tight.tuple_cap = 1000;
  CHECK_THROWS_AS(moment_direct(WeightFunction::sharp(), 200, 2, tight), ScaleError);
  CHECK_THROWS_AS(moment_grouped(WeightFunction::sharp(), 30, 5), UsageError);
  CHECK_THROWS_AS(moment_direct(WeightFunction::sharp(), 10, 0), UsageError);
  CHECK_THROWS_AS(moment_direct(WeightFunction::sharp(), 1.0, 1), UsageError);
  CHECK_THROWS_AS(h_count(100, 5, 4, 10), UsageError);
}

TEST_CASE("empirical moments") {
  const auto e = empirical_moment(WeightFunction::sharp(), 3, 1, 1000000);
  CHECK(std::abs(e.value - 1.0 / 6) <= 10.0 / 1e6);
  const auto d = empirical_moment(WeightFunction::dyadic(), 10, 2, 1000000);
  CHECK(std::abs(d.value - d.reference) <= 1e4 * 1.0 / 1e6);
  const auto s = empirical_moment(WeightFunction::sharp(), 10, 2, 1000000);
  CHECK(std::abs(s.value - s.reference) <= 50.0 * 100 / 1e6);
  CHECK(s.envelope_constant == Approx(std::abs(s.value - s.reference) * 1e6 / 100));
  for (const auto& w : {WeightFunction::sharp(), WeightFunction::dyadic(), WeightFunction::power(2)})
    for (unsigned k = 1; k <= 3; ++k)
      CHECK(empirical_moment(w, 12, k, 3000, {}, false).value == Approx(brute_empirical(w, 12, k, 3000)));
  ComputeOptions tight;
  tight.tuple_cap = 1000;
  CHECK(std::isnan(empirical_moment(WeightFunction::sharp(), 300, 3, 1000, tight).reference));
  CHECK(std::isnan(empirical_moment(WeightFunction::sharp(), 30, 3, 1000, {}, false).reference));
  CHECK_THROWS_AS(empirical_moment(WeightFunction::sharp(), 10, 1, 5), UsageError);
}

TEST_CASE("Omega-restricted moments") {
  const auto w = WeightFunction::sharp();
  CHECK(restricted_moment(w, 10, 2, 50000, {}) == Approx(empirical_moment(w, 10, 2, 50000, {}, false).value));
  for (unsigned C = 0; C <= 5; ++C) {
    const double below = restricted_moment(w, 10, 2, 50000, {0, C == 0 ? 0u : C - 1});
    const double above = restricted_moment(w, 10, 2, 50000, {C, UINT_MAX});
    if (C == 0)
      CHECK(above == Approx(empirical_moment(w, 10, 2, 50000, {}, false).value));
    else
      CHECK(below + above == Approx(empirical_moment(w, 10, 2, 50000, {}, false).value));
  }
  // with R >= sqrt(x), Omega(n;R)=0 leaves n=1 and the primes in (R, x]
  std::uint64_t count = 1;
  for (std::uint64_t p = 101; p <= 10000; ++p) count += oracle::prime(p);
  CHECK(restricted_moment(w, 100, 2, 10000, {0, 0}) == Approx(double(count) / 10000));
  CHECK(restricted_moment(WeightFunction::dyadic(), 15, 2, 4000, {1, 2}) ==
        Approx(brute_empirical(WeightFunction::dyadic(), 15, 2, 4000, 1, 2)));
}

TEST_CASE("support counts") {
  CHECK(support_count(4, 20) == 10);
  CHECK(support_count(1000, 1000) == 1);
  CHECK(support_count(5000, 1000) == 1);
  for (double R : {2.0, 3.0, 7.0, 12.0, 40.0}) {
    std::uint64_t want = 0;
    for (std::uint64_t n = 1; n <= 4000; ++n) {
      int s = 0;
      for (auto d : oracle::divisors(n))
        if (d <= R) s += oracle::mu(d);
      want += s != 0;
    }
    CHECK(support_count(R, 4000) == want);
  }
}

TEST_CASE("support density is not monotone in R at x = 10^6") {
  // Additive sieve written independently of the library: R=20 keeps more n than R=10.
  const std::uint64_t x = 1000000;
  auto count = [&](std::uint64_t R) {
    std::vector<int> s(x + 1, 0);
    for (std::uint64_t d = 1; d <= R; ++d)
      if (int m = oracle::mu(d))
        for (std::uint64_t n = d; n <= x; n += d) s[n] += m;
    std::uint64_t c = 0;
    for (std::uint64_t n = 1; n <= x; ++n) c += s[n] != 0;
    return c;
  };
  const std::uint64_t c10 = count(10), c20 = count(20);
  CHECK(c10 == 361904);
  CHECK(c20 == 413607);
  CHECK(support_count(10, x) == c10);
  CHECK(support_count(20, x) == c20);
  CHECK(support_count(40, x) == 347561);
  CHECK(support_count(80, x) == 351111);
}

TEST_CASE("H(X,Y;Z,W)") {
  CHECK(h_count(20, 2, 3, 6) == 2);
  for (std::uint64_t X : {10u, 57u, 300u}) CHECK(h_count(X, 1, 1, X) == X - 1);
  auto brute = [](std::uint64_t X, std::uint64_t Y, std::uint64_t Z, std::uint64_t W) {
    std::uint64_t c = 0;
    for (std::uint64_t n = 2; n <= X; ++n) {
      if (oracle::trial_factor(n).front().first <= Y) continue;
      for (auto d : oracle::divisors(n))
        if (d > Z && d <= W) {
          ++c;
          break;
        }
    }
    return c;
  };
  for (std::uint64_t Y : {1u, 2u, 3u, 5u, 11u})
    for (std::uint64_t Z : {12u, 20u, 40u})
      for (std::uint64_t W : {Z + 1, 2 * Z + 3, std::uint64_t{300}}) CHECK(h_count(2000, Y, Z, W) == brute(2000, Y, Z, W));
  std::uint64_t prev = 0;
  for (std::uint64_t W = 5; W <= 200; W += 15) {
    const auto h = h_count(5000, 3, 4, W + 4);
    CHECK(h >= prev);
    prev = h;
  }
  prev = UINT64_MAX;
  for (std::uint64_t Y = 1; Y <= 40; Y += 3) {
    const auto h = h_count(5000, Y, 40, 100);
    CHECK(h <= prev);
    prev = h;
  }
}

TEST_CASE("asymptotic exponent formula") {
  CHECK(moment_exponent(1, 1) == -1);
  CHECK(moment_exponent(2, 1) == -1);
  CHECK(moment_exponent(3, 1) == 8);
  CHECK(moment_exponent(4, 1) == 54);
  CHECK(moment_exponent(4, 3) == 38);
  CHECK(moment_exponent(5, 2) == 222);
}
