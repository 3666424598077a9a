#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "sievemoments/comb_linalg.hpp"
#include "sievemoments/error.hpp"

using namespace sievemoments;

namespace {

// rank of an integer matrix by fraction-free elimination over mpz
unsigned rank_of(std::vector<std::vector<long>> rows) {
  std::vector<std::vector<mpz_class>> a;
  for (auto& r : rows) a.emplace_back(r.begin(), r.end());
  if (a.empty()) return 0;
  const std::size_t n = a[0].size();
  unsigned rank = 0;
  for (std::size_t col = 0; col < n && rank < a.size(); ++col) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][col] == 0) continue;
      const mpz_class f = a[r][col], g = a[rank][col];
      for (std::size_t c = 0; c < n; ++c) a[r][c] = a[r][c] * g - a[rank][c] * f;
    }
    ++rank;
  }
  return rank;
}

std::vector<long> sform(unsigned mask, unsigned n) {
  std::vector<long> v(n, 0);
  for (unsigned i = 0; i < n; ++i) v[i] = mask >> i & 1;
  return v;
}

// sum over nonempty J with s_J in span(gens) of (-1)^{#J}
long oracle_A(const std::vector<std::vector<long>>& gens, unsigned n) {
  const unsigned r = rank_of(gens);
  long total = 0;
  for (unsigned J = 1; J < (1u << n); ++J) {
    auto g = gens;
    g.push_back(sform(J, n));
    if (rank_of(g) == r) total += std::popcount(J) % 2 ? -1 : 1;
  }
  return total;
}

std::vector<LinearForm> forms(const std::vector<std::vector<long>>& rows) {
  std::vector<LinearForm> f;
  for (const auto& r : rows) f.push_back(LinearForm::from_ints(r));
  return f;
}

}  // namespace

TEST_CASE("subset forms") {
  CHECK(subset_form(0b0011, 4) == LinearForm::from_ints({1, 1, 0, 0}));
  CHECK(subset_form(0b1111, 4) == LinearForm::from_ints({1, 1, 1, 1}));
  for (unsigned I = 1; I < 64; ++I) {
    mpq_class sum = 0;
    const auto f = subset_form(I, 6);
    for (const auto& c : f.coeffs()) sum += c;
    CHECK((std::popcount(I) % 2 == 0) == (sum.get_num() % 2 == 0));
  }
  CHECK_THROWS_AS(subset_form(0, 4), UsageError);
  const auto a = LinearForm::from_ints({2, -4, 6});
  CHECK(a.canonical() == LinearForm::from_ints({1, -2, 3}));
  CHECK(LinearForm::from_ints({-3, 6, 0}).canonical() == LinearForm::from_ints({1, -2, 0}));
  CHECK((a - a).is_zero());
}

TEST_CASE("spans") {
  CHECK(span(forms({{1, 1, 0, 0}, {1, 1, 0, 0}}), 4).dim() == 1);
  std::vector<LinearForm> singles;
  for (unsigned i = 0; i < 6; ++i) singles.push_back(subset_form(1u << i, 6));
  CHECK(span(singles, 6).dim() == 6);
  // s1+s2 and s1-s2 span s1 and s2, but not s3
  const auto V = span(forms({{1, 1, 0}, {1, -1, 0}}), 3);
  CHECK(V.contains(LinearForm::from_ints({1, 0, 0})));
  CHECK(V.contains(LinearForm::from_ints({0, 5, 0})));
  CHECK(!V.contains(LinearForm::from_ints({0, 0, 1})));
  CHECK(V.key() == span(forms({{1, 0, 0}, {0, 1, 0}}), 3).key());
  CHECK(V.key() != span(forms({{1, 0, 0}, {0, 0, 1}}), 3).key());
  CHECK(span({}, 4).dim() == 0);
}

TEST_CASE("A(V): worked values") {
  CHECK(script_A(span(forms({{1, 1}}), 2)) == 1);
  const auto eq = span(forms({{-1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}}), 4);
  CHECK(script_A(eq) == 5);
  CHECK(eq.dim() == 3);
  for (unsigned j = 0; j < 4; ++j) {
    auto g = forms({{1, 1, 1, 1}, {1, 1, 0, 0}});
    g.push_back(subset_form(1u << j, 4));
    CHECK(script_A(span(g, 4)) == -1);
  }
  // the configuration found by the exhaustive scan at 2k=4
  const auto pairs = span(forms({{1, 1, 0, 0}, {0, 0, 1, 1}}), 4);
  CHECK(pairs.dim() == 2);
  CHECK(script_A(pairs) == 3);
  CHECK(oracle_A({{1, 1, 0, 0}, {0, 0, 1, 1}}, 4) == 3);
}

TEST_CASE("A(V) agrees with rank-based membership on random subspaces") {
  std::mt19937_64 rng(11);
  for (unsigned n : {2u, 4u, 6u})
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<std::vector<long>> gens{sform((1u << n) - 1, n)};
      const int extra = static_cast<int>(rng() % n);
      for (int i = 0; i < extra; ++i) gens.push_back(sform(static_cast<unsigned>(rng() % ((1u << n) - 1)) + 1, n));
      const auto V = span(forms(gens), n);
      CHECK(V.dim() == rank_of(gens));
      const long a = script_A(V);
      CHECK(a == oracle_A(gens, n));
      // generating set independence: shuffle and add a redundant member
      auto g2 = gens;
      std::shuffle(g2.begin(), g2.end(), rng);
      std::vector<long> sum(n, 0);
      for (const auto& r : gens)
        for (unsigned i = 0; i < n; ++i) sum[i] += r[i];
      g2.push_back(sum);
      CHECK(script_A(span(forms(g2), n)) == a);
      CHECK(span(forms(g2), n).key() == V.key());
    }
}

TEST_CASE("subspace scan at 2k=2 and 2k=4") {
  const auto r1 = verify_combprop(1);
  CHECK(r1.exhaustive);
  CHECK(r1.ok());
  const auto r2 = verify_combprop(2);
  CHECK(r2.exhaustive);
  CHECK(r2.distinct == 18);
  CHECK(r2.violations_a == 0);
  CHECK(r2.violations_b == 0);
  CHECK(r2.equality_count == 3);
  CHECK(r2.equality_expected == 3);
  CHECK(r2.equality_matches);
  // dim-2 subspaces spanned by two complementary pairs exceed the dim <= 2k-2 bound by 1
  CHECK(r2.violations_c == 3);
  CHECK(r2.max_excess_c == 1);
  CHECK(!r2.ok());
}

TEST_CASE("sampled subspace scan at 2k=6") {
  const auto r = verify_combprop(3, 100000);
  CHECK(!r.exhaustive);
  CHECK(r.generated == 100000);
  CHECK(r.violations_a == 0);
  CHECK(r.violations_b == 0);
  CHECK(r.violations_c == 0);
  CHECK(r.equality_expected == 10);
  const auto again = verify_combprop(3, 100000);
  CHECK(again.distinct == r.distinct);
  CHECK_THROWS_AS(verify_combprop(3, 10), UsageError);
  CHECK_THROWS_AS(verify_combprop(5), UsageError);
}

TEST_CASE("moment integral M(lambda)") {
  auto closed = [](double l) {
    return std::pow(2.0, l) * std::tgamma((l + 1) / 2) / (std::sqrt(std::numbers::pi) * std::tgamma(l / 2 + 1));
  };
  CHECK(std::abs(m_lambda(2) - 2) < 1e-6);
  CHECK(std::abs(m_lambda(4) - 6) < 1e-6);
  CHECK(std::abs(m_lambda(1) - 4 / std::numbers::pi) < 1e-6);
  CHECK(std::abs(m_lambda(3) - 32 / (3 * std::numbers::pi)) < 1e-6);
  CHECK(std::abs(m_lambda(0) - 1) < 1e-12);
  for (double l = 0.25; l <= 10; l += 0.25) CHECK(std::abs(m_lambda(l) - closed(l)) < 1e-8 * closed(l));
  for (unsigned k = 1; k <= 6; ++k) {
    double c = 1;
    for (unsigned i = 1; i <= k; ++i) c = c * (k + i) / i;
    CHECK(std::abs(m_lambda(2.0 * k) - c) < 1e-6 * c);
  }
  for (double a = 0.5; a <= 8; a += 0.5)
    for (double b = a + 0.5; b <= 8; b += 0.5) CHECK(m_lambda(a) * m_lambda(b) >= std::pow(m_lambda((a + b) / 2), 2) - 1e-6);
  CHECK_THROWS_AS(m_lambda(-1), UsageError);
}
