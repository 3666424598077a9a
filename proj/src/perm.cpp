#include "sievemoments/perm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "sievemoments/error.hpp"

namespace sievemoments {

unsigned CycleType::weight() const {
  unsigned w = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) w += static_cast<unsigned>(j + 1) * counts[j];
  return w;
}

CycleType CycleType::truncated(unsigned m) const {
  CycleType t;
  t.counts.assign(counts.begin(), counts.begin() + std::min<std::size_t>(m, counts.size()));
  return t;
}

namespace {

void partitions_rec(unsigned left, unsigned max_part, CycleType& cur, std::vector<CycleType>& out) {
  if (left == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned j = std::min(left, max_part); j >= 1; --j) {
    ++cur.counts[j - 1];
    partitions_rec(left - j, j, cur, out);
    --cur.counts[j - 1];
  }
}

mpz_class factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

}  // namespace

std::vector<CycleType> cycle_types(unsigned N) {
  std::vector<CycleType> out;
  CycleType cur;
  cur.counts.assign(N, 0);
  partitions_rec(N, N, cur, out);
  return out;
}

mpz_class class_size(const CycleType& c) {
  mpz_class denom = 1, pw;
  for (std::size_t j = 0; j < c.counts.size(); ++j) {
    if (c.counts[j] == 0) continue;
    mpz_ui_pow_ui(pw.get_mpz_t(), j + 1, c.counts[j]);
    denom *= pw * factorial(c.counts[j]);
  }
  return factorial(c.weight()) / denom;
}

mpz_class m_kernel(const CycleType& c, unsigned r, KernelVariant variant) {
  // Polynomial in x truncated at degree r.
  std::vector<mpz_class> poly(r + 1, 0);
  poly[0] = 1;
  for (std::size_t jj = 0; jj < c.counts.size(); ++jj) {
    const unsigned j = static_cast<unsigned>(jj + 1);
    const unsigned cj = c.counts[jj];
    if (cj == 0 || j > r) continue;
    std::vector<mpz_class> next(r + 1, 0);
    mpz_class coeff;
    for (unsigned b = 0; b <= cj && b * j <= r; ++b) {
      if (variant == KernelVariant::Binomial)
        mpz_bin_uiui(coeff.get_mpz_t(), cj, b);
      else
        coeff = 1;
      if (b % 2) coeff = -coeff;
      for (unsigned e = 0; e + b * j <= r; ++e)
        if (poly[e] != 0) next[e + b * j] += coeff * poly[e];
    }
    poly.swap(next);
  }
  return poly[r];
}

mpq_class perm_moment_bruteforce(unsigned N, unsigned m, unsigned k, KernelVariant variant) {
  if (N > 10) throw ScaleError("perm_moment_bruteforce enumerates S_N only for N <= 10");
  if (m > N) throw UsageError("perm_moment_bruteforce requires m <= N");
  mpz_class total = 0, p;
  for (const auto& c : cycle_types(N)) {
    const mpz_class M = m_kernel(c.truncated(m), m, variant);
    mpz_pow_ui(p.get_mpz_t(), M.get_mpz_t(), 2 * k);
    total += p * class_size(c);
  }
  mpq_class q(total, factorial(N));
  q.canonicalize();
  return q;
}

namespace {

// Subset-sum DP over the consumed vector u in [0,m]^{2k}. Variables r_I with
// odd #I are 0/1 (descending sweep), even #I unbounded (ascending sweep).
template <class T, class Add>
T lattice_count(unsigned m, unsigned dims, Add&& add) {
  const std::size_t side = m + 1;
  std::size_t states = 1;
  std::vector<std::size_t> stride(dims);
  for (unsigned i = 0; i < dims; ++i) {
    stride[i] = states;
    states *= side;
  }
  std::vector<unsigned char> nz(states, 0);
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t rest = s;
    unsigned char mask = 0;
    for (unsigned i = 0; i < dims; ++i) {
      if (rest % side) mask |= static_cast<unsigned char>(1u << i);
      rest /= side;
    }
    nz[s] = mask;
  }
  std::vector<T> dp(states, T(0));
  dp[0] = T(1);
  for (unsigned I = 1; I < (1u << dims); ++I) {
    std::size_t shift = 0;
    for (unsigned i = 0; i < dims; ++i)
      if (I & (1u << i)) shift += stride[i];
    if (std::popcount(I) % 2) {
      for (std::size_t s = states; s-- > 0;)
        if ((nz[s] & I) == I) add(dp[s], dp[s - shift]);
    } else {
      for (std::size_t s = 0; s < states; ++s)
        if ((nz[s] & I) == I) add(dp[s], dp[s - shift]);
    }
  }
  return dp[states - 1];
}

struct Overflow {};

}  // namespace

mpz_class c_count(unsigned m, unsigned k) {
  if (k < 1) throw UsageError("c_count requires k >= 1");
  if (m == 0) return 1;
  const bool feasible = k == 1 || (k == 2 && m <= 60) || (k == 3 && m <= 4);
  if (!feasible)
    throw ScaleError("c(m,k) is computed for k = 1, k = 2 with m <= 60, k = 3 with m <= 4 (got m=" +
                     std::to_string(m) + ", k=" + std::to_string(k) + ")");
  if (k == 1 && m > 4000) throw ScaleError("c(m,1) lattice too large");
  const unsigned dims = 2 * k;
  try {
    const std::uint64_t v = lattice_count<std::uint64_t>(m, dims, [](std::uint64_t& a, std::uint64_t b) {
      if (__builtin_add_overflow(a, b, &a)) throw Overflow{};
    });
    return mpz_class(static_cast<unsigned long>(v));
  } catch (const Overflow&) {
    return lattice_count<mpz_class>(m, dims, [](mpz_class& a, const mpz_class& b) { a += b; });
  }
}

namespace {

// Partitions of m as multiplicity vectors b (b[j-1] parts of size j).
std::vector<std::vector<unsigned>> partitions_of(unsigned m) {
  std::vector<std::vector<unsigned>> out;
  for (const auto& c : cycle_types(m)) out.push_back(c.counts);
  if (m == 0) out.assign(1, {});
  return out;
}

// E[prod_t g(X, beta_t)] for X ~ Poisson(lambda), g = C(x, beta) or [x >= beta].
// The series is cut where the geometric ratio bound makes the tail negligible.
struct PoissonFactor {
  double value = 0.0;
  double tail = 0.0;
};

PoissonFactor poisson_factor(double lambda, const std::vector<unsigned>& beta, KernelVariant variant) {
  unsigned top = 0;
  for (unsigned b : beta) top = std::max(top, b);
  auto g = [&](unsigned x) {
    double prod = 1.0;
    for (unsigned b : beta) {
      if (x < b) return 0.0;
      if (variant == KernelVariant::Binomial) prod *= std::round(std::exp(std::lgamma(x + 1.0) - std::lgamma(b + 1.0) - std::lgamma(x - b + 1.0)));
    }
    return prod;
  };
  // log P(X = x)
  auto logp = [&](unsigned x) { return -lambda + x * std::log(lambda) - std::lgamma(x + 1.0); };
  PoissonFactor f;
  for (unsigned x = top;; ++x) {
    const double term = std::exp(logp(x)) * g(x);
    f.value += term;
    // ratio of consecutive terms from x+1 on, decreasing in x
    double ratio = lambda / (x + 2.0);
    if (variant == KernelVariant::Binomial)
      for (unsigned b : beta) ratio *= (x + 2.0) / (x + 2.0 - b);
    if (ratio < 0.5) {
      const double next = std::exp(logp(x + 1)) * g(x + 1);
      const double bound = next / (1.0 - ratio);
      if (bound <= 1e-17 * std::max(f.value, 1e-300)) {
        f.tail = bound;
        return f;
      }
    }
    if (x > top + 400) throw ResourceError("Poisson series failed to converge");
  }
}

}  // namespace

PoissonMoment poisson_moment(unsigned m, unsigned k, double tol, KernelVariant variant) {
  if (m > 8) throw ScaleError("poisson_moment supports m <= 8");
  if (k < 1 || k > 2) throw UsageError("poisson_moment supports k in {1, 2}");
  if (!(tol >= 1e-10)) throw UsageError("poisson_moment tolerance must be >= 1e-10");
  PoissonMoment out;
  if (m == 0) {
    out.value = 1.0;
    return out;
  }
  const auto parts = partitions_of(m);
  const unsigned slots = 2 * k;
  std::map<std::pair<unsigned, std::vector<unsigned>>, PoissonFactor> memo;
  std::vector<std::size_t> pick(slots, 0);
  double sum = 0.0, carry = 0.0, abs_tail = 0.0;
  while (true) {
    double term = 1.0, rel_tail = 0.0;
    int sign = 1;
    for (unsigned j = 1; j <= m && term != 0.0; ++j) {
      std::vector<unsigned> beta(slots);
      unsigned total = 0;
      for (unsigned t = 0; t < slots; ++t) {
        const auto& b = parts[pick[t]];
        beta[t] = j <= b.size() ? b[j - 1] : 0;
        total += beta[t];
      }
      std::sort(beta.begin(), beta.end());
      if (total % 2) sign = -sign;
      if (total == 0) continue;  // factor is E[1] = 1
      auto key = std::make_pair(j, beta);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, poisson_factor(1.0 / j, beta, variant)).first;
      term *= it->second.value;
      rel_tail += it->second.tail / it->second.value;
    }
    const double y = sign * term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    abs_tail += std::abs(term) * rel_tail;
    // next tuple
    std::size_t t2 = 0;
    while (t2 < slots && ++pick[t2] == parts.size()) pick[t2++] = 0;
    if (t2 == slots) break;
  }
  out.value = sum;
  out.tail_bound = abs_tail;
  if (out.tail_bound > tol) throw ResourceError("Poisson truncation bound exceeds tolerance");
  return out;
}

ShortCycleDensity no_short_cycle_density(unsigned N, unsigned m) {
  if (N > 10) throw ScaleError("no_short_cycle_density enumerates S_N only for N <= 10");
  if (m > N) throw UsageError("no_short_cycle_density requires m <= N");
  mpz_class count = 0;
  for (const auto& c : cycle_types(N)) {
    bool ok = true;
    for (unsigned j = 1; j <= m; ++j) ok = ok && c.parts(j) == 0;
    if (ok) count += class_size(c);
  }
  ShortCycleDensity out;
  out.density = mpq_class(count, factorial(N));
  out.density.canonicalize();
  double harmonic = 0.0;
  for (unsigned j = 1; j <= m; ++j) harmonic += 1.0 / j;
  out.limit = std::exp(-harmonic);
  out.constant = m == 0 ? 0.0 : std::abs(out.density.get_d() - out.limit) * N / (double(m) * m);
  return out;
}

}  // namespace sievemoments
