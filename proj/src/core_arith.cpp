#include "sievemoments/core_arith.hpp"

#include <algorithm>
#include <new>
#include <numeric>
#include <string>

#include "sievemoments/error.hpp"

namespace sievemoments {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> primes = primes_up_to(1u << 16);
  return primes;
}

std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_large(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  split_large(d, out);
  split_large(n / d, out);
}

}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

FactoredInteger::FactoredInteger(std::uint64_t value, std::vector<PrimePower> factors)
    : value_(value), factors_(std::move(factors)) {
  if (value_ == 0) throw UsageError("FactoredInteger requires n >= 1");
  u128 product = 1;
  std::uint64_t prev = 1;
  for (const auto& [p, e] : factors_) {
    if (p <= prev || e == 0 || !is_prime(p))
      throw UsageError("factor list must hold strictly increasing primes with exponent >= 1");
    prev = p;
    for (unsigned i = 0; i < e; ++i) {
      product *= p;
      if (product > value_) throw UsageError("factor list does not multiply to the value");
    }
  }
  if (product != value_) throw UsageError("factor list does not multiply to the value");
}

FactoredInteger FactoredInteger::trusted(std::uint64_t value, std::vector<PrimePower> factors) {
  FactoredInteger f;
  f.value_ = value;
  f.factors_ = std::move(factors);
  return f;
}

std::uint64_t FactoredInteger::largest_prime() const {
  return factors_.empty() ? 1 : factors_.back().prime;
}

std::uint64_t FactoredInteger::smallest_prime() const {
  return factors_.empty() ? kInfinitePrime : factors_.front().prime;
}

bool FactoredInteger::is_squarefree() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

unsigned FactoredInteger::total_primes() const {
  unsigned total = 0;
  for (const auto& pp : factors_) total += pp.exponent;
  return total;
}

std::uint64_t FactoredInteger::divisor_count() const {
  std::uint64_t tau = 1;
  for (const auto& pp : factors_) tau *= pp.exponent + 1;
  return tau;
}

SpfTable SpfTable::build(std::uint64_t limit) {
  if (limit < 2) throw UsageError("SpfTable limit must be >= 2");
  if (limit > std::numeric_limits<std::uint32_t>::max())
    throw ScaleError("SpfTable limit exceeds 32-bit range");
  SpfTable t;
  t.limit_ = limit;
  try {
    t.spf_.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate SPF table of size " + std::to_string(limit));
  }
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.spf_[i] == 0) {
      t.spf_[i] = static_cast<std::uint32_t>(i);
      t.primes_.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t si = t.spf_[i];
    for (std::uint32_t p : t.primes_) {
      if (p > si || static_cast<std::uint64_t>(p) * i > limit) break;
      t.spf_[p * i] = p;
    }
  }
  return t;
}

std::uint64_t SpfTable::spf(std::uint64_t n) const {
  if (n < 2 || n > limit_) throw UsageError("SpfTable index out of range");
  return spf_[n];
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger factor(std::uint64_t n, const SpfTable* table) {
  if (n == 0) throw UsageError("factor requires n >= 1");
  std::vector<PrimePower> out;
  auto push = [&out](std::uint64_t p) {
    if (!out.empty() && out.back().prime == p)
      ++out.back().exponent;
    else
      out.push_back({p, 1});
  };
  std::uint64_t m = n;
  if (table != nullptr && n <= table->limit()) {
    while (m > 1) {
      const std::uint64_t p = table->spf(m);
      push(p);
      m /= p;
    }
    return FactoredInteger::trusted(n, std::move(out));
  }
  for (std::uint64_t p : small_primes()) {
    if (p * p > m) break;
    while (m % p == 0) {
      push(p);
      m /= p;
    }
  }
  if (m > 1) {
    // m has no prime factor below 2^16; below 2^32 that makes it prime.
    std::vector<std::uint64_t> rest;
    if (m < (std::uint64_t{1} << 32))
      rest.push_back(m);
    else
      split_large(m, rest);
    std::sort(rest.begin(), rest.end());
    for (std::uint64_t p : rest) push(p);
  }
  return FactoredInteger::trusted(n, std::move(out));
}

int mobius(const FactoredInteger& n) {
  if (!n.is_squarefree()) return 0;
  return (n.distinct_primes() % 2 == 0) ? 1 : -1;
}

int mobius(std::uint64_t n) { return mobius(factor(n)); }

std::vector<std::uint64_t> divisors(const FactoredInteger& n, std::uint64_t cap) {
  const std::uint64_t tau = n.divisor_count();
  if (tau > cap)
    throw ScaleError("too many divisors: tau(" + std::to_string(n.value()) +
                     ") = " + std::to_string(tau) + " exceeds cap " + std::to_string(cap));
  std::vector<std::uint64_t> ds{1};
  ds.reserve(tau);
  for (const auto& [p, e] : n.factors()) {
    const std::size_t base = ds.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

std::vector<SignedDivisor> squarefree_divisors(const FactoredInteger& n, std::uint64_t cap) {
  const unsigned w = n.distinct_primes();
  if (w >= 64 || (std::uint64_t{1} << w) > cap)
    throw ScaleError("too many divisors: 2^" + std::to_string(w) + " squarefree divisors of " +
                     std::to_string(n.value()) + " exceed cap " + std::to_string(cap));
  std::vector<SignedDivisor> ds{{1, 1}};
  ds.reserve(std::size_t{1} << w);
  for (const auto& pp : n.factors()) {
    const std::size_t base = ds.size();
    for (std::size_t i = 0; i < base; ++i) ds.push_back({ds[i].d * pp.prime, -ds[i].mu});
  }
  std::sort(ds.begin(), ds.end(),
            [](const SignedDivisor& a, const SignedDivisor& b) { return a.d < b.d; });
  return ds;
}

unsigned omega_upto(const FactoredInteger& n, std::uint64_t r, std::uint64_t R) {
  if (r < 1 || r > R) throw UsageError("omega_upto requires 1 <= r <= R");
  unsigned total = 0;
  for (const auto& [p, e] : n.factors())
    if (p > r && p <= R) total += e;
  return total;
}

std::vector<std::uint64_t> smooth_numbers(std::uint64_t R, std::uint64_t bound) {
  if (R < 2) throw UsageError("smooth_numbers requires R >= 2");
  std::vector<std::uint64_t> out;
  if (bound == 0) return out;
  const auto primes = primes_up_to(std::min(R, bound));
  // Depth-first over nondecreasing prime sequences; each n appears once.
  struct Frame {
    std::uint64_t value;
    std::size_t next;
  };
  std::vector<Frame> stack{{1, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    out.push_back(f.value);
    for (std::size_t i = f.next; i < primes.size(); ++i) {
      if (f.value > bound / primes[i]) break;
      stack.push_back({f.value * primes[i], i});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SignedDivisor> squarefree_up_to(std::uint64_t limit) {
  std::vector<SignedDivisor> out;
  if (limit == 0) return out;
  std::vector<int> mu(limit + 1, 1);
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t j = p; j <= limit; j += p) {
      if (j > p) composite[j] = true;
      mu[j] = -mu[j];
    }
    if (p <= limit / p)
      for (std::uint64_t j = p * p; j <= limit; j += p * p) mu[j] = 0;
  }
  for (std::uint64_t n = 1; n <= limit; ++n)
    if (mu[n] != 0) out.push_back({n, mu[n]});
  return out;
}

}  // namespace sievemoments
