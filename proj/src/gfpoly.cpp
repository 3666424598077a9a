#include "sievemoments/gfpoly.hpp"

#include <algorithm>
#include <string>

#include "sievemoments/core_arith.hpp"
#include "sievemoments/error.hpp"
#include "sievemoments/parallel.hpp"
#include "sievemoments/perm.hpp"

namespace sievemoments {

namespace {

void check_field(std::uint32_t q) {
  if (q < 2 || q > 257 || !is_prime(q))
    throw UsageError("q must be a prime <= 257 (got " + std::to_string(q) + ")");
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t q) {
  // q is prime: a^(q-2).
  std::uint64_t r = 1, b = a % q;
  for (std::uint32_t e = q - 2; e; e >>= 1) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
  }
  return static_cast<std::uint32_t>(r);
}

void check_same_field(const GFPoly& a, const GFPoly& b) {
  if (a.q() != b.q()) throw UsageError("polynomials over different fields");
}

}  // namespace

GFPoly::GFPoly(std::uint32_t q, std::vector<std::uint32_t> coeffs) : q_(q), c_(std::move(coeffs)) {
  check_field(q);
  for (auto& x : c_) x %= q;
  trim();
}

void GFPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

GFPoly GFPoly::decode(std::uint32_t q, std::uint64_t code) {
  check_field(q);
  if (code == 0) throw UsageError("code 0 is not a monic polynomial");
  std::vector<std::uint32_t> digits;
  while (code) {
    digits.push_back(static_cast<std::uint32_t>(code % q));
    code /= q;
  }
  if (digits.back() != 1) throw UsageError("code does not spell a monic polynomial");
  return GFPoly(q, std::move(digits));
}

std::uint64_t GFPoly::encode() const {
  std::uint64_t code = 0;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (code > (UINT64_MAX - c_[i]) / q_) throw ScaleError("polynomial code exceeds 64 bits");
    code = code * q_ + c_[i];
  }
  return code;
}

GFPoly GFPoly::monic() const {
  if (is_zero()) return *this;
  const std::uint64_t inv = inverse_mod(c_.back(), q_);
  std::vector<std::uint32_t> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = static_cast<std::uint32_t>(c_[i] * inv % q_);
  return GFPoly(q_, std::move(out));
}

GFPoly operator+(const GFPoly& a, const GFPoly& b) {
  check_same_field(a, b);
  std::vector<std::uint32_t> out(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t x = i < a.c_.size() ? a.c_[i] : 0;
    const std::uint32_t y = i < b.c_.size() ? b.c_[i] : 0;
    out[i] = (x + y) % a.q_;
  }
  return GFPoly(a.q_, std::move(out));
}

GFPoly operator-(const GFPoly& a, const GFPoly& b) {
  check_same_field(a, b);
  std::vector<std::uint32_t> out(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t x = i < a.c_.size() ? a.c_[i] : 0;
    const std::uint32_t y = i < b.c_.size() ? b.c_[i] : 0;
    out[i] = (x + a.q_ - y) % a.q_;
  }
  return GFPoly(a.q_, std::move(out));
}

GFPoly operator*(const GFPoly& a, const GFPoly& b) {
  check_same_field(a, b);
  if (a.is_zero() || b.is_zero()) return GFPoly(a.q_, {});
  std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t{a.c_[i]} * b.c_[j]) % a.q_;
  return GFPoly(a.q_, std::vector<std::uint32_t>(acc.begin(), acc.end()));
}

std::pair<GFPoly, GFPoly> divmod(const GFPoly& a, const GFPoly& b) {
  check_same_field(a, b);
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  const std::uint32_t q = a.q();
  std::vector<std::uint64_t> rem(a.coeffs().begin(), a.coeffs().end());
  const auto& d = b.coeffs();
  const std::uint64_t inv = inverse_mod(d.back(), q);
  if (rem.size() < d.size()) return {GFPoly(q, {}), a};
  std::vector<std::uint32_t> quo(rem.size() - d.size() + 1, 0);
  for (std::size_t i = quo.size(); i-- > 0;) {
    const std::uint64_t c = rem[i + d.size() - 1] * inv % q;
    quo[i] = static_cast<std::uint32_t>(c);
    if (c == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) rem[i + j] = (rem[i + j] + (q - c) * d[j]) % q;
  }
  rem.resize(d.size() - 1);
  return {GFPoly(q, std::move(quo)), GFPoly(q, std::vector<std::uint32_t>(rem.begin(), rem.end()))};
}

GFPoly gcd(const GFPoly& a, const GFPoly& b) {
  GFPoly x = a, y = b;
  while (!y.is_zero()) {
    GFPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

GFPoly powmod(const GFPoly& a, std::uint64_t e, const GFPoly& m) {
  GFPoly base = divmod(a, m).second;
  GFPoly result = divmod(GFPoly(a.q(), {1}), m).second;
  for (; e; e >>= 1) {
    if (e & 1) result = divmod(result * base, m).second;
    base = divmod(base * base, m).second;
  }
  return result;
}

mpz_class irreducible_count(std::uint32_t q, unsigned j) {
  if (j == 0) throw UsageError("irreducible_count needs degree >= 1");
  mpz_class total = 0, p;
  for (std::uint64_t d : divisors(factor(j))) {
    const int mu = mobius(d);
    if (mu == 0) continue;
    mpz_ui_pow_ui(p.get_mpz_t(), q, j / d);
    total += mu * p;
  }
  return total / j;
}

namespace {

std::vector<std::uint64_t> powers(std::uint32_t q, unsigned n) {
  std::vector<std::uint64_t> pw(n + 2, 1);
  for (unsigned i = 1; i < pw.size(); ++i) pw[i] = pw[i - 1] * q;
  return pw;
}

std::vector<std::uint32_t> digits_of(std::uint64_t code, std::uint32_t q) {
  std::vector<std::uint32_t> d;
  while (code) {
    d.push_back(static_cast<std::uint32_t>(code % q));
    code /= q;
  }
  return d;
}

// Calls fn(code of P*H) for every monic H of degree g. Stepping the base-q
// odometer over H's low coefficients adds t^i P to the running product.
template <class Fn>
void for_each_multiple(const std::vector<std::uint32_t>& p, unsigned g, std::uint32_t q,
                       const std::vector<std::uint64_t>& pw, Fn&& fn) {
  const std::size_t a = p.size() - 1;
  std::vector<std::uint32_t> prod(a + g + 1, 0), h(g, 0);
  std::int64_t code = 0;
  for (std::size_t j = 0; j <= a; ++j) {
    prod[j + g] = p[j];
    code += static_cast<std::int64_t>(p[j] * pw[j + g]);
  }
  while (true) {
    fn(static_cast<std::uint64_t>(code));
    unsigned i = 0;
    for (; i < g; ++i) {
      for (std::size_t j = 0; j <= a; ++j) {
        if (p[j] == 0) continue;
        const std::uint32_t old = prod[i + j];
        const std::uint32_t nw = (old + p[j]) % q;
        prod[i + j] = nw;
        code += (static_cast<std::int64_t>(nw) - static_cast<std::int64_t>(old)) *
                static_cast<std::int64_t>(pw[i + j]);
      }
      if (++h[i] < q) break;
      h[i] = 0;
    }
    if (i == g) return;
  }
}

struct PolySieve {
  std::vector<std::vector<std::uint64_t>> irreducible;  // by degree
  std::vector<signed char> mu;                          // by code, only if requested
};

PolySieve run_sieve(std::uint32_t q, unsigned D, bool want_mu) {
  const auto pw = powers(q, D);
  const std::uint64_t limit = 2 * pw[D];
  std::vector<unsigned char> composite(limit, 0);
  PolySieve s;
  s.irreducible.resize(D + 1);
  if (want_mu) s.mu.assign(limit, 1);
  for (unsigned d = 1; d <= D; ++d) {
    for (std::uint64_t code = pw[d]; code < 2 * pw[d]; ++code) {
      if (composite[code]) continue;
      s.irreducible[d].push_back(code);
      const auto p = digits_of(code, q);
      if (want_mu) {
        s.mu[code] = -1;
        for (unsigned g = 1; d + g <= D; ++g)
          for_each_multiple(p, g, q, pw, [&](std::uint64_t c) {
            composite[c] = 1;
            s.mu[c] = static_cast<signed char>(-s.mu[c]);
          });
        if (2 * d <= D) {
          const auto p2 = (GFPoly(q, p) * GFPoly(q, p)).coeffs();
          for (unsigned g = 0; 2 * d + g <= D; ++g)
            for_each_multiple(p2, g, q, pw, [&](std::uint64_t c) { s.mu[c] = 0; });
        }
      } else if (2 * d <= D) {
        for (unsigned g = d; d + g <= D; ++g)
          for_each_multiple(p, g, q, pw, [&](std::uint64_t c) { composite[c] = 1; });
      }
    }
  }
  return s;
}

void check_power(std::uint32_t q, unsigned n, double cap, const char* what) {
  double v = 1.0;
  for (unsigned i = 0; i < n; ++i) v *= q;
  if (v > cap) throw ScaleError(std::string(what) + ": q^" + std::to_string(n) + " exceeds " + std::to_string(static_cast<long long>(cap)));
}

}  // namespace

IrreducibleTable sieve_irreducibles(std::uint32_t q, unsigned max_degree) {
  check_field(q);
  if (max_degree < 1) throw UsageError("sieve_irreducibles needs max_degree >= 1");
  check_power(q, max_degree, 1e8, "sieve_irreducibles");
  IrreducibleTable t;
  t.q = q;
  t.max_degree = max_degree;
  t.by_degree = run_sieve(q, max_degree, false).irreducible;
  return t;
}

std::vector<std::pair<GFPoly, unsigned>> factor_poly(const GFPoly& F, const IrreducibleTable& table) {
  if (F.q() != table.q) throw UsageError("table is over a different field");
  if (!F.is_monic()) throw UsageError("factor_poly expects a monic polynomial");
  if (2 * table.max_degree < static_cast<unsigned>(F.degree()))
    throw UsageError("irreducible table too small: need degree >= " + std::to_string((F.degree() + 1) / 2));
  std::vector<std::pair<GFPoly, unsigned>> out;
  GFPoly rest = F;
  for (unsigned d = 1; d <= table.max_degree && 2 * d <= static_cast<unsigned>(rest.degree()); ++d) {
    for (std::uint64_t code : table.by_degree[d]) {
      if (2 * d > static_cast<unsigned>(rest.degree())) break;
      const GFPoly P = GFPoly::decode(table.q, code);
      unsigned e = 0;
      while (true) {
        auto [quo, rem] = divmod(rest, P);
        if (!rem.is_zero()) break;
        rest = std::move(quo);
        ++e;
      }
      if (e) out.emplace_back(P, e);
    }
  }
  if (rest.degree() > 0) {
    // Whatever is left has no factor of degree <= deg/2, so it is irreducible;
    // it may repeat a factor already found only if it equals one of them.
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& pe) { return pe.first == rest; });
    if (it != out.end())
      ++it->second;
    else
      out.emplace_back(rest, 1);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
    return x.first.encode() < y.first.encode();
  });
  return out;
}

mpq_class poly_moment_bruteforce(std::uint32_t q, unsigned n, unsigned m, unsigned k, unsigned h,
                                 const ComputeOptions& options) {
  check_field(q);
  if (m < 1) throw UsageError("poly_moment_bruteforce requires m >= 1");
  if (k < 1) throw UsageError("poly_moment_bruteforce requires k >= 1");
  if (h < 1 || h > m + 1) throw UsageError("window width h must lie in [1, m+1]");
  if (m > n) return 0;
  check_power(q, n, 1e7, "poly_moment_bruteforce");
  const auto pw = powers(q, n);
  const PolySieve sieve = run_sieve(q, m, true);
  std::vector<std::int32_t> S(pw[n], 0);
  const unsigned lo = m + 1 >= h ? m + 1 - h : 0;
  for (unsigned e = lo; e <= m; ++e) {
    for (std::uint64_t code = pw[e]; code < 2 * pw[e]; ++code) {
      const int mu = sieve.mu[code];
      if (mu == 0) continue;
      for_each_multiple(digits_of(code, q), n - e, q, pw, [&](std::uint64_t c) { S[c - pw[n]] += mu; });
    }
  }
  const std::size_t chunks = (S.size() + 65535) / 65536;
  auto parts = map_chunks<mpz_class>(chunks, options.threads, [&](std::size_t c) {
    const std::size_t b = c * 65536, e = std::min(S.size(), b + 65536);
    mpz_class total = 0, p;
    __int128 fast = 0;
    for (std::size_t i = b; i < e; ++i) {
      if (S[i] == 0) continue;
      __int128 v = 1;
      bool ovf = false;
      for (unsigned t = 0; t < 2 * k && !ovf; ++t) ovf = __builtin_mul_overflow(v, static_cast<__int128>(S[i]), &v);
      if (!ovf && !__builtin_add_overflow(fast, v, &fast)) continue;
      mpz_class base(S[i]);
      mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), 2 * k);
      total += p;
    }
    // fold the 128-bit part in as two 64-bit halves
    const unsigned __int128 u = static_cast<unsigned __int128>(fast);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    mpz_class lo64(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    total += (hi << 64) + lo64;
    return total;
  });
  mpz_class total = 0;
  for (const auto& p : parts) total += p;
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), q, n);
  mpq_class r(total, denom);
  r.canonicalize();
  return r;
}

mpq_class poly_moment_cycleformula(std::uint32_t q, unsigned m, unsigned k, const ComputeOptions& options) {
  check_field(q);
  if (m < 1 || m > 6) throw UsageError("poly_moment_cycleformula supports 1 <= m <= 6");
  if (k < 1) throw UsageError("poly_moment_cycleformula requires k >= 1");
  std::vector<unsigned long> N(m + 1, 0);
  long double combos = 1.0L;
  for (unsigned j = 1; j <= m; ++j) {
    const mpz_class Nj = irreducible_count(q, j);
    if (!Nj.fits_ulong_p()) throw ScaleError("irreducible count too large");
    N[j] = Nj.get_ui();
    combos *= static_cast<long double>(N[j] + 1);
  }
  if (combos > static_cast<long double>(options.tuple_cap))
    throw ScaleError("poly_moment_cycleformula: " + std::to_string(static_cast<double>(combos)) +
                     " cycle types exceed the cap");
  // weight[j][c] = C(N_j,c) (1 - q^-j)^{N_j} / (q^j - 1)^c
  std::vector<std::vector<mpq_class>> weight(m + 1);
  for (unsigned j = 1; j <= m; ++j) {
    mpz_class qj, base, top;
    mpz_ui_pow_ui(qj.get_mpz_t(), q, j);
    const mpz_class qj1 = qj - 1;
    mpz_pow_ui(top.get_mpz_t(), qj1.get_mpz_t(), N[j]);
    mpz_pow_ui(base.get_mpz_t(), qj.get_mpz_t(), N[j]);
    mpq_class lead(top, base);
    lead.canonicalize();
    mpz_class binom = 1, denom = 1;
    for (unsigned long c = 0; c <= N[j]; ++c) {
      mpq_class w(binom, denom);
      w.canonicalize();
      weight[j].push_back(w * lead);
      binom = binom * (N[j] - c) / (c + 1);
      denom *= qj1;
    }
  }
  mpq_class total = 0;
  mpz_class Mpow;
  // DFS over c_1..c_m carrying prod_{j' < j} (1 - x^{j'})^{c_{j'}} truncated at x^m.
  auto dfs = [&](auto&& self, unsigned j, const std::vector<mpz_class>& poly, const mpq_class& w) -> void {
    if (j > m) {
      mpz_pow_ui(Mpow.get_mpz_t(), poly[m].get_mpz_t(), 2 * k);
      if (Mpow != 0) total += w * Mpow;
      return;
    }
    std::vector<mpz_class> cur = poly;
    for (unsigned long c = 0; c <= N[j]; ++c) {
      self(self, j + 1, cur, w * weight[j][c]);
      for (unsigned e = m; e >= j; --e) cur[e] -= cur[e - j];
    }
  };
  std::vector<mpz_class> one(m + 1, 0);
  one[0] = 1;
  dfs(dfs, 1, one, mpq_class(1));
  return total;
}

}  // namespace sievemoments
