#include "sievemoments/chars.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <numeric>
#include <numbers>
#include <string>
#include <vector>

#include "sievemoments/core_arith.hpp"
#include "sievemoments/error.hpp"
#include "sievemoments/parallel.hpp"

namespace sievemoments {

namespace {

int jacobi(std::uint64_t a, std::uint64_t n) {
  a %= n;
  int result = 1;
  while (a) {
    while (a % 2 == 0) {
      a /= 2;
      if (n % 8 == 3 || n % 8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

}  // namespace

int kronecker(std::int64_t a, std::uint64_t n) {
  if (n == 0) throw UsageError("kronecker symbol needs n >= 1");
  int result = 1;
  while (n % 2 == 0) {
    if (a % 2 == 0) return 0;
    const std::int64_t r = ((a % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
    n /= 2;
  }
  if (n == 1) return result;
  const std::int64_t mod = static_cast<std::int64_t>(n);
  return result * jacobi(static_cast<std::uint64_t>(((a % mod) + mod) % mod), n);
}

bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1) return false;
  const std::uint64_t absD = static_cast<std::uint64_t>(D < 0 ? -D : D);
  const std::int64_t r4 = ((D % 4) + 4) % 4;
  if (r4 == 1) return factor(absD).is_squarefree();
  if (r4 != 0) return false;
  const std::int64_t m = D / 4;
  const std::int64_t m4 = ((m % 4) + 4) % 4;
  if (m4 != 2 && m4 != 3) return false;
  return factor(static_cast<std::uint64_t>(m < 0 ? -m : m)).is_squarefree();
}

RealCharacter::RealCharacter(std::int64_t D) : D_(D) {
  if (D > 1000000 || D < -1000000) throw UsageError("|D| must be at most 1e6");
  if (!is_fundamental_discriminant(D))
    throw UsageError(std::to_string(D) + " is not a fundamental discriminant of a non-principal character");
}

int RealCharacter::operator()(std::uint64_t n) const { return kronecker(D_, n); }

namespace {

using u128 = unsigned __int128;

std::uint64_t window_floor(double R) {
  if (!(R >= 1.0)) throw UsageError("char_moment requires R >= 1");
  if (R > 1e9) throw ScaleError("R too large for character moments");
  return static_cast<std::uint64_t>(std::floor(R));
}

mpz_class lcm_upto(std::uint64_t n) {
  mpz_class l = 1;
  for (std::uint64_t i = 2; i <= n; ++i) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), i);
  return l;
}

struct WindowEntry {
  std::uint64_t d;
  int chi;
};

std::vector<WindowEntry> window(const RealCharacter& chi, double R) {
  const std::uint64_t top = window_floor(R);
  std::vector<WindowEntry> w;
  for (std::uint64_t d = 1; d <= top; ++d) {
    if (!(static_cast<double>(d) > R / 2)) continue;
    const int c = chi(d);
    if (c != 0) w.push_back({d, c});
  }
  return w;
}

mpq_class char_direct(const RealCharacter& chi, double R, unsigned k, const ComputeOptions& options) {
  const auto w = window(chi, R);
  const unsigned slots = 2 * k;
  long double tuples = 1.0L;
  for (unsigned i = 1; i <= slots; ++i) tuples = tuples * (w.size() + i - 1) / i;
  if (tuples > static_cast<long double>(options.tuple_cap))
    throw ScaleError("char_moment: tuple count exceeds the cap");
  if (w.empty()) return 0;
  const mpz_class L = lcm_upto(window_floor(R));
  std::uint64_t slot_fact = 1;
  for (unsigned i = 2; i <= slots; ++i) slot_fact *= i;

  auto parts = map_chunks<mpz_class>(w.size(), options.threads, [&](std::size_t first) {
    mpz_class num = 0, tmp;
    std::vector<std::size_t> idx(slots);
    idx[0] = first;
    auto walk = [&](auto&& self, unsigned depth, std::size_t start, u128 lcm, bool ovf, int sign,
                    unsigned run, std::uint64_t denom) -> void {
      if (depth == slots) {
        mpz_class l;
        if (!ovf) {
          l = mpz_class(static_cast<unsigned long>(static_cast<std::uint64_t>(lcm >> 64)));
          l <<= 64;
          l += static_cast<unsigned long>(static_cast<std::uint64_t>(lcm));
        } else {
          l = 1;
          for (std::size_t i : idx) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), w[i].d);
        }
        mpz_divexact(tmp.get_mpz_t(), L.get_mpz_t(), l.get_mpz_t());
        tmp *= static_cast<unsigned long>(slot_fact / denom);
        if (sign > 0)
          num += tmp;
        else
          num -= tmp;
        return;
      }
      for (std::size_t i = start; i < w.size(); ++i) {
        idx[depth] = i;
        const unsigned r = i == idx[depth - 1] ? run + 1 : 1;
        u128 next = 0;
        bool o = ovf;
        if (!o) {
          const std::uint64_t d = w[i].d;
          const std::uint64_t g = std::gcd(d, static_cast<std::uint64_t>(lcm % d));
          const u128 part = lcm / g;
          if (part > (~u128{0}) / d)
            o = true;
          else
            next = part * d;
        }
        self(self, depth + 1, i, next, o, sign * w[i].chi, r, denom * r);
      }
    };
    walk(walk, 1, first, w[first].d, false, w[first].chi, 1, 1);
    return num;
  });
  mpz_class num = 0;
  for (const auto& p : parts) num += p;
  mpq_class q(num, L);
  q.canonicalize();
  return q;
}

mpq_class char_local(const RealCharacter& chi, double R, unsigned k) {
  const std::uint64_t top = window_floor(R);
  if (top > 128) throw ScaleError("local-factor evaluation supports R <= 128");
  const auto w = window(chi, R);
  if (w.empty()) return 0;
  auto primes = primes_up_to(top);
  std::reverse(primes.begin(), primes.end());  // large primes prune the window fastest
  const std::size_t np = primes.size();
  std::vector<unsigned> cap(np);
  std::vector<std::vector<std::uint64_t>> allow(np);  // allow[i][v]: window d with v_p(d) <= v
  std::vector<std::uint64_t> divides(np, 0);
  mpz_class Q = 1;
  for (std::size_t i = 0; i < np; ++i) {
    const std::uint64_t p = primes[i];
    unsigned a = 0;
    for (std::uint64_t pa = p; pa <= top; pa *= p) ++a;
    cap[i] = a;
    allow[i].assign(a + 1, 0);
    for (std::size_t j = 0; j < w.size(); ++j) {
      unsigned v = 0;
      for (std::uint64_t d = w[j].d; d % p == 0; d /= p) ++v;
      if (v) divides[i] |= std::uint64_t{1} << j;
      for (unsigned t = v; t <= a; ++t) allow[i][t] |= std::uint64_t{1} << j;
    }
    mpz_class pa;
    mpz_ui_pow_ui(pa.get_mpz_t(), p, a + 1);
    Q *= pa;
  }
  // rest[i] = prod_{j >= i} p_j^{a_j + 1}: the total weight numerator of an untouched tail.
  std::vector<mpz_class> rest(np + 1, 1);
  std::vector<std::uint64_t> tail_divides(np + 1, 0);
  for (std::size_t i = np; i-- > 0;) {
    mpz_class pa;
    mpz_ui_pow_ui(pa.get_mpz_t(), primes[i], cap[i] + 1);
    rest[i] = rest[i + 1] * pa;
    tail_divides[i] = tail_divides[i + 1] | divides[i];
  }
  // numerator of the weight of exponent v at prime i over p^{a+1}
  std::vector<std::vector<mpz_class>> weight(np);
  for (std::size_t i = 0; i < np; ++i) {
    const std::uint64_t p = primes[i];
    for (unsigned v = 0; v <= cap[i]; ++v) {
      mpz_class x;
      if (v < cap[i]) {
        mpz_ui_pow_ui(x.get_mpz_t(), p, cap[i] - v);
        x *= static_cast<unsigned long>(p - 1);
      } else {
        x = static_cast<unsigned long>(p);
      }
      weight[i].push_back(x);
    }
  }
  mpz_class total = 0, sp;
  const std::uint64_t full = w.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w.size()) - 1;
  auto dfs = [&](auto&& self, std::size_t i, std::uint64_t mask, const mpz_class& num) -> void {
    if (mask == 0) return;
    if (i == np || (mask & tail_divides[i]) == 0) {
      long s = 0;
      for (std::uint64_t m = mask; m; m &= m - 1) s += w[static_cast<std::size_t>(std::countr_zero(m))].chi;
      if (s == 0) return;
      mpz_class base(s);
      mpz_pow_ui(sp.get_mpz_t(), base.get_mpz_t(), 2 * k);
      total += sp * num * rest[i];
      return;
    }
    for (unsigned v = 0; v <= cap[i]; ++v) self(self, i + 1, mask & allow[i][v], num * weight[i][v]);
  };
  dfs(dfs, 0, full, mpz_class(1));
  mpq_class q(total, Q);
  q.canonicalize();
  return q;
}

}  // namespace

mpq_class char_moment(const RealCharacter& chi, double R, unsigned k, CharMomentAlgorithm algorithm,
                      const ComputeOptions& options) {
  if (k < 1 || k > 3) throw UsageError("char_moment supports 1 <= k <= 3");
  if (algorithm == CharMomentAlgorithm::Direct) return char_direct(chi, R, k, options);
  return char_local(chi, R, k);
}

LOneEstimate l_one(const RealCharacter& chi, std::uint64_t terms) {
  if (terms < chi.modulus()) throw UsageError("l_one needs terms >= |D|");
  if (terms > 4000000000ULL) throw ScaleError("l_one: too many terms");
  // chi is |D|-periodic: tabulate one period.
  const std::uint64_t q = chi.modulus();
  std::vector<signed char> period(q);
  for (std::uint64_t a = 0; a < q; ++a) period[a] = static_cast<signed char>(a == 0 ? 0 : chi(a));
  double sum = 0.0, carry = 0.0;
  for (std::uint64_t n = terms; n >= 1; --n) {  // small terms first
    const int c = period[n % q];
    if (!c) continue;
    const double y = c / static_cast<double>(n) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return {sum, static_cast<double>(q) / static_cast<double>(terms)};
}

double l_one_closed(const RealCharacter& chi) {
  const std::int64_t D = chi.discriminant();
  const std::uint64_t q = chi.modulus();
  const double pi = std::numbers::pi;
  if (D < 0) {
    long double s = 0;
    for (std::uint64_t a = 1; a < q; ++a) s += chi(a) * static_cast<long double>(a);
    return static_cast<double>(-pi * s / (static_cast<long double>(q) * std::sqrt(static_cast<long double>(q))));
  }
  long double s = 0;
  for (std::uint64_t a = 1; a < q; ++a) {
    const int c = chi(a);
    if (c) s += c * std::log(std::sin(pi * static_cast<long double>(a) / q));
  }
  return static_cast<double>(-s / std::sqrt(static_cast<long double>(q)));
}

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream for sample `index`: depends only on (seed, index).
struct SampleRng {
  std::uint64_t state;
  SampleRng(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (index * 0xD1B54A32D192ED03ULL);
    state = splitmix(s);
  }
  double uniform() { return static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53; }
};

constexpr std::uint64_t kSampleChunk = 1 << 16;

}  // namespace

VolumeEstimate vk_volume(unsigned k, double m, std::uint64_t samples, std::uint64_t seed,
                         const ComputeOptions& options) {
  if (k != 1 && k != 2) throw UsageError("vk_volume supports k in {1, 2}");
  if (!(m >= 1.0)) throw UsageError("vk_volume requires m >= 1");
  if (samples < 100000) throw UsageError("vk_volume requires at least 1e5 samples");
  const double L = std::log(2.0);
  const std::size_t chunks = static_cast<std::size_t>((samples + kSampleChunk - 1) / kSampleChunk);
  VolumeEstimate out;
  out.samples = samples;
  out.seed = seed;
  double scale = 0.0;
  std::vector<std::uint64_t> hits;

  if (k == 1) {
    // one variable x_{12} in [0, m]; both constraints read m - log 2 <= x <= m
    scale = m;
    hits = map_chunks<std::uint64_t>(chunks, options.threads, [&](std::size_t c) {
      const std::uint64_t b = c * kSampleChunk, e = std::min(samples, b + kSampleChunk);
      std::uint64_t h = 0;
      for (std::uint64_t i = b; i < e; ++i) {
        SampleRng rng(seed, i);
        const double x = m * rng.uniform();
        h += (x >= m - L && x <= m);
      }
      return h;
    });
  } else {
    // Variables: the six pairs in lex order, then {1,2,3,4}. Pairs 12,13,14 are
    // sampled in [0,m]; the row sums y_i are sampled in [m - log 2, m] and the
    // remaining x = (x23, x24, x34, x1234) solved from B x = y - C x_free.
    // B rows (i = 1..4) over (23,24,34,1234): (0,0,0,1),(1,1,0,1),(1,0,1,1),(0,1,1,1).
    // Inverse below is exact: |det B| = 2.
    constexpr std::array<std::array<double, 4>, 4> Binv{{
        {-0.5, 0.5, 0.5, -0.5},
        {-0.5, 0.5, -0.5, 0.5},
        {-0.5, -0.5, 0.5, 0.5},
        {1.0, 0.0, 0.0, 0.0},
    }};
    constexpr double det = 2.0;
    scale = L * L * L * L * m * m * m / det;
    hits = map_chunks<std::uint64_t>(chunks, options.threads, [&](std::size_t c) {
      const std::uint64_t b = c * kSampleChunk, e = std::min(samples, b + kSampleChunk);
      std::uint64_t h = 0;
      for (std::uint64_t i = b; i < e; ++i) {
        SampleRng rng(seed, i);
        const double x12 = m * rng.uniform(), x13 = m * rng.uniform(), x14 = m * rng.uniform();
        std::array<double, 4> y;
        for (auto& v : y) v = m - L + L * rng.uniform();
        // subtract the free columns: s_1 gets x12+x13+x14, s_2 x12, s_3 x13, s_4 x14
        y[0] -= x12 + x13 + x14;
        y[1] -= x12;
        y[2] -= x13;
        y[3] -= x14;
        bool ok = true;
        for (unsigned r = 0; r < 4 && ok; ++r) {
          const double x = Binv[r][0] * y[0] + Binv[r][1] * y[1] + Binv[r][2] * y[2] + Binv[r][3] * y[3];
          ok = x >= 0.0 && x <= m;
        }
        h += ok;
      }
      return h;
    });
  }
  for (auto h : hits) out.hits += h;
  const double p = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.mean = p * scale;
  out.stderr_ = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return out;
}

double local_factor(int chi_p, std::uint64_t p, unsigned k) {
  if (p < 2) throw UsageError("local_factor requires a prime p");
  if (k < 1 || k > 4) throw UsageError("local_factor supports 1 <= k <= 4");
  const double pd = static_cast<double>(p);
  if (chi_p == -1) return 1.0 / (1.0 - 1.0 / (pd * pd));
  if (chi_p == 0) return 1.0 / (1.0 - 1.0 / pd);
  if (chi_p != 1) throw UsageError("character value must be -1, 0 or 1");
  // sum_j (j+1)^{2k} p^{-j}; the term ratio ((j+2)/(j+1))^{2k}/p decreases to 1/p,
  // so once it is below 1 the rest is at most term * ratio / (1 - ratio)
  double sum = 0.0;
  for (unsigned j = 0; j < 100000; ++j) {
    const double term = std::pow(j + 1.0, 2.0 * k) / std::pow(pd, j);
    sum += term;
    const double ratio = std::pow((j + 2.0) / (j + 1.0), 2.0 * k) / pd;
    if (ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-16 * sum) return sum;
  }
  throw std::runtime_error("local factor series did not converge");
}

SingularSeries singular_series(const RealCharacter& chi, unsigned k, std::uint64_t prime_cutoff) {
  if (k < 1 || k > 4) throw UsageError("singular_series supports 1 <= k <= 4");
  if (prime_cutoff < chi.modulus()) throw UsageError("prime cutoff must be >= |D|");
  if (prime_cutoff > 200000000ULL) throw ScaleError("prime cutoff too large");
  const unsigned M = 1u << (2 * k - 1);
  SingularSeries out;
  out.exponent = M;
  double log_trunc = 0.0, log_norm = 0.0;
  for (std::uint64_t p : primes_up_to(prime_cutoff)) {
    const double pd = static_cast<double>(p);
    const int c = chi(p);
    const double log_fp = std::log(local_factor(c, p, k));
    const double local = M * std::log1p(-1.0 / pd) + log_fp;
    log_trunc += local;
    log_norm += local + M * std::log1p(-c / pd);
  }
  out.l_one = l_one_closed(chi);
  out.truncated_product = std::exp(log_trunc);
  out.ratio_to_l_power = std::exp(log_norm);
  out.value = std::pow(out.l_one, M) * out.ratio_to_l_power;
  // Beyond the cutoff every normalized factor is exp(c_p / p^2 + O(p^-3)) with
  // |c_p| <= max(|3^{2k} - 4^{2k}/2 - 4^k/2|, M - 1); twice that bounds the
  // log-tail once p is large against 4^k.
  const double c2 = std::max(std::abs(std::pow(3.0, 2.0 * k) - std::pow(4.0, 2.0 * k) / 2 - std::pow(4.0, k) / 2),
                             static_cast<double>(M - 1));
  const double log_tail = 2.0 * c2 / static_cast<double>(prime_cutoff);
  out.tail_bound = std::expm1(log_tail);
  return out;
}

}  // namespace sievemoments
