#include "sievemoments/moments_int.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sievemoments/core_arith.hpp"
#include "sievemoments/error.hpp"
#include "sievemoments/parallel.hpp"

namespace sievemoments {

namespace {

using u128 = unsigned __int128;
constexpr u128 kU128Max = ~u128{0};
constexpr std::uint64_t kChunk = 1u << 15;

mpz_class to_mpz(u128 v) {
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

std::uint64_t floor_u64(double R) {
  if (!(R < 1.8e19)) throw ScaleError("R exceeds the 64-bit range");
  return static_cast<std::uint64_t>(std::floor(R));
}

void check_common(double R, unsigned k) {
  if (!(R > 1.0)) throw UsageError("moment sums require R > 1");
  if (k < 1) throw UsageError("moment sums require k >= 1");
  if (k > 20) throw UsageError("moment sums support k <= 20");
}

// Squarefree d in the support of the weight, with mu(d) f(log d / log R).
struct Admissible {
  std::vector<std::uint64_t> d;
  std::vector<int> coeff;       // exact weights (+-1)
  std::vector<double> weight;   // real weights
};

Admissible admissible_set(const WeightFunction& w, double R, std::uint64_t cap) {
  const std::uint64_t top = floor_u64(R);
  if (top > cap) throw ScaleError("R too large for moment enumeration (cap " + std::to_string(cap) + ")");
  Admissible a;
  for (const auto& [d, mu] : squarefree_up_to(top)) {
    if (!in_support(w, d, R)) continue;
    a.d.push_back(d);
    a.coeff.push_back(mu);
    a.weight.push_back(divisor_weight(w, d, mu, R));
  }
  return a;
}

// Exact sum of c/L for squarefree L | P, where P is the product of primes <= R.
class PrimorialAccumulator {
 public:
  explicit PrimorialAccumulator(const mpz_class& primorial) : primorial_(primorial) {}

  void add(long long c, u128 L) {
    if (c == 0) return;
    if (L <= std::numeric_limits<unsigned long>::max()) {
      mpz_divexact_ui(tmp_.get_mpz_t(), primorial_.get_mpz_t(), static_cast<unsigned long>(L));
    } else {
      mpz_class big = to_mpz(L);
      mpz_divexact(tmp_.get_mpz_t(), primorial_.get_mpz_t(), big.get_mpz_t());
    }
    if (c > 0)
      mpz_addmul_ui(num_.get_mpz_t(), tmp_.get_mpz_t(), static_cast<unsigned long>(c));
    else
      mpz_submul_ui(num_.get_mpz_t(), tmp_.get_mpz_t(), static_cast<unsigned long>(-c));
  }

  void add_big(long long c, const mpz_class& L) {
    if (c == 0) return;
    mpz_divexact(tmp_.get_mpz_t(), primorial_.get_mpz_t(), L.get_mpz_t());
    num_ += tmp_ * mpz_class(static_cast<long>(c));
  }

  const mpz_class& numerator() const { return num_; }

 private:
  const mpz_class& primorial_;
  mpz_class num_ = 0;
  mpz_class tmp_;
};

mpz_class primorial(std::uint64_t limit) {
  mpz_class P = 1;
  for (std::uint64_t p : primes_up_to(limit)) P *= static_cast<unsigned long>(p);
  return P;
}

struct KahanSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct ChunkPartial {
  mpz_class numerator = 0;
  KahanSum real;
  std::uint64_t terms = 0;
};

bool lcm_step(u128 lcm, std::uint64_t d, u128& out) {
  const std::uint64_t g = std::gcd(d, static_cast<std::uint64_t>(lcm % d));
  const u128 part = lcm / g;
  if (part > kU128Max / d) return false;
  out = part * d;
  return true;
}

long double tuple_count(std::uint64_t n, unsigned k) {
  long double c = 1.0L;
  for (unsigned i = 1; i <= k; ++i) c = c * static_cast<long double>(n + i - 1) / i;
  return c;
}

class DirectWalker {
 public:
  DirectWalker(const Admissible& adm, unsigned k, bool exact, const mpz_class& P)
      : adm_(adm), k_(k), exact_(exact), idx_(k), acc_(P) {}

  ChunkPartial run(std::size_t first) {
    idx_[0] = first;
    u128 lcm = adm_.d[first];
    walk(1, first, lcm, false, adm_.coeff[first], adm_.weight[first], 1, 1);
    partial_.numerator = acc_.numerator();
    return std::move(partial_);
  }

 private:
  void walk(unsigned depth, std::size_t start, u128 lcm, bool overflow, long long sign, double weight,
            unsigned run, std::uint64_t fact_denom) {
    if (depth == k_) {
      leaf(lcm, overflow, sign, weight, fact_denom);
      return;
    }
    for (std::size_t i = start; i < adm_.d.size(); ++i) {
      idx_[depth] = i;
      const unsigned r = (i == idx_[depth - 1]) ? run + 1 : 1;
      u128 next = 0;
      const bool ovf = overflow || !lcm_step(lcm, adm_.d[i], next);
      walk(depth + 1, i, next, ovf, sign * adm_.coeff[i], weight * adm_.weight[i], r,
           fact_denom * r);
    }
  }

  void leaf(u128 lcm, bool overflow, long long sign, double weight, std::uint64_t fact_denom) {
    ++partial_.terms;
    std::uint64_t kfact = 1;
    for (unsigned i = 2; i <= k_; ++i) kfact *= i;
    const std::uint64_t mult = kfact / fact_denom;
    if (exact_) {
      const long long c = sign * static_cast<long long>(mult);
      if (!overflow) {
        acc_.add(c, lcm);
      } else {
        mpz_class L = 1;
        for (std::size_t i : idx_) mpz_lcm_ui(L.get_mpz_t(), L.get_mpz_t(), adm_.d[i]);
        acc_.add_big(c, L);
      }
    } else {
      double L;
      if (!overflow) {
        L = static_cast<double>(lcm);
      } else {
        mpz_class big = 1;
        for (std::size_t i : idx_) mpz_lcm_ui(big.get_mpz_t(), big.get_mpz_t(), adm_.d[i]);
        L = big.get_d();
      }
      partial_.real.add(static_cast<double>(mult) * weight / L);
    }
  }

  const Admissible& adm_;
  unsigned k_;
  bool exact_;
  std::vector<std::size_t> idx_;
  PrimorialAccumulator acc_;
  ChunkPartial partial_;
};

MomentResult finish(const WeightFunction& w, double R, unsigned k, MomentAlgorithm algo,
                    const Admissible& adm, const std::vector<ChunkPartial>& parts,
                    const mpz_class& P) {
  MomentResult res;
  res.R = R;
  res.k = k;
  res.weight = w;
  res.algorithm = algo;
  res.admissible = adm.d.size();
  if (w.is_exact()) {
    mpz_class num = 0;
    for (const auto& p : parts) num += p.numerator;
    mpq_class q(num, P);
    q.canonicalize();
    res.value = Value(q);
  } else {
    KahanSum total;
    for (const auto& p : parts) total.add(p.real.sum);
    res.value = Value(total.sum);
  }
  for (const auto& p : parts) res.terms += p.terms;
  return res;
}

}  // namespace

MomentResult moment_direct(const WeightFunction& w, double R, unsigned k,
                           const ComputeOptions& options) {
  check_common(R, k);
  const Admissible adm = admissible_set(w, R, options.tuple_cap);
  if (tuple_count(adm.d.size(), k) > static_cast<long double>(options.tuple_cap))
    throw ScaleError("moment_direct: " + std::to_string(adm.d.size()) + " admissible d give more than " +
                     std::to_string(options.tuple_cap) +
                     " sorted tuples; use the grouped algorithm or raise the cap");
  const mpz_class P = primorial(floor_u64(R));
  const bool exact = w.is_exact();
  auto parts = map_chunks<ChunkPartial>(adm.d.size(), options.threads, [&](std::size_t first) {
    DirectWalker walker(adm, k, exact, P);
    return walker.run(first);
  });
  return finish(w, R, k, MomentAlgorithm::Direct, adm, parts, P);
}

namespace {

class GroupedWalker {
 public:
  GroupedWalker(const WeightFunction& w, double R, unsigned k, const std::vector<SignedDivisor>& sqf,
                const std::vector<double>& weight_of, const std::vector<int>& coeff_of,
                const mpz_class& P)
      : w_(w), R_(R), k_(k), sqf_(sqf), weight_of_(weight_of), coeff_of_(coeff_of), acc_(P) {
    // Masks in decreasing order: the singleton {i} is the last block touching d_i.
    for (unsigned mask = (1u << k) - 1; mask >= 1; --mask) masks_.push_back(mask);
    top_ = static_cast<std::uint64_t>(std::floor(R));
  }

  // Runs the subtree where the first block (the full mask) is sqf_[first].
  ChunkPartial run(std::size_t first) {
    std::vector<std::uint64_t> d(k_, 1);
    const std::uint64_t D = sqf_[first].d;
    for (auto& di : d) di *= D;
    walk(1, d, D);
    partial_.numerator = acc_.numerator();
    return std::move(partial_);
  }

 private:
  void walk(std::size_t t, std::vector<std::uint64_t>& d, u128 product) {
    if (t == masks_.size()) {
      leaf(d, product);
      return;
    }
    const unsigned mask = masks_[t];
    std::uint64_t bound = top_;
    for (unsigned i = 0; i < k_; ++i)
      if (mask & (1u << i)) bound = std::min(bound, top_ / d[i]);
    // Singleton block closes coordinate i: apply the window's lower edge.
    double lower = 0.0;
    if (std::popcount(mask) == 1 && w_.kind == WeightKind::DyadicWindow) {
      const unsigned i = static_cast<unsigned>(std::countr_zero(mask));
      lower = R_ / 2 / static_cast<double>(d[i]);
    }
    for (const auto& s : sqf_) {
      const std::uint64_t D = s.d;
      if (D > bound) break;
      if (static_cast<double>(D) <= lower) continue;
      if (D > 1 && std::gcd(D, static_cast<std::uint64_t>(product % D)) != 1) continue;
      for (unsigned i = 0; i < k_; ++i)
        if (mask & (1u << i)) d[i] *= D;
      walk(t + 1, d, product * D);
      for (unsigned i = 0; i < k_; ++i)
        if (mask & (1u << i)) d[i] /= D;
    }
  }

  void leaf(const std::vector<std::uint64_t>& d, u128 product) {
    long long c = 1;
    double weight = 1.0;
    for (std::uint64_t di : d) {
      if (!in_support(w_, di, R_)) return;
      c *= coeff_of_[di];
      weight *= weight_of_[di];
    }
    ++partial_.terms;
    if (w_.is_exact())
      acc_.add(c, product);
    else
      partial_.real.add(weight / static_cast<double>(product));
  }

  const WeightFunction& w_;
  double R_;
  unsigned k_;
  const std::vector<SignedDivisor>& sqf_;
  const std::vector<double>& weight_of_;
  const std::vector<int>& coeff_of_;
  std::vector<unsigned> masks_;
  std::uint64_t top_ = 0;
  PrimorialAccumulator acc_;
  ChunkPartial partial_;
};

}  // namespace

MomentResult moment_grouped(const WeightFunction& w, double R, unsigned k,
                            const ComputeOptions& options) {
  check_common(R, k);
  if (k > 4) throw UsageError("moment_grouped supports k <= 4");
  const Admissible adm = admissible_set(w, R, options.tuple_cap);
  if (std::pow(static_cast<long double>(adm.d.size()), k) > static_cast<long double>(options.tuple_cap))
    throw ScaleError("moment_grouped: more than " + std::to_string(options.tuple_cap) + " tuples");
  const std::uint64_t top = floor_u64(R);
  if (k * std::log2(static_cast<double>(top) + 1.0) >= 126.0)
    throw ScaleError("moment_grouped: lcm may exceed 128 bits");
  const auto sqf = squarefree_up_to(top);
  std::vector<double> weight_of(top + 1, 0.0);
  std::vector<int> coeff_of(top + 1, 0);
  for (const auto& [d, mu] : sqf) {
    weight_of[d] = divisor_weight(w, d, mu, R);
    coeff_of[d] = in_support(w, d, R) ? mu : 0;
  }
  const mpz_class P = primorial(top);
  auto parts = map_chunks<ChunkPartial>(sqf.size(), options.threads, [&](std::size_t first) {
    GroupedWalker walker(w, R, k, sqf, weight_of, coeff_of, P);
    return walker.run(first);
  });
  return finish(w, R, k, MomentAlgorithm::Grouped, adm, parts, P);
}

namespace {

// Fills m[n - lo] = M_f(n;R) for n in [lo, hi] from the admissible list.
template <class T>
void sieve_divisor_sums(const Admissible& adm, bool exact, std::uint64_t lo, std::uint64_t hi,
                        std::vector<T>& m) {
  m.assign(hi - lo + 1, T{});
  for (std::size_t i = 0; i < adm.d.size(); ++i) {
    const std::uint64_t d = adm.d[i];
    if (d > hi) break;
    const T a = exact ? static_cast<T>(adm.coeff[i]) : static_cast<T>(adm.weight[i]);
    for (std::uint64_t n = ((lo + d - 1) / d) * d; n <= hi; n += d) m[n - lo] += a;
  }
}

std::size_t chunk_count(std::uint64_t x) { return static_cast<std::size_t>((x + kChunk - 1) / kChunk); }

// Sum over n <= x of M^k, restricted by an optional Omega predicate.
template <class Pred>
double moment_sum(const WeightFunction& w, double R, unsigned k, std::uint64_t x,
                  const ComputeOptions& options, bool need_omega, Pred&& keep) {
  const Admissible adm = admissible_set(w, R, std::max<std::uint64_t>(x, options.tuple_cap));
  const std::uint64_t top = std::min<std::uint64_t>(floor_u64(R), x);
  const auto primes = need_omega ? primes_up_to(top) : std::vector<std::uint64_t>{};
  const bool exact = w.is_exact();
  struct Partial {
    __int128 exact = 0;
    KahanSum real;
  };
  auto parts = map_chunks<Partial>(chunk_count(x), options.threads, [&](std::size_t c) {
    const std::uint64_t lo = 1 + c * kChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(x, lo + kChunk - 1);
    std::vector<unsigned char> omega;
    if (need_omega) {
      omega.assign(hi - lo + 1, 0);
      for (std::uint64_t p : primes)
        for (std::uint64_t pe = p; pe <= hi; pe *= p) {
          for (std::uint64_t n = ((lo + pe - 1) / pe) * pe; n <= hi; n += pe) ++omega[n - lo];
          if (pe > hi / p) break;
        }
    }
    Partial part;
    if (exact) {
      std::vector<long long> m;
      sieve_divisor_sums(adm, true, lo, hi, m);
      for (std::uint64_t n = lo; n <= hi; ++n) {
        if (need_omega && !keep(omega[n - lo])) continue;
        __int128 v = 1;
        for (unsigned i = 0; i < k; ++i) v *= m[n - lo];
        part.exact += v;
      }
    } else {
      std::vector<double> m;
      sieve_divisor_sums(adm, false, lo, hi, m);
      for (std::uint64_t n = lo; n <= hi; ++n) {
        if (need_omega && !keep(omega[n - lo])) continue;
        part.real.add(std::pow(m[n - lo], static_cast<int>(k)));
      }
    }
    return part;
  });
  if (exact) {
    __int128 total = 0;
    for (const auto& p : parts) total += p.exact;
    return static_cast<double>(static_cast<long double>(total) / static_cast<long double>(x));
  }
  KahanSum total;
  for (const auto& p : parts) total.add(p.real.sum);
  return total.sum / static_cast<double>(x);
}

}  // namespace

EmpiricalMoment empirical_moment(const WeightFunction& w, double R, unsigned k, std::uint64_t x,
                                 const ComputeOptions& options, bool with_reference) {
  check_common(R, k);
  if (static_cast<double>(x) < R) throw UsageError("empirical_moment requires x >= R");
  EmpiricalMoment out;
  out.x = x;
  out.value = moment_sum(w, R, k, x, options, false, [](unsigned) { return true; });
  out.reference = std::numeric_limits<double>::quiet_NaN();
  out.envelope_constant = std::numeric_limits<double>::quiet_NaN();
  if (with_reference) {
    try {
      out.reference = moment_direct(w, R, k, options).value.to_double();
      out.envelope_constant =
          std::abs(out.value - out.reference) * static_cast<double>(x) / std::pow(R, static_cast<int>(k));
    } catch (const ScaleError&) {
      // Reference unavailable at this size; report NaN.
    }
  }
  return out;
}

double restricted_moment(const WeightFunction& w, double R, unsigned k, std::uint64_t x,
                         OmegaInterval predicate, const ComputeOptions& options) {
  check_common(R, k);
  if (static_cast<double>(x) < R) throw UsageError("restricted_moment requires x >= R");
  if (predicate.lo > predicate.hi) throw UsageError("empty Omega interval");
  return moment_sum(w, R, k, x, options, true,
                    [predicate](unsigned omega) { return predicate.contains(omega); });
}

std::uint64_t support_count(double R, std::uint64_t x, const ComputeOptions& options) {
  if (!(R > 1.0)) throw UsageError("support_count requires R > 1");
  if (x < 1) throw UsageError("support_count requires x >= 1");
  const Admissible adm = admissible_set(WeightFunction::sharp(), std::min(R, static_cast<double>(x)),
                                        std::max<std::uint64_t>(x, options.tuple_cap));
  auto parts = map_chunks<std::uint64_t>(chunk_count(x), options.threads, [&](std::size_t c) {
    const std::uint64_t lo = 1 + c * kChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(x, lo + kChunk - 1);
    std::vector<long long> m;
    sieve_divisor_sums(adm, true, lo, hi, m);
    return static_cast<std::uint64_t>(std::count_if(m.begin(), m.end(), [](long long v) { return v != 0; }));
  });
  std::uint64_t total = 0;
  for (auto p : parts) total += p;
  return total;
}

std::uint64_t h_count(std::uint64_t X, std::uint64_t Y, std::uint64_t Z, std::uint64_t W,
                      const ComputeOptions& options) {
  if (!(1 <= Y && Y <= Z && Z <= W)) throw UsageError("h_count requires 1 <= Y <= Z <= W");
  if (X == 0) return 0;
  const auto small = primes_up_to(std::min(Y, X));
  // Window divisors that can occur: d in (Z, W] with no prime factor <= Y.
  std::vector<std::uint64_t> window;
  {
    const std::uint64_t top = std::min(W, X);
    for (std::uint64_t d = Z + 1; d <= top; ++d) {
      bool rough = true;
      for (std::uint64_t p : small) {
        if (p * p > d && p > Y) break;
        if (d % p == 0) {
          rough = false;
          break;
        }
      }
      if (rough) window.push_back(d);
    }
  }
  auto parts = map_chunks<std::uint64_t>(chunk_count(X), options.threads, [&](std::size_t c) {
    const std::uint64_t lo = 1 + c * kChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(X, lo + kChunk - 1);
    std::vector<unsigned char> blocked(hi - lo + 1, 0), hit(hi - lo + 1, 0);
    for (std::uint64_t p : small)
      for (std::uint64_t n = ((lo + p - 1) / p) * p; n <= hi; n += p) blocked[n - lo] = 1;
    for (std::uint64_t d : window) {
      if (d > hi) break;
      for (std::uint64_t n = ((lo + d - 1) / d) * d; n <= hi; n += d) hit[n - lo] = 1;
    }
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < blocked.size(); ++i) count += (!blocked[i] && hit[i]);
    return count;
  });
  std::uint64_t total = 0;
  for (auto p : parts) total += p;
  return total;
}

int moment_exponent(unsigned k, unsigned A) {
  if (k < 1) throw UsageError("moment_exponent requires k >= 1");
  long long central = 1;
  for (unsigned i = 1; i <= k; ++i) central = central * (k + i) / i;
  const long long e = central - 2LL * k * (A + 1);
  return static_cast<int>(std::max<long long>(e, -1));
}

}  // namespace sievemoments
