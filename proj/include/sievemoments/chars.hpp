#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "sievemoments/options.hpp"

namespace sievemoments {

// Kronecker symbol (a/n) for n >= 1.
int kronecker(std::int64_t a, std::uint64_t n);

bool is_fundamental_discriminant(std::int64_t D);

// n -> (D/n) for a fundamental discriminant D != 1, |D| <= 1e6.
class RealCharacter {
 public:
  explicit RealCharacter(std::int64_t D);

  std::int64_t discriminant() const { return D_; }
  std::uint64_t modulus() const { return static_cast<std::uint64_t>(D_ < 0 ? -D_ : D_); }
  int operator()(std::uint64_t n) const;

 private:
  std::int64_t D_;
};

enum class CharMomentAlgorithm { Direct, LocalFactors };

// sum over d_1..d_{2k} in (R/2, R] of prod chi(d_i) / lcm(d_1..d_{2k}).
// Direct enumerates sorted tuples. LocalFactors evaluates
//   prod_{p<=R}(1-1/p) sum_{P+(n)<=R} (1/n) (sum_{d|n, R/2<d<=R} chi(d))^{2k}
// by grouping n according to v_p(n) capped at floor(log_p R); R <= 128.
mpq_class char_moment(const RealCharacter& chi, double R, unsigned k,
                      CharMomentAlgorithm algorithm = CharMomentAlgorithm::Direct,
                      const ComputeOptions& options = {});

struct LOneEstimate {
  double value = 0.0;
  double bound = 0.0;  // |L(1,chi) - value| <= bound
};

// sum_{n <= terms} chi(n)/n, terms >= |D|.
LOneEstimate l_one(const RealCharacter& chi, std::uint64_t terms);

// L(1,chi) from the finite formulas in terms of chi on [1, |D|).
double l_one_closed(const RealCharacter& chi);

struct VolumeEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;
};

// Monte Carlo volume of {x_I >= 0 (I even, nonempty, in [2k]) :
// m - log 2 <= sum_{I contains i} x_I <= m for all i}. k in {1, 2}.
VolumeEstimate vk_volume(unsigned k, double m, std::uint64_t samples, std::uint64_t seed,
                         const ComputeOptions& options = {});

struct SingularSeries {
  double value = 0.0;             // L(1,chi)^M times the product of normalized factors
  double truncated_product = 0.0; // prod_{p <= cutoff} (1-1/p)^M f_p
  double tail_bound = 0.0;        // relative bound on the normalized factors beyond cutoff
  double l_one = 0.0;
  double ratio_to_l_power = 0.0;  // value / L(1,chi)^M
  unsigned exponent = 0;          // M = 2^{2k-1}
};

// prod_p (1-1/p)^M f_p with M = 2^{2k-1}; cutoff >= |D|.
// f_p for chi(p) = chi_p: the power series sum (j+1)^{2k} p^{-j} when chi_p = 1,
// (1-1/p^2)^{-1} when chi_p = -1, (1-1/p)^{-1} when p divides D.
double local_factor(int chi_p, std::uint64_t p, unsigned k);

SingularSeries singular_series(const RealCharacter& chi, unsigned k, std::uint64_t prime_cutoff);

}  // namespace sievemoments
