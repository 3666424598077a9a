#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "sievemoments/options.hpp"

namespace sievemoments {

// counts[j-1] = number of parts (cycles, irreducible factors) of size j.
struct CycleType {
  std::vector<unsigned> counts;

  unsigned parts(unsigned j) const { return j >= 1 && j <= counts.size() ? counts[j - 1] : 0; }
  // sum_j j c_j
  unsigned weight() const;
  // Drops parts larger than m.
  CycleType truncated(unsigned m) const;
};

// All cycle types of permutations of N points.
std::vector<CycleType> cycle_types(unsigned N);

// N! / prod_j (j^{c_j} c_j!), the number of permutations of type c.
mpz_class class_size(const CycleType& c);

// Binomial: [x^r] prod_j (1 - x^j)^{c_j}, i.e. the sum over T with sigma(T)=T,
// #T = r of mu(sigma|T). Plain: the same sum with the C(c_j, b_j) factors dropped.
mpz_class m_kernel(const CycleType& c, unsigned r, KernelVariant variant = KernelVariant::Binomial);

// (1/N!) sum over sigma in S_N of M(sigma; m)^{2k}, grouped by cycle type. N <= 10.
mpq_class perm_moment_bruteforce(unsigned N, unsigned m, unsigned k,
                                 KernelVariant variant = KernelVariant::Binomial);

// Number of tuples (r_I) over nonempty I in [2k], r_I in {0,1} for odd #I and
// r_I >= 0 for even #I, with every coordinate sum equal to m.
mpz_class c_count(unsigned m, unsigned k);

struct PoissonMoment {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the neglected Poisson mass contribution
};

// E[M(X; m)^{2k}] with independent X_j ~ Poisson(1/j). m <= 8, k <= 2.
PoissonMoment poisson_moment(unsigned m, unsigned k, double tol = 1e-10,
                             KernelVariant variant = KernelVariant::Binomial);

struct ShortCycleDensity {
  mpq_class density;  // share of S_N with every cycle longer than m
  double limit = 0.0; // prod_{j<=m} e^{-1/j}
  double constant = 0.0;  // |density - limit| N / m^2
};

ShortCycleDensity no_short_cycle_density(unsigned N, unsigned m);

}  // namespace sievemoments
