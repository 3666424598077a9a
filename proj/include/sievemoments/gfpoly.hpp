#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "sievemoments/options.hpp"

namespace sievemoments {

// Polynomial over F_q (q prime, q <= 257), coefficients low degree first.
// Ring operations may produce non-monic or zero intermediate values; the
// enumeration APIs only ever hand out monic polynomials.
class GFPoly {
 public:
  GFPoly() = default;
  GFPoly(std::uint32_t q, std::vector<std::uint32_t> coeffs);

  // The monic polynomial whose base-q digits (low first, leading 1 included)
  // spell `code`; code in [q^n, 2 q^n) has degree n.
  static GFPoly decode(std::uint32_t q, std::uint64_t code);

  std::uint32_t q() const { return q_; }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  std::uint64_t encode() const;
  GFPoly monic() const;

  friend GFPoly operator+(const GFPoly& a, const GFPoly& b);
  friend GFPoly operator-(const GFPoly& a, const GFPoly& b);
  friend GFPoly operator*(const GFPoly& a, const GFPoly& b);
  friend bool operator==(const GFPoly& a, const GFPoly& b) = default;

 private:
  void trim();
  std::uint32_t q_ = 2;
  std::vector<std::uint32_t> c_;
};

// (quotient, remainder) with deg(remainder) < deg(b). b must be nonzero.
std::pair<GFPoly, GFPoly> divmod(const GFPoly& a, const GFPoly& b);
// Monic gcd (zero only when both inputs are zero).
GFPoly gcd(const GFPoly& a, const GFPoly& b);
// a^e mod m.
GFPoly powmod(const GFPoly& a, std::uint64_t e, const GFPoly& m);

// N_j = (1/j) sum_{j'|j} mu(j') q^{j/j'}.
mpz_class irreducible_count(std::uint32_t q, unsigned j);

struct IrreducibleTable {
  std::uint32_t q = 2;
  unsigned max_degree = 0;
  std::vector<std::vector<std::uint64_t>> by_degree;  // codes; index = degree
};

// Every monic irreducible of degree <= max_degree. Requires q^max_degree <= 1e8.
IrreducibleTable sieve_irreducibles(std::uint32_t q, unsigned max_degree);

// Trial division by the table; needs table.max_degree >= deg(F)/2.
std::vector<std::pair<GFPoly, unsigned>> factor_poly(const GFPoly& F, const IrreducibleTable& table);

// (1/q^n) sum over monic N of degree n of (sum_{M|N, m-h < deg M <= m} mu(M))^{2k}.
// h = 1 is the single-degree moment. Requires q^n <= 1e7.
mpq_class poly_moment_bruteforce(std::uint32_t q, unsigned n, unsigned m, unsigned k, unsigned h = 1,
                                 const ComputeOptions& options = {});

// sum over cycle types c (c_j <= N_j) of M(c;m)^{2k} prod_j C(N_j,c_j)(1-q^-j)^{N_j}/(q^j-1)^{c_j}.
// Equals the brute-force value for n >= 2mk. m <= 6.
mpq_class poly_moment_cycleformula(std::uint32_t q, unsigned m, unsigned k,
                                   const ComputeOptions& options = {});

}  // namespace sievemoments
