#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace sievemoments {

// A linear form in s_1..s_n with rational coefficients.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {}
  static LinearForm from_ints(const std::vector<long>& coeffs);

  unsigned dims() const { return static_cast<unsigned>(c_.size()); }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  bool is_zero() const;
  // Integer primitive multiple with positive leading coefficient.
  LinearForm canonical() const;
  std::string key() const;

  friend LinearForm operator+(const LinearForm& a, const LinearForm& b);
  friend LinearForm operator-(const LinearForm& a, const LinearForm& b);
  friend bool operator==(const LinearForm& a, const LinearForm& b) = default;

 private:
  std::vector<mpq_class> c_;
};

// s_I for I given as a bitmask over [n] (bit i-1 is s_i).
LinearForm subset_form(std::uint32_t mask, unsigned dims);

class SubspaceBasis {
 public:
  explicit SubspaceBasis(unsigned dims = 0) : dims_(dims) {}

  unsigned ambient() const { return dims_; }
  unsigned dim() const { return static_cast<unsigned>(rows_.size()); }
  const std::vector<std::vector<mpq_class>>& rows() const { return rows_; }
  const std::vector<unsigned>& pivots() const { return pivots_; }
  bool contains(const LinearForm& f) const;
  // Equal keys iff equal subspaces (RREF is unique).
  std::string key() const;

  friend SubspaceBasis span(const std::vector<LinearForm>& forms, unsigned dims);

 private:
  unsigned dims_;
  std::vector<std::vector<mpq_class>> rows_;
  std::vector<unsigned> pivots_;
};

SubspaceBasis span(const std::vector<LinearForm>& forms, unsigned dims);

// sum over nonempty J with s_J in V of (-1)^{#J}. Ambient dimension <= 8.
long script_A(const SubspaceBasis& V);

struct CombPropReport {
  unsigned k = 0;
  bool exhaustive = false;
  std::uint64_t generated = 0;         // generating sets examined
  std::uint64_t distinct = 0;          // distinct subspaces
  std::uint64_t violations_a = 0;
  std::uint64_t violations_b = 0;
  std::uint64_t violations_c = 0;
  std::uint64_t equality_count = 0;    // distinct V attaining the bound in (b)
  std::uint64_t equality_expected = 0; // C(2k-1, k-1)
  bool equality_matches = false;       // attained set == characterized set
  long max_excess_b = 0;               // max of A - dim - bound at dim = 2k-1
  long max_excess_c = 0;
  std::vector<std::string> notes;

  bool ok() const { return violations_a == 0 && violations_b == 0 && violations_c == 0 && equality_matches; }
};

// k <= 2: every subset of {s_I} together with s_[2k]. k = 3: `samples` random
// generating sets from a fixed seed.
CombPropReport verify_combprop(unsigned k, std::uint64_t samples = 100000, std::uint64_t seed = 20240601);

// 2^lambda * integral_0^1 |sin(pi theta)|^lambda d theta.
double m_lambda(double lambda);

}  // namespace sievemoments
