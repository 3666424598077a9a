#include "sievemoments/comb_linalg.hpp"

#include <bit>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <climits>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include "sievemoments/error.hpp"

namespace sievemoments {

LinearForm LinearForm::from_ints(const std::vector<long>& coeffs) {
  std::vector<mpq_class> c;
  c.reserve(coeffs.size());
  for (long x : coeffs) c.emplace_back(x);
  return LinearForm(std::move(c));
}

bool LinearForm::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

LinearForm LinearForm::canonical() const {
  if (is_zero()) return *this;
  mpz_class l = 1, g = 0;
  for (const auto& x : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpq_class> out;
  out.reserve(c_.size());
  for (const auto& x : c_) {
    mpq_class y = x * l;
    out.push_back(y);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), y.get_num_mpz_t());
  }
  int lead = 0;
  for (const auto& y : out)
    if (y != 0) {
      lead = sgn(y);
      break;
    }
  for (auto& y : out) y = y / g * lead;
  return LinearForm(std::move(out));
}

std::string LinearForm::key() const {
  std::string s;
  for (const auto& x : canonical().c_) {
    s += x.get_str();
    s += ',';
  }
  return s;
}

LinearForm operator+(const LinearForm& a, const LinearForm& b) {
  if (a.dims() != b.dims()) throw UsageError("forms of different dimension");
  std::vector<mpq_class> c(a.dims());
  for (unsigned i = 0; i < a.dims(); ++i) c[i] = a.c_[i] + b.c_[i];
  return LinearForm(std::move(c));
}

LinearForm operator-(const LinearForm& a, const LinearForm& b) {
  if (a.dims() != b.dims()) throw UsageError("forms of different dimension");
  std::vector<mpq_class> c(a.dims());
  for (unsigned i = 0; i < a.dims(); ++i) c[i] = a.c_[i] - b.c_[i];
  return LinearForm(std::move(c));
}

LinearForm subset_form(std::uint32_t mask, unsigned dims) {
  if (dims == 0 || dims > 32) throw UsageError("subset_form needs 1 <= dims <= 32");
  if (mask == 0) throw UsageError("s_I needs a nonempty index set");
  if (dims < 32 && (mask >> dims)) throw UsageError("index set exceeds the ambient dimension");
  std::vector<mpq_class> c(dims, 0);
  for (unsigned i = 0; i < dims; ++i)
    if (mask & (1u << i)) c[i] = 1;
  return LinearForm(std::move(c));
}

SubspaceBasis span(const std::vector<LinearForm>& forms, unsigned dims) {
  SubspaceBasis V(dims);
  std::vector<std::vector<mpq_class>> m;
  for (const auto& f : forms) {
    if (f.dims() != dims) throw UsageError("form dimension does not match the ambient space");
    m.push_back(f.coeffs());
  }
  std::size_t row = 0;
  for (unsigned col = 0; col < dims && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    const mpq_class inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const mpq_class f = m[r][col];
      for (unsigned c = col; c < dims; ++c) m[r][c] -= f * m[row][c];
    }
    V.pivots_.push_back(col);
    ++row;
  }
  m.resize(row);
  V.rows_ = std::move(m);
  return V;
}

bool SubspaceBasis::contains(const LinearForm& f) const {
  if (f.dims() != dims_) throw UsageError("form dimension does not match the ambient space");
  std::vector<mpq_class> v = f.coeffs();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const mpq_class c = v[pivots_[r]];
    if (c == 0) continue;
    for (unsigned j = pivots_[r]; j < dims_; ++j) v[j] -= c * rows_[r][j];
  }
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

std::string SubspaceBasis::key() const {
  std::string s = std::to_string(dims_) + ":";
  for (const auto& r : rows_) {
    for (const auto& x : r) {
      s += x.get_str();
      s += ',';
    }
    s += ';';
  }
  return s;
}

long script_A(const SubspaceBasis& V) {
  const unsigned n = V.ambient();
  if (n == 0 || n > 8) throw UsageError("script_A supports ambient dimension 1..8");
  long total = 0;
  for (std::uint32_t J = 1; J < (1u << n); ++J)
    if (V.contains(subset_form(J, n))) total += (std::popcount(J) % 2) ? -1 : 1;
  return total;
}

namespace {

long binomial(unsigned n, unsigned r) {
  long b = 1;
  for (unsigned i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

// The subspaces span({s_j - s_1}_{j in J}, {s_j + s_1}_{j not in J}), #J = k, 1 in J.
std::set<std::string> equality_family(unsigned k) {
  const unsigned n = 2 * k;
  std::set<std::string> keys;
  const LinearForm s1 = subset_form(1, n);
  for (std::uint32_t J = 1; J < (1u << n); ++J) {
    if (!(J & 1u) || static_cast<unsigned>(std::popcount(J)) != k) continue;
    std::vector<LinearForm> gens;
    for (unsigned j = 1; j < n; ++j) {
      const LinearForm sj = subset_form(1u << j, n);
      gens.push_back((J & (1u << j)) ? sj - s1 : sj + s1);
    }
    keys.insert(span(gens, n).key());
  }
  return keys;
}

struct Checker {
  unsigned k;
  unsigned n;
  long bound_b, bound_c;
  std::set<std::string> family;
  std::set<std::string> attained;
  std::unordered_map<std::string, bool> seen;
  CombPropReport report;

  explicit Checker(unsigned kk)
      : k(kk), n(2 * kk), bound_b(binomial(2 * kk, kk) - 2 * static_cast<long>(kk)),
        bound_c(bound_b - 2), family(equality_family(kk)) {
    report.k = k;
    report.equality_expected = binomial(2 * k - 1, k - 1);
    report.max_excess_b = LONG_MIN;
    report.max_excess_c = LONG_MIN;
  }

  void note(const std::string& s) {
    if (report.notes.size() < 20) report.notes.push_back(s);
  }

  void check(const SubspaceBasis& V) {
    ++report.generated;
    std::string key = V.key();
    if (!seen.emplace(key, true).second) return;
    ++report.distinct;
    const long A = script_A(V);
    const long d = V.dim();
    bool has_singleton = false;
    for (unsigned j = 0; j < n && !has_singleton; ++j) has_singleton = V.contains(subset_form(1u << j, n));
    if (has_singleton && A != -1) {
      ++report.violations_a;
      note("(a) fails: A=" + std::to_string(A) + " for " + key);
    }
    if (d == static_cast<long>(n) - 1) {
      report.max_excess_b = std::max(report.max_excess_b, A - d - bound_b);
      if (A - d > bound_b) {
        ++report.violations_b;
        note("(b) fails: A-dim=" + std::to_string(A - d) + " for " + key);
      } else if (A - d == bound_b) {
        attained.insert(key);
      }
    } else if (d <= static_cast<long>(n) - 2) {
      report.max_excess_c = std::max(report.max_excess_c, A - d - bound_c);
      if (A - d > bound_c) {
        ++report.violations_c;
        note("(c) fails: A-dim=" + std::to_string(A - d) + " for " + key);
      }
    }
  }

  CombPropReport finish() {
    report.equality_count = attained.size();
    if (report.exhaustive) {
      report.equality_matches = attained == family;
    } else {
      report.equality_matches = std::includes(family.begin(), family.end(), attained.begin(), attained.end());
      note("sampled scan: equality cases found " + std::to_string(attained.size()) + " of " +
           std::to_string(family.size()) + " characterized subspaces");
    }
    return report;
  }
};

}  // namespace

CombPropReport verify_combprop(unsigned k, std::uint64_t samples, std::uint64_t seed) {
  if (k < 1 || k > 4) throw UsageError("verify_combprop supports 1 <= k <= 4");
  const unsigned n = 2 * k;
  const std::uint32_t full = (1u << n) - 1;
  std::vector<LinearForm> pool;  // s_I for I nonempty, I != [2k]
  for (std::uint32_t I = 1; I < full; ++I) pool.push_back(subset_form(I, n));
  const LinearForm top = subset_form(full, n);
  Checker checker(k);
  if (k <= 2) {
    checker.report.exhaustive = true;
    const std::uint64_t total = std::uint64_t{1} << pool.size();
    for (std::uint64_t sub = 0; sub < total; ++sub) {
      std::vector<LinearForm> gens{top};
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (sub >> i & 1) gens.push_back(pool[i]);
      checker.check(span(gens, n));
    }
  } else {
    if (samples < 100000) throw UsageError("sampled verification needs at least 1e5 samples");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> size_dist(1, n - 1);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::uint64_t s = 0; s < samples; ++s) {
      std::vector<LinearForm> gens{top};
      const unsigned r = size_dist(rng);
      for (unsigned i = 0; i < r; ++i) gens.push_back(pool[pick(rng)]);
      checker.check(span(gens, n));
    }
  }
  return checker.finish();
}

double m_lambda(double lambda) {
  if (!(lambda >= 0.0)) throw UsageError("M(lambda) needs lambda >= 0");
  if (lambda == 0.0) return 1.0;
  using boost::math::constants::pi;
  boost::math::quadrature::tanh_sinh<double> integrator;
  // symmetric about 1/2
  auto f = [lambda](double t) { return std::pow(2.0 * std::sin(pi<double>() * t), lambda); };
  return 2.0 * integrator.integrate(f, 0.0, 0.5, 1e-12);
}

}  // namespace sievemoments
