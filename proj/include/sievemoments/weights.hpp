#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>

#include "sievemoments/core_arith.hpp"
#include "sievemoments/value.hpp"

namespace sievemoments {

enum class WeightKind { SharpCutoff, PowerSmooth, DyadicWindow };

// The weight family used for the divisor sum
//   M_f(n;R) = sum_{d|n} mu(d) f(log d / log R).
// SharpCutoff is the indicator of t <= 1, PowerSmooth(A) is (1-t)^A on
// t <= 1, and DyadicWindow keeps exactly the divisors with R/2 < d <= R.
struct WeightFunction {
  WeightKind kind = WeightKind::SharpCutoff;
  unsigned A = 0;

  static WeightFunction sharp() { return {WeightKind::SharpCutoff, 0}; }
  static WeightFunction power(unsigned A);
  static WeightFunction dyadic() { return {WeightKind::DyadicWindow, 0}; }

  bool is_exact() const { return kind != WeightKind::PowerSmooth; }
  std::string name() const;

  friend bool operator==(const WeightFunction&, const WeightFunction&) = default;
};

// Parses "sharp", "dyadic", "power" (with A supplied separately).
WeightFunction parse_weight(const std::string& name, unsigned A);

// Pointwise value; DyadicWindow has no R-free pointwise form (UsageError).
double eval_weight(const WeightFunction& w, double t);

// Whether a positive integer d lies in the support of the weight at level R.
// Comparisons against R are exact for d < 2^53.
bool in_support(const WeightFunction& w, std::uint64_t d, double R);

// mu(d) f(log d / log R) for squarefree d in the support (0 otherwise).
double divisor_weight(const WeightFunction& w, std::uint64_t d, int mu, double R);

// M_f(n;R). Exact integer for SharpCutoff/DyadicWindow, double otherwise;
// PowerSmooth sums are Kahan-compensated over ascending divisors.
Value divisor_sum(const FactoredInteger& n, const WeightFunction& w, double R,
                  std::uint64_t divisor_cap = kDefaultDivisorCap);

// Compares the sharp-cutoff sum on 2m with the dyadic-window sum on m.
bool dyadic_identity_check(std::uint64_t m, double R, const SpfTable* table = nullptr);

// Delta^(r) f(x; h_1..h_r) by the recursive definition.
double multi_difference(const WeightFunction& w, double x, std::span<const double> h);

// A! R^s / ((log R)^A s^(A+1)).
std::complex<double> mellin_power_closed(unsigned A, double R, std::complex<double> s);

// (log R) * integral_{-inf}^{1} f(u) R^{su} du by adaptive quadrature, with the
// lower limit cut where the analytic tail bound drops below 1e-12.
std::complex<double> mellin_numeric(const WeightFunction& w, double R, std::complex<double> s);

}  // namespace sievemoments
