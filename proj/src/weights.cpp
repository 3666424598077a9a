#include "sievemoments/weights.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "sievemoments/error.hpp"

namespace sievemoments {

WeightFunction WeightFunction::power(unsigned A) {
  if (A == 0) throw UsageError("PowerSmooth weight needs A >= 1 (A = 0 is the sharp cutoff)");
  return {WeightKind::PowerSmooth, A};
}

std::string WeightFunction::name() const {
  switch (kind) {
    case WeightKind::SharpCutoff: return "sharp";
    case WeightKind::DyadicWindow: return "dyadic";
    case WeightKind::PowerSmooth: return "power" + std::to_string(A);
  }
  return "?";
}

WeightFunction parse_weight(const std::string& name, unsigned A) {
  if (name == "sharp") return WeightFunction::sharp();
  if (name == "dyadic") return WeightFunction::dyadic();
  if (name == "power") return WeightFunction::power(A);
  throw UsageError("unknown weight '" + name + "' (expected sharp, power or dyadic)");
}

double eval_weight(const WeightFunction& w, double t) {
  switch (w.kind) {
    case WeightKind::SharpCutoff: return t <= 1.0 ? 1.0 : 0.0;
    case WeightKind::PowerSmooth: return t <= 1.0 ? std::pow(1.0 - t, static_cast<int>(w.A)) : 0.0;
    case WeightKind::DyadicWindow:
      throw UsageError("the dyadic window has no pointwise form independent of R");
  }
  return 0.0;
}

bool in_support(const WeightFunction& w, std::uint64_t d, double R) {
  const double dd = static_cast<double>(d);
  if (w.kind == WeightKind::DyadicWindow) return dd > R / 2 && dd <= R;
  return dd <= R;
}

double divisor_weight(const WeightFunction& w, std::uint64_t d, int mu, double R) {
  if (mu == 0 || !in_support(w, d, R)) return 0.0;
  if (w.kind != WeightKind::PowerSmooth) return mu;
  const double t = std::log(static_cast<double>(d)) / std::log(R);
  return mu * std::pow(std::max(0.0, 1.0 - t), static_cast<int>(w.A));
}

Value divisor_sum(const FactoredInteger& n, const WeightFunction& w, double R,
                  std::uint64_t divisor_cap) {
  if (!(R > 1.0)) throw UsageError("divisor_sum requires R > 1");
  const auto ds = squarefree_divisors(n, divisor_cap);
  if (w.is_exact()) {
    long long total = 0;
    for (const auto& [d, mu] : ds)
      if (in_support(w, d, R)) total += mu;
    return Value(mpq_class(static_cast<long>(total)));
  }
  double sum = 0.0, carry = 0.0;
  for (const auto& [d, mu] : ds) {
    const double term = divisor_weight(w, d, mu, R) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return Value(sum);
}

bool dyadic_identity_check(std::uint64_t m, double R, const SpfTable* table) {
  if (m % 2 == 0) throw UsageError("dyadic_identity_check requires odd m");
  if (!(R > 1.0)) throw UsageError("dyadic_identity_check requires R > 1");
  const auto lhs = divisor_sum(factor(2 * m, table), WeightFunction::sharp(), R);
  const auto rhs = divisor_sum(factor(m, table), WeightFunction::dyadic(), R);
  return lhs == rhs;
}

double multi_difference(const WeightFunction& w, double x, std::span<const double> h) {
  if (h.empty()) throw UsageError("multi_difference needs at least one step");
  if (h.size() == 1) return eval_weight(w, x + h[0]) - eval_weight(w, x);
  const auto head = h.first(h.size() - 1);
  return multi_difference(w, x + h.back(), head) - multi_difference(w, x, head);
}

std::complex<double> mellin_power_closed(unsigned A, double R, std::complex<double> s) {
  if (A == 0) throw UsageError("closed Mellin form is for PowerSmooth weights (A >= 1)");
  if (!(R > 1.0)) throw UsageError("mellin requires R > 1");
  if (s == std::complex<double>(0.0, 0.0)) throw DomainError("Mellin transform has a pole at s = 0");
  const double logR = std::log(R);
  return std::tgamma(A + 1.0) * std::exp(s * logR) /
         (std::pow(logR, static_cast<int>(A)) * std::pow(s, static_cast<int>(A + 1)));
}

namespace {

// (log R) * integral_{-inf}^{-u0} |f(u)| R^{sigma u} du for f = (1-u)^A
// (A = 0 covers the sharp cutoff), in closed form.
double mellin_tail(unsigned A, double logR, double sigma, double u0) {
  const double a = sigma * logR;
  double sum = 0.0, falling = 1.0;
  for (unsigned i = 0; i <= A; ++i) {
    sum += falling * std::pow(1.0 + u0, static_cast<int>(A - i)) / std::pow(a, static_cast<int>(i + 1));
    falling *= static_cast<double>(A - i);
  }
  return logR * std::exp(-a * u0) * sum;
}

}  // namespace

std::complex<double> mellin_numeric(const WeightFunction& w, double R, std::complex<double> s) {
  if (w.kind == WeightKind::DyadicWindow)
    throw UsageError("mellin_numeric needs a pointwise-evaluable weight");
  if (!(R > 1.0)) throw UsageError("mellin requires R > 1");
  if (!(s.real() > 0.0)) throw DomainError("Mellin integral diverges for Re(s) <= 0");
  const double logR = std::log(R);
  double u0 = 1.0;
  while (mellin_tail(w.A, logR, s.real(), u0) > 1e-13) u0 *= 1.5;

  using boost::math::quadrature::gauss_kronrod;
  auto part = [&](bool imag) {
    auto integrand = [&](double u) {
      const std::complex<double> z = eval_weight(w, u) * std::exp(s * (u * logR));
      return imag ? z.imag() : z.real();
    };
    double err = 0.0;
    // Split at 0 so the decaying tail and the bounded piece adapt separately.
    return gauss_kronrod<double, 61>::integrate(integrand, -u0, 0.0, 25, 1e-14, &err) +
           gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 25, 1e-14, &err);
  };
  return logR * std::complex<double>(part(false), part(true));
}

}  // namespace sievemoments
