#pragma once

#include <gmpxx.h>

#include <string>
#include <variant>

namespace sievemoments {

// A computed quantity: either an exact rational or a double.
class Value {
 public:
  Value() : v_(mpq_class(0)) {}
  explicit Value(mpq_class q) : v_(std::move(q)) {}
  explicit Value(double d) : v_(d) {}

  bool is_exact() const { return std::holds_alternative<mpq_class>(v_); }
  const mpq_class& rational() const { return std::get<mpq_class>(v_); }
  double to_double() const;
  // "p/q" (or "p" for integers) when exact, else 17 significant digits.
  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b);

 private:
  std::variant<mpq_class, double> v_;
};

// Rational to string without rounding; integers print without a denominator.
std::string rational_string(const mpq_class& q);

// Double with exactly `digits` significant digits in %.*g style.
std::string format_double(double x, int digits = 12);

}  // namespace sievemoments
