#include "sievemoments/value.hpp"

#include <cstdio>

namespace sievemoments {

double Value::to_double() const {
  if (is_exact()) return rational().get_d();
  return std::get<double>(v_);
}

std::string Value::to_string() const {
  if (is_exact()) return rational_string(rational());
  return format_double(std::get<double>(v_), 17);
}

bool operator==(const Value& a, const Value& b) {
  if (a.is_exact() != b.is_exact()) return false;
  if (a.is_exact()) return a.rational() == b.rational();
  return std::get<double>(a.v_) == std::get<double>(b.v_);
}

std::string rational_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_double(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace sievemoments
