#pragma once

#include <cstdint>

namespace sievemoments {

// Selects the cycle-type kernel M(c;r). The binomial-inclusive form matches
// direct fixed-set enumeration; the plain form is kept for comparison.
enum class KernelVariant { Binomial, Plain };

inline constexpr std::uint64_t kDefaultDivisorCap = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kDefaultTupleCap = 400'000'000;

struct ComputeOptions {
  unsigned threads = 1;
  std::uint64_t divisor_cap = kDefaultDivisorCap;
  std::uint64_t tuple_cap = kDefaultTupleCap;
  KernelVariant kernel = KernelVariant::Binomial;
};

}  // namespace sievemoments
