#pragma once

#include <climits>
#include <cstdint>

#include "sievemoments/options.hpp"
#include "sievemoments/value.hpp"
#include "sievemoments/weights.hpp"

namespace sievemoments {

enum class MomentAlgorithm { Direct, Grouped, Empirical };

struct MomentResult {
  Value value;
  double R = 0.0;
  unsigned k = 0;
  WeightFunction weight;
  MomentAlgorithm algorithm = MomentAlgorithm::Direct;
  std::uint64_t admissible = 0;  // squarefree d in the weight's support
  std::uint64_t terms = 0;       // tuples (Direct) or coprime leaves (Grouped) visited
};

// sum over k-tuples of prod mu(d_i) f(log d_i / log R) / lcm(d_1..d_k).
// Sorted tuples are enumerated with multinomial multiplicities. Exact for
// SharpCutoff/DyadicWindow. Throws ScaleError past options.tuple_cap.
MomentResult moment_direct(const WeightFunction& w, double R, unsigned k,
                           const ComputeOptions& options = {});

// The same sum reorganized over pairwise-coprime squarefree D_I
// (I a nonempty subset of [k]) with d_i = prod_{I contains i} D_I. k <= 4.
MomentResult moment_grouped(const WeightFunction& w, double R, unsigned k,
                            const ComputeOptions& options = {});

struct EmpiricalMoment {
  double value = 0.0;      // (1/x) sum_{n<=x} M_f(n;R)^k
  double reference = 0.0;  // moment_direct, NaN when over the tuple cap
  double envelope_constant = 0.0;  // |value - reference| x / R^k
  std::uint64_t x = 0;
};

EmpiricalMoment empirical_moment(const WeightFunction& w, double R, unsigned k, std::uint64_t x,
                                 const ComputeOptions& options = {}, bool with_reference = true);

// Closed interval lo <= Omega(n;R) <= hi.
struct OmegaInterval {
  unsigned lo = 0;
  unsigned hi = UINT_MAX;
  bool contains(unsigned omega) const { return omega >= lo && omega <= hi; }
};

double restricted_moment(const WeightFunction& w, double R, unsigned k, std::uint64_t x,
                         OmegaInterval predicate, const ComputeOptions& options = {});

// #{n <= x : sum_{d|n, d<=R} mu(d) != 0}.
std::uint64_t support_count(double R, std::uint64_t x, const ComputeOptions& options = {});

// #{n <= X : P-(n) > Y and some d | n has Z < d <= W}.
std::uint64_t h_count(std::uint64_t X, std::uint64_t Y, std::uint64_t Z, std::uint64_t W,
                      const ComputeOptions& options = {});

// max{ C(2k,k) - 2k(A+1), -1 }: the predicted log R exponent of the 2k-th
// moment. Reporting only.
int moment_exponent(unsigned k, unsigned A);

}  // namespace sievemoments
