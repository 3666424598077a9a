#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sievemoments/options.hpp"

namespace sievemoments {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool soft = false;  // trend report: printed, never fails the run
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool full = false;  // wider ranges and more samples
  unsigned threads = 1;
  // Plain makes the permutation checks use the kernel without binomials.
  KernelVariant kernel = KernelVariant::Binomial;
  std::vector<int> only;  // criterion ids to run; empty = all
};

// Runs the acceptance battery in id order, calling `on_result` after each check.
std::vector<CheckResult> run_verify(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& on_result = {});

inline bool all_hard_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.soft && !r.passed) return false;
  return true;
}

}  // namespace sievemoments
