// Built-in consistency checks run by `g2lab algebra-selftest` and
// `g2lab grassmann-selftest` and by the algebra/grassmann scenario checks.
#pragma once

#include <string>
#include <vector>

namespace g2lab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> algebra_selftest(unsigned long long seed = 1);
std::vector<CheckResult> grassmann_selftest(unsigned long long seed = 2);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace g2lab
