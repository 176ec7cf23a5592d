#pragma once

#include <string>
#include <vector>

#include "mono/conditions.hpp"
#include "mono/ctp.hpp"

namespace mono {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Built-in reproduction suites. "s": the degree-4 map z^3(2-z)/(2z-1) whose
// full fiber is marked; "r": the degree-12 map -[(z^2-1)(z^2+3)/(4z^2)]^3
// with a mixed marked set; "appendix": the closed radical form of the fiber
// branches of the latter. "all" runs the three in that order.
std::vector<CheckResult> verify_case(const std::string& which,
                                     const Options& opt = {});

bool all_pass(const std::vector<CheckResult>& checks);

// Aligned "[PASS] name  detail" lines, one per check.
std::string check_table(const std::vector<CheckResult>& checks);

}  // namespace mono
