#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace dltrace {

struct SuiteResult {
  std::string name;
  long long checked = 0;
  long long failed = 0;
  std::string counterexample;  // first failure, empty when none
  double seconds = 0;
};

std::vector<std::string> verify_suites();
// budget <= 0 selects the suite's default size.
long long default_budget(const std::string& suite);
long long small_budget(const std::string& suite);
SuiteResult run_suite(const std::string& suite, long long budget, std::uint64_t seed);
// Wall time is left out so that output is reproducible.
nlohmann::json suite_json(const SuiteResult& r);

}  // namespace dltrace
