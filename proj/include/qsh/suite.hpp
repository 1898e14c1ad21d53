#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qsh/config.hpp"
#include "qsh/corpus.hpp"

namespace qsh {

struct CheckResult {
  int number = 0;
  std::string id;
  std::string title;
  bool passed = false;
  bool low_confidence = false;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0: none
  std::string summary;       // one line of numbers
  Json data;
};

struct SuiteCheck {
  int number;
  std::string id;
  std::string title;
  double time_limit;
};

/// The twelve acceptance checks in order.
const std::vector<SuiteCheck>& suite_checks();

/// Runs the selected checks (ids or numbers; empty: all). Unknown selectors throw InvalidInput.
std::vector<CheckResult> run_suite(const RunConfig& cfg, const std::vector<std::string>& only = {},
                                   const std::function<void(const CheckResult&)>& on_done = {});

/// "[PASS] 3 bmo-factor2 ... (12.3 s)"
std::string summary_line(const CheckResult& r);
Json to_json(const CheckResult& r);

}  // namespace qsh
