/**
 * Copyright 2026 The ZO2 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ZO2_HARNESS_SUITES_H_
#define ZO2_HARNESS_SUITES_H_

#include <string>
#include <string_view>
#include <vector>

#include "zo2/harness/config.h"

namespace zo2::harness {

struct CheckLine {
  std::string name;
  bool passed;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<CheckLine> checks;

  bool passed() const;
  std::string csv() const;
  // One "PASS|FAIL <suite>: <check> (<detail>)" line per check.
  std::string check_lines() const;
};

const std::vector<std::string>& suite_names();

// equivalence, ablation, amp, memory-scaling or sweep. Training suites start
// from `base` (model, zo and data keys); throws ConfigError for an unknown
// name.
SuiteReport run_suite(std::string_view name, const RunConfig& base);

// <dir>/<name>.csv and <dir>/<name>_checks.txt
void write_suite(const SuiteReport& report, const std::string& dir);

}  // namespace zo2::harness

#endif  // ZO2_HARNESS_SUITES_H_
