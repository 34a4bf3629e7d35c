// Copyright 2026 The polarcvx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLARCVX_VERIFY_HPP_
#define POLARCVX_VERIFY_HPP_

#include <string>
#include <vector>

namespace polarcvx {

// One verification row: a measured quantity against its tolerance.
struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0;
  double tolerance = 0;
  bool pass = false;
  double seconds = 0;
};

// Suites: involution, jdual, hessian, variation, ginf, pde, all.
// Unknown suite names throw Error.
std::vector<CheckResult> run_suite(const std::string& suite);

bool all_passed(const std::vector<CheckResult>& rows);

std::string format_report_csv(const std::vector<CheckResult>& rows);
std::string format_report_json(const std::vector<CheckResult>& rows);

}  // namespace polarcvx

#endif  // POLARCVX_VERIFY_HPP_
