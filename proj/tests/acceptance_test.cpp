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

// Acceptance gate: runs every verification suite once and rolls the rows up
// into the release criteria, one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "polarcvx/verify.hpp"

namespace {

using polarcvx::CheckResult;

struct Criterion {
  int id;
  const char* description;
  std::function<bool(const CheckResult&)> matches;
};

bool has_prefix(const std::string& s, const std::string& p) {
  return s.rfind(p, 0) == 0;
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckResult> rows = polarcvx::run_suite("all");
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  std::vector<Criterion> criteria = {
      {1, "double polar recovers the catalog functions under refinement",
       [](const CheckResult& r) {
         return r.suite == "involution" &&
                r.name.find("dual_norm") == std::string::npos;
       }},
      {2, "polar of the squared norm matches the dual-norm closed form",
       [](const CheckResult& r) {
         return r.suite == "involution" &&
                r.name.find("dual_norm") != std::string::npos;
       }},
      {3, "power functions satisfy the scaling identity on both routes",
       [](const CheckResult& r) { return r.suite == "jdual"; }},
      {4, "hessian determinant identity holds across the polar pair",
       [](const CheckResult& r) {
         return r.suite == "hessian" && has_prefix(r.name, "det_identity");
       }},
      {5, "polar gradient attainment, emptiness reasons, and kink intervals",
       [](const CheckResult& r) {
         return r.suite == "hessian" && has_prefix(r.name, "polar_gradient");
       }},
      {6, "geometric inf-convolution routes agree and halve the half-line",
       [](const CheckResult& r) { return r.suite == "ginf"; }},
      {7, "polar Hamilton-Jacobi flow matches closed forms with refining "
          "residuals",
       [](const CheckResult& r) {
         return r.suite == "pde" && has_prefix(r.name, "hj");
       }},
      {8, "Dirichlet interpolation matches closed forms with refining "
          "residuals",
       [](const CheckResult& r) {
         return r.suite == "pde" && has_prefix(r.name, "ma_");
       }},
      {9, "Cauchy interpolation horizon estimate and recovered velocity",
       [](const CheckResult& r) {
         return r.suite == "pde" && has_prefix(r.name, "cauchy");
       }},
      {10, "first and second variation formulas match finite differences",
       [](const CheckResult& r) { return r.suite == "variation"; }},
      {11, "gradient sum formula for the composed transform",
       [](const CheckResult& r) {
         return r.suite == "hessian" && has_prefix(r.name, "sum_formula");
       }},
  };

  int failures = 0;
  int matched = 0;
  for (const auto& c : criteria) {
    int total = 0, passed = 0;
    std::string failing;
    for (const auto& r : rows) {
      if (!c.matches(r)) continue;
      ++total;
      ++matched;
      if (r.pass) {
        ++passed;
      } else if (failing.empty()) {
        failing = r.suite + "/" + r.name;
      }
    }
    bool ok = total > 0 && passed == total;
    if (!ok) ++failures;
    std::printf("%s criterion %2d: %s (%d/%d rows%s%s)\n",
                ok ? "PASS" : "FAIL", c.id, c.description, passed, total,
                failing.empty() ? "" : ", first failure ",
                failing.c_str());
  }

  // Every row must belong to exactly one criterion above.
  int covered_twice_or_missed = static_cast<int>(rows.size()) - matched;
  bool all_rows_pass = polarcvx::all_passed(rows);
  bool within_budget = elapsed <= 120.0;
  bool c12 = all_rows_pass && within_budget && covered_twice_or_missed == 0;
  if (!c12) ++failures;
  std::printf(
      "%s criterion 12: full verification suite green in %.1f s "
      "(budget 120 s, %zu rows, %d uncovered)\n",
      c12 ? "PASS" : "FAIL", elapsed, rows.size(), covered_twice_or_missed);

  if (failures > 0) {
    for (const auto& r : rows)
      if (!r.pass)
        std::printf("  failing row %s/%s: measured %.6g vs tolerance %.6g\n",
                    r.suite.c_str(), r.name.c_str(), r.measured, r.tolerance);
  }
  return failures == 0 ? 0 : 1;
}
