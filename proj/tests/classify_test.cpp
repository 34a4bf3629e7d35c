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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polarcvx/classify.hpp"
#include "polarcvx/grid.hpp"

using namespace polarcvx;

using ACF = AnalyticConvexFunction;

TEST_CASE("smooth strictly convex analytic function") {
  ClassReport r = classify(ACF::power_norm(1, 2, 2));
  CHECK(r.in_cvx0);
  CHECK(r.in_s1);
  CHECK(r.in_s2);
  CHECK(r.nonlinear_at_infinity);
  CHECK(r.ray_linearity_rays.empty());
}

TEST_CASE("2d quadratic is in the smooth class") {
  Mat a(2);
  a(0, 0) = 2.0;
  a(0, 1) = a(1, 0) = 0.5;
  a(1, 1) = 1.0;
  ClassReport r = classify(ACF::quadratic(a));
  CHECK(r.in_cvx0);
  CHECK(r.in_s2);
  CHECK(r.nonlinear_at_infinity);
}

TEST_CASE("norm is convex but neither smooth nor nonlinear at infinity") {
  ClassReport r = classify(ACF::power_norm(1, 2, 1));
  CHECK(r.in_cvx0);
  CHECK_FALSE(r.in_s1);
  CHECK_FALSE(r.in_s2);
  CHECK_FALSE(r.nonlinear_at_infinity);
  CHECK(r.ray_linearity_rays.size() == 2);  // linear along both rays
}

TEST_CASE("ball indicator has zero-slope rays and no smoothness") {
  ClassReport r = classify(ACF::ball_indicator(1, 2, 1.0));
  CHECK(r.in_cvx0);
  CHECK_FALSE(r.in_s1);
  CHECK_FALSE(r.nonlinear_at_infinity);
  CHECK_FALSE(r.ray_linearity_rays.empty());
}

TEST_CASE("class chain is nested") {
  std::vector<ACF> catalog = {
      ACF::power_norm(1, 2, 2),
      ACF::power_norm(1, 2, 1),
      ACF::power_norm(2, 2, 3),
      ACF::ball_indicator(2, 2, 1.0),
      ACF::ray_1d(2.0),
  };
  for (const auto& f : catalog) {
    ClassReport r = classify(f);
    if (r.in_s2) CHECK(r.in_s1);
    if (r.in_s1) CHECK(r.in_cvx0);
  }
}

TEST_CASE("grid classification tracks the analytic verdicts") {
  GridFunction sq = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257);
  ClassReport r = classify(sq);
  CHECK(r.in_cvx0);
  CHECK(r.nonlinear_at_infinity);

  GridFunction l1 = sample_1d(ACF::power_norm(1, 2, 1), -2, 2, 257);
  ClassReport r2 = classify(l1);
  CHECK(r2.in_cvx0);
  CHECK_FALSE(r2.in_s2);
  CHECK_FALSE(r2.nonlinear_at_infinity);
  CHECK_FALSE(r2.ray_linearity_rays.empty());
}

TEST_CASE("nonconvex sample is rejected") {
  GridFunction bump = make_grid_1d(-2, 2, 257);
  for (std::int64_t i = 0; i < bump.size(); ++i) {
    double x = bump.node(i)[0];
    double s = std::sin(3.0 * x);
    bump.values[i] = std::abs(x) + 0.3 * s * s;
  }
  bump.values[bump.origin_flat()] = 0.0;
  CHECK_FALSE(classify(bump).in_cvx0);
}
