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

#include <cmath>

#include "polarcvx/grid.hpp"

using namespace polarcvx;

using ACF = AnalyticConvexFunction;

TEST_CASE("sampling hits lattice nodes exactly") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 2), -1, 1, 3);
  REQUIRE(g.size() == 3);
  CHECK(g.values[0] == doctest::Approx(1.0));
  CHECK(g.values[1] == doctest::Approx(0.0));
  CHECK(g.values[2] == doctest::Approx(1.0));
  CHECK(g.node(0)[0] == doctest::Approx(-1.0));
  CHECK(g.origin_flat() == 1);
}

TEST_CASE("indicator sampling keeps the infinity sentinel") {
  GridFunction g = sample_1d(ACF::ball_indicator(1, 2, 1.0), -2, 2, 5);
  CHECK(std::isinf(g.values[0]));
  CHECK(g.values[1] == doctest::Approx(0.0));
  CHECK(g.values[2] == doctest::Approx(0.0));
  CHECK(g.values[3] == doctest::Approx(0.0));
  CHECK(std::isinf(g.values[4]));
}

TEST_CASE("box must contain the origin as a node") {
  std::array<double, kMaxDim> lo{1.0, 0, 0}, hi{2.0, 0, 0};
  std::array<int, kMaxDim> shape{5, 0, 0};
  CHECK_THROWS_AS(make_grid(1, lo, hi, shape), BoxExcludesOriginError);
}

TEST_CASE("interpolation and out-of-box behaviour") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257);
  CHECK(g.evaluate(Vec{0.7123}) == doctest::Approx(0.7123 * 0.7123).epsilon(1e-3));
  CHECK_THROWS_AS(g.evaluate(Vec{2.5}), OutOfBoxError);
}

TEST_CASE("interpolation near an infinite node is infinite") {
  GridFunction g = sample_1d(ACF::ball_indicator(1, 2, 1.0), -2, 2, 5);
  // Stencil [1, 2] touches the infinite node at x = 2.
  CHECK(std::isinf(g.evaluate(Vec{1.4})));
  CHECK(g.evaluate(Vec{0.4}) == doctest::Approx(0.0));
}

TEST_CASE("grid gradient and hessian of a smooth sample") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257);
  CHECK(grid_gradient(g, Vec{1.0})[0] == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(grid_hessian(g, Vec{1.0})(0, 0) == doctest::Approx(2.0).epsilon(1e-4));

  Mat a(2);
  a(0, 0) = 2.0;
  a(0, 1) = a(1, 0) = 0.5;
  a(1, 1) = 1.0;
  GridFunction q = sample_2d(ACF::quadratic(a), -2, 2, 129);
  Vec gr = grid_gradient(q, Vec{0.5, -0.25});
  CHECK(gr[0] == doctest::Approx(2.0 * 0.5 + 0.5 * -0.25).epsilon(1e-3));
  CHECK(gr[1] == doctest::Approx(0.5 * 0.5 + 1.0 * -0.25).epsilon(1e-3));
  Mat h = grid_hessian(q, Vec{0.5, -0.25});
  CHECK(h(0, 1) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("grid gradient refuses kinks") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 1), -2, 2, 257);
  CHECK_THROWS_AS(grid_gradient(g, Vec{0.0}), NotDifferentiableError);
  CHECK(grid_gradient(g, Vec{1.0})[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("midpoint convexity violation") {
  GridFunction convex = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 101);
  CHECK(convex.midpoint_convexity_violation() <= 1e-10);

  GridFunction bump = make_grid_1d(-2, 2, 101);
  for (std::int64_t i = 0; i < bump.size(); ++i) {
    double x = bump.node(i)[0];
    bump.values[i] = std::abs(x) + 0.3 * std::sin(3.0 * x) * std::sin(3.0 * x);
  }
  CHECK(bump.midpoint_convexity_violation() > 1e-3);
}

TEST_CASE("nodewise algebra") {
  GridFunction f = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 9);
  GridFunction g = sample_1d(ACF::ball_indicator(1, 2, 1.0), -2, 2, 9);
  GridFunction s = add_grids(f, g);
  CHECK(s.evaluate(Vec{0.5}) == doctest::Approx(0.25));
  CHECK(std::isinf(s.values[0]));

  GridFunction t = scale_grid(3.0, f);
  CHECK(t.evaluate(Vec{1.0}) == doctest::Approx(3.0));

  GridFunction c = combine_grids(1.0, f, 0.5, f);
  CHECK(c.evaluate(Vec{1.0}) == doctest::Approx(1.5));
}

TEST_CASE("eps_zero scales with the sample") {
  GridFunction f = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257);
  CHECK(f.eps_zero() > 0);
  CHECK(f.eps_zero() < 1e-3);
  CHECK(f.max_finite_value() == doctest::Approx(4.0));
}
