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
#include "polarcvx/transforms.hpp"

using namespace polarcvx;

using ACF = AnalyticConvexFunction;

namespace {

// Max |a - b| over nodes where both are finite; infinite nodes must agree.
double grid_deviation(const GridFunction& a, const GridFunction& b) {
  REQUIRE(a.size() == b.size());
  double dev = 0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    bool fa = std::isfinite(a.values[i]);
    bool fb = std::isfinite(b.values[i]);
    if (fa != fb) return kInf;
    if (fa) dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
  }
  return dev;
}

}  // namespace

TEST_CASE("packed kernels agree with the serial reference") {
  struct Case {
    ACF f;
    int n;
  };
  Mat a2(2);
  a2(0, 0) = 2.0;
  a2(0, 1) = a2(1, 0) = 0.5;
  a2(1, 1) = 1.0;
  const Case cases[] = {
      {ACF::power_norm(1, 2, 2), 101},
      {ACF::power_norm(1, 2, 1), 101},
      {ACF::ball_indicator(1, 2, 1.0), 101},
      {ACF::quadratic(a2), 41},
      {ACF::power_norm(2, 1, 2), 41},
  };
  for (const auto& c : cases) {
    GridFunction g = c.f.dim() == 1 ? sample_1d(c.f, -2, 2, c.n)
                                    : sample_2d(c.f, -2, 2, c.n);
    DualGrid d = default_dual_grid(g);
    TransformOptions serial{false, false};
    TransformOptions parallel{false, true};

    TransformResult ref_p = reference::polar(g, d);
    TransformResult pk_p = polar(g, d, serial);
    CHECK(grid_deviation(ref_p.output, pk_p.output) <= 1e-10);

    TransformResult ref_l = reference::legendre(g, d);
    TransformResult pk_l = legendre(g, d, serial);
    CHECK(grid_deviation(ref_l.output, pk_l.output) <= 1e-10);

    // The parallel loop is a pure reordering of independent outputs.
    TransformResult par_p = polar(g, d, parallel);
    CHECK(par_p.output.values == pk_p.output.values);
    CHECK(par_p.output.argmax_map == pk_p.output.argmax_map);
    TransformResult par_l = legendre(g, d, parallel);
    CHECK(par_l.output.values == pk_l.output.values);
    CHECK(par_l.output.argmax_map == pk_l.output.argmax_map);
  }
}

TEST_CASE("argmax map is consistent with the reported value") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 201);
  TransformResult r = polar(g, default_dual_grid(g));
  for (std::int64_t j = 0; j < r.output.size(); ++j) {
    double v = r.output.values[j];
    std::int64_t arg = r.output.argmax_map[j];
    if (!std::isfinite(v) || arg < 0 || v == 0.0) continue;
    if (j == r.output.origin_flat()) continue;
    double fx = g.values[arg];
    if (fx <= g.eps_zero()) continue;
    double s = (dot(g.node(arg), r.output.node(j)) - 1.0) / fx;
    CHECK(std::abs(std::max(0.0, s) - v) <= 1e-12 * (1.0 + std::abs(v)));
  }
}

TEST_CASE("polar of the square is the dual square") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 513);
  TransformResult r = polar(g, dual_grid_1d(-4, 4, 513));
  double err = 0;
  for (std::int64_t j = 0; j < r.output.size(); ++j) {
    double y = r.output.node(j)[0];
    // The sup over the box [-2, 2] attains y^2/4 at x = 2/y, which needs
    // |y| >= 1; below that the sampled polar is the truncated sup.
    if (std::abs(y) < 1.0) continue;
    err = std::max(err, std::abs(r.output.values[j] - y * y / 4.0));
  }
  CHECK(err <= 5e-3);
}

TEST_CASE("legendre of the half square is self conjugate") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 2, 0.5), -2, 2, 513);
  TransformResult r = legendre(g, dual_grid_1d(-1.5, 1.5, 513));
  double err = 0;
  for (std::int64_t j = 0; j < r.output.size(); ++j) {
    double y = r.output.node(j)[0];
    err = std::max(err, std::abs(r.output.values[j] - y * y / 2.0));
  }
  CHECK(err <= 5e-3);
}

TEST_CASE("unit ball indicator is self polar") {
  GridFunction g = sample_1d(ACF::ball_indicator(1, 2, 1.0), -2, 2, 257);
  TransformResult r = polar(g, dual_grid_1d(-2, 2, 257));
  for (std::int64_t j = 0; j < r.output.size(); ++j) {
    double y = r.output.node(j)[0];
    if (std::abs(y) <= 1.0 - 1e-9) {
      CHECK(r.output.values[j] == doctest::Approx(0.0));
    } else if (std::abs(y) >= 1.0 + r.output.cell(0)) {
      CHECK(std::isinf(r.output.values[j]));
    }
  }
}

TEST_CASE("polar reverses the pointwise order") {
  GridFunction f = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257);
  GridFunction g = scale_grid(2.0, f);  // g >= f
  DualGrid d = default_dual_grid(f);
  GridFunction pf = polar(f, d).output;
  GridFunction pg = polar(g, d).output;
  for (std::int64_t j = 0; j < pf.size(); ++j) {
    if (std::isinf(pf.values[j])) continue;
    CHECK(pg.values[j] <= pf.values[j] + 1e-12);
  }
}

TEST_CASE("polar scales inversely under positive scaling") {
  GridFunction f = sample_1d(ACF::power_norm(1, 2, 4), -2, 2, 257);
  DualGrid d = default_dual_grid(f);
  GridFunction a = polar(scale_grid(3.0, f), d).output;
  GridFunction b = scale_grid(1.0 / 3.0, polar(f, d).output);
  // The two routes reassociate the arithmetic, so agreement is only up to
  // roundoff on values of order 1e3.
  CHECK(grid_deviation(a, b) <= 1e-9);
}

TEST_CASE("double polar recovers a convex sample") {
  // Fix the dual box at the coarse resolution and refine only the dual
  // shape, so the dual cell shrinks with n.
  DualGrid d = default_dual_grid(sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257));
  for (int n : {257, 513}) {
    GridFunction g = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, n);
    d.shape[0] = n;
    GridFunction env = polar(polar(g, d).output, dual_grid_of(g)).output;
    double err = 0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      double x = g.node(i)[0];
      if (std::abs(x) > 1.0) continue;
      err = std::max(err, std::abs(env.values[i] - g.values[i]));
    }
    CHECK(err <= (n == 257 ? 2e-2 : 1e-2));
  }
}

TEST_CASE("envelope convexifies and is idempotent") {
  GridFunction bump = make_grid_1d(-2, 2, 257);
  for (std::int64_t i = 0; i < bump.size(); ++i) {
    double x = bump.node(i)[0];
    bump.values[i] = x * x + 0.3 * std::sin(3.0 * x) * std::sin(3.0 * x);
  }
  bump.values[bump.origin_flat()] = 0.0;
  GridFunction env = geometric_envelope(bump);
  CHECK(env.midpoint_convexity_violation() <= 1e-8);
  for (std::int64_t i = 0; i < env.size(); ++i)
    CHECK(env.values[i] <= bump.values[i] + 1e-9);
  GridFunction env2 = geometric_envelope(env);
  double err = 0;
  for (std::int64_t i = 0; i < env.size(); ++i) {
    double x = env.node(i)[0];
    if (std::abs(x) > 1.5) continue;
    err = std::max(err, std::abs(env2.values[i] - env.values[i]));
  }
  CHECK(err <= 1e-2);
}

TEST_CASE("identically zero input maps to the indicator of the origin") {
  GridFunction z = make_grid_1d(-1, 1, 101);  // all zeros
  TransformResult r = polar(z, default_dual_grid(z));
  for (std::int64_t j = 0; j < r.output.size(); ++j) {
    if (j == r.output.origin_flat())
      CHECK(r.output.values[j] == doctest::Approx(0.0));
    else
      CHECK(std::isinf(r.output.values[j]));
  }
}

TEST_CASE("strict mode refuses boundary attainment") {
  GridFunction norm = sample_1d(ACF::power_norm(1, 2, 1), -2, 2, 257);
  TransformOptions strict{true, true};
  CHECK_THROWS_AS(polar(norm, default_dual_grid(norm), strict),
                  TruncationError);
  // Interior attainment: slopes of x^2 stay below the dual box edge.
  GridFunction sq = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257);
  CHECK_NOTHROW(legendre(sq, dual_grid_1d(-3.9, 3.9, 101), strict));
}

TEST_CASE("empty domain is refused") {
  GridFunction g = make_grid_1d(-1, 1, 11);
  for (auto& v : g.values) v = kInf;
  CHECK_THROWS_AS(polar(g, default_dual_grid(g)), EmptyDomainError);
  CHECK_THROWS_AS(legendre(g, default_dual_grid(g)), EmptyDomainError);
  CHECK_THROWS_AS(j_transform(g), DegenerateEpigraphError);
}

TEST_CASE("fractional map of the square is a fixed point") {
  GridFunction g = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 513);
  for (JRoute route : {JRoute::FractionalMap, JRoute::Composition}) {
    JResult j = j_transform(g, route);
    double err = 0;
    for (std::int64_t i = 0; i < j.output.size(); ++i) {
      double x = j.output.node(i)[0];
      // The fixed-point value x^2 at z is carried by the primal point 1/z,
      // which leaves the box [-2, 2] for |z| < 1/2.
      if (std::abs(x) > 1.0 || std::abs(x) < 0.5) continue;
      err = std::max(err, std::abs(j.output.values[i] - x * x));
    }
    CHECK(err <= 2e-2);
  }
  JResult a = j_transform(g, JRoute::Auto);
  CHECK(a.cross_deviation <= 2e-2);
}

TEST_CASE("fractional map sends the ball indicator to the norm") {
  GridFunction g = sample_1d(ACF::ball_indicator(1, 2, 1.0), -2, 2, 257);
  JResult j = j_transform(g, JRoute::Composition);
  double err = 0;
  for (std::int64_t i = 0; i < j.output.size(); ++i) {
    double x = j.output.node(i)[0];
    if (std::abs(x) > 1.5) continue;
    err = std::max(err, std::abs(j.output.values[i] - std::abs(x)));
  }
  CHECK(err <= 2e-2);
}

TEST_CASE("fractional map sends the ray to the segment indicator") {
  // f(x) = 2x on x >= 0 maps to the indicator of [0, 1/2]. The graph image
  // only reaches heights >= 1/(2 R) on a box of radius R, so the discrete
  // result is a shallow ramp over the segment; widen the box to flatten it.
  GridFunction g = sample_1d(ACF::ray_1d(2.0), -20, 20, 4001);
  JResult j = j_transform(g, JRoute::FractionalMap);
  double cell = j.output.cell(0);
  for (std::int64_t i = 0; i < j.output.size(); ++i) {
    double z = j.output.node(i)[0];
    double v = j.output.values[i];
    if (z >= -1e-12 && z <= 0.5 + 1e-12) {
      CHECK(v <= 3e-2);
    } else if (z < -cell || z > 0.5 + cell) {
      CHECK(std::isinf(v));
    }
  }
}

TEST_CASE("domain duality on samples") {
  GridFunction ball = sample_1d(ACF::ball_indicator(1, 2, 1.0), -2, 2, 257);
  DomainDualityReport rep = domain_duality_check(ball);
  // Finiteness of the polar flips at the first dual node past the unit
  // radius, so the two sets differ by up to one dual cell (about 0.5 here).
  CHECK(rep.max_deviation <= 0.55);
  GridFunction sq = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257);
  DomainDualityReport rep2 = domain_duality_check(sq);
  CHECK(rep2.max_deviation <= 5e-2);
}

TEST_CASE("polar epigraph reflection stays supported") {
  GridFunction sq = sample_1d(ACF::power_norm(1, 2, 2), -2, 2, 257);
  CHECK(epigraph_polar_check(sq, 100) <= 5e-2);
  GridFunction l1 = sample_1d(ACF::power_norm(1, 2, 1), -2, 2, 257);
  CHECK(epigraph_polar_check(l1, 100) <= 5e-2);
}

TEST_CASE("closed form polar rules match the transform") {
  struct Case {
    ACF f;
    double lo, hi;
  };
  Mat m(1);
  m(0, 0) = 2.0;
  const Case cases[] = {
      {ACF::power_norm(1, 2, 2), -3, 3},
      {ACF::power_norm(1, 2, 3), -3, 3},
      {ACF::scaled(2.0, ACF::power_norm(1, 2, 2)), -3, 3},
      {ACF::precompose(m, ACF::power_norm(1, 2, 2)), -3, 3},
  };
  for (const auto& c : cases) {
    auto pa = polar_analytic(c.f);
    REQUIRE(pa.has_value());
    GridFunction g = sample_1d(c.f, -6, 6, 1025);
    TransformResult r = polar(g, dual_grid_1d(c.lo, c.hi, 241));
    double err = 0;
    for (std::int64_t j = 0; j < r.output.size(); ++j) {
      Vec y = r.output.node(j);
      if (std::abs(y[0]) > 2.0) continue;  // avoid truncation artifacts
      double exact = pa->evaluate(y);
      if (!std::isfinite(exact) || !std::isfinite(r.output.values[j])) continue;
      err = std::max(err, std::abs(r.output.values[j] - exact));
    }
    CHECK(err <= 2e-2);
  }
  // Ball indicator: polar radius is the reciprocal with the dual exponent.
  auto pb = polar_analytic(ACF::ball_indicator(2, 1, 2.0));
  REQUIRE(pb.has_value());
  CHECK(pb->evaluate(Vec{0.4, 0.4}) == doctest::Approx(0.0));
  CHECK(std::isinf(pb->evaluate(Vec{0.6, 0.0})));
}
