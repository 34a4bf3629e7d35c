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

#include "polarcvx/pde.hpp"
#include "polarcvx/transforms.hpp"

using namespace polarcvx;

using ACF = AnalyticConvexFunction;

namespace {

GridFunction xsq_sample(int n = 257) {
  return sample_1d(ACF::power_norm(1, 2, 2), -2, 2, n);
}

ACF unit_quadratic_1d() {
  Mat a(1);
  a(0, 0) = 1.0;
  return ACF::quadratic(a);  // y^2 / 2
}

}  // namespace

TEST_CASE("hj initial frame reproduces the datum") {
  GridFunction f = xsq_sample();
  TimePath path = solve_polar_hj(f, unit_quadratic_1d(), {0.0, 0.5});
  double err = 0;
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0})
    err = std::max(err,
                   std::abs(path.frames[0].evaluate(Vec{x}) - x * x));
  CHECK(err <= 2e-2);
  CHECK(path.provenance == ProvenanceKind::HJ);
  REQUIRE(path.diagnostics.size() == 2);
  CHECK(path.diagnostics[1].convexity_violation <= 1e-8);
}

TEST_CASE("hj quadratic closed form") {
  GridFunction f = xsq_sample();
  TimePath path = solve_polar_hj(f, unit_quadratic_1d(), {0.0, 0.25, 0.5, 1.0});
  double err = 0;
  for (size_t i = 0; i < path.times.size(); ++i) {
    double t = path.times[i];
    for (double x : {-1.0, -0.5, 0.5, 1.0})
      err = std::max(err, std::abs(path.frames[i].evaluate(Vec{x}) -
                                   x * x / (1.0 + 2.0 * t)));
  }
  CHECK(err <= 2e-2);
}

TEST_CASE("zero hamiltonian freezes the flow") {
  GridFunction f = xsq_sample();
  ACF zero = ACF::max_affine(1, {{Vec{0.0}, 0.0}});
  TimePath path = solve_polar_hj(f, zero, {0.0, 0.5, 1.0});
  CHECK(path.frames[1].values == path.frames[0].values);
  CHECK(path.frames[2].values == path.frames[0].values);
  auto g = [](const Vec&) { return 0.0; };
  CHECK(hj_residual(path, 1, Vec{1.0}, g) <= 1e-12);
}

TEST_CASE("hj semigroup property") {
  GridFunction f = xsq_sample();
  ACF g = unit_quadratic_1d();
  TimePath direct = solve_polar_hj(f, g, {0.3, 0.7});
  TimePath relay = solve_polar_hj(direct.frames[0], g, {0.4});
  double err = 0;
  for (double x : {-1.0, -0.5, 0.5, 1.0})
    err = std::max(err, std::abs(relay.frames[0].evaluate(Vec{x}) -
                                 direct.frames[1].evaluate(Vec{x})));
  CHECK(err <= 2e-2);
}

TEST_CASE("hj residual is small on the exact path") {
  GridFunction f = xsq_sample(401);
  ACF g = unit_quadratic_1d();
  TimePath path = solve_polar_hj(f, g, {0.4, 0.5, 0.6});
  auto geval = [&g](const Vec& y) { return g.evaluate(y); };
  CHECK(hj_residual(path, 1, Vec{1.0}, geval) <= 5e-2);
  CHECK_THROWS_AS(hj_residual(path, 0, Vec{1.0}, geval), FrameOutOfRangeError);
}

TEST_CASE("grid hamiltonian overload matches the analytic one") {
  GridFunction f = xsq_sample();
  ACF g = unit_quadratic_1d();
  // The dual lattice of f reaches past |y| = 64; sample g wide enough.
  GridFunction ggrid = sample_1d(g, -70, 70, 2001);
  TimePath a = solve_polar_hj(f, g, {0.5});
  TimePath b = solve_polar_hj(f, ggrid, {0.5});
  double err = 0;
  for (double x : {-1.0, -0.5, 0.5, 1.0})
    err = std::max(err, std::abs(a.frames[0].evaluate(Vec{x}) -
                                 b.frames[0].evaluate(Vec{x})));
  CHECK(err <= 1e-2);
}

TEST_CASE("time validation") {
  GridFunction f = xsq_sample(101);
  ACF g = unit_quadratic_1d();
  CHECK_THROWS_AS(solve_polar_hj(f, g, {}), TimesOutOfRangeError);
  CHECK_THROWS_AS(solve_polar_hj(f, g, {0.5, 0.5}), TimesOutOfRangeError);
  CHECK_THROWS_AS(solve_polar_hj(f, g, {-0.1, 0.5}), TimesOutOfRangeError);
  GridFunction u1 = scale_grid(4.0, f);
  CHECK_THROWS_AS(solve_ma_dirichlet(f, u1, 1.0, {0.0, 1.5}),
                  TimesOutOfRangeError);
}

TEST_CASE("advisory policy") {
  GridFunction norm = sample_1d(ACF::power_norm(1, 2, 1), -2, 2, 257);
  ACF g = unit_quadratic_1d();
  PdeOptions abort_opts;
  abort_opts.advisory = AdvisoryPolicy::Abort;
  CHECK_THROWS_AS(solve_polar_hj(norm, g, {0.0, 0.5}, abort_opts),
                  AdvisoryFailureError);
  std::vector<std::string> msgs;
  PdeOptions warn_opts;
  warn_opts.advisories = &msgs;
  CHECK_NOTHROW(solve_polar_hj(norm, g, {0.0, 0.5}, warn_opts));
  CHECK_FALSE(msgs.empty());
}

TEST_CASE("dirichlet interpolation between equal data is constant") {
  GridFunction f = xsq_sample();
  TimePath path = solve_ma_dirichlet(f, f, 1.0, {0.0, 0.5, 1.0});
  CHECK(path.frames[1].values == path.frames[0].values);
  CHECK(path.frames[2].values == path.frames[0].values);
}

TEST_CASE("dirichlet closed form and endpoint fidelity") {
  GridFunction u0 = xsq_sample();
  GridFunction u1 = scale_grid(4.0, u0);
  TimePath path = solve_ma_dirichlet(u0, u1, 1.0, {0.0, 0.5, 1.0});
  auto closed = [](double t, double x) {
    double s = (1.0 - t) / 4.0 + t / 16.0;
    return x * x / (4.0 * s);
  };
  double err = 0;
  for (size_t i = 0; i < path.times.size(); ++i)
    for (double x : {-1.0, -0.5, 0.5, 1.0})
      err = std::max(err, std::abs(path.frames[i].evaluate(Vec{x}) -
                                   closed(path.times[i], x)));
  CHECK(err <= 2e-2);
}

TEST_CASE("dirichlet time reparametrization is exact") {
  GridFunction u0 = xsq_sample(129);
  GridFunction u1 = scale_grid(4.0, u0);
  TimePath a = solve_ma_dirichlet(u0, u1, 2.0, {0.0, 0.8, 2.0});
  TimePath b = solve_ma_dirichlet(u0, u1, 1.0, {0.0, 0.4, 1.0});
  for (size_t i = 0; i < a.frames.size(); ++i)
    CHECK(a.frames[i].values == b.frames[i].values);
}

TEST_CASE("dirichlet cross route agreement") {
  GridFunction u0 = xsq_sample();
  GridFunction u1 = scale_grid(4.0, u0);
  TimePath a = solve_ma_dirichlet(u0, u1, 1.0, {0.0, 0.5, 1.0});
  TimePath b = solve_ma_dirichlet_ginf(u0, u1, 1.0, {0.0, 0.5, 1.0});
  double err = 0;
  for (size_t i = 0; i < a.frames.size(); ++i)
    for (double x : {-1.0, -0.5, 0.5, 1.0})
      err = std::max(err, std::abs(a.frames[i].evaluate(Vec{x}) -
                                   b.frames[i].evaluate(Vec{x})));
  CHECK(err <= 4e-2);
}

TEST_CASE("ma residual on the exact interpolation path") {
  GridFunction u0 = xsq_sample();
  GridFunction u1 = scale_grid(4.0, u0);
  TimePath path = solve_ma_dirichlet(u0, u1, 1.0, {0.0, 0.49, 0.5, 0.51, 1.0});
  CHECK(ma_residual(path, 2, Vec{1.0}) <= 5e-2);
  CHECK_THROWS_AS(ma_residual(path, 0, Vec{1.0}), FrameOutOfRangeError);
}

TEST_CASE("cauchy with zero velocity is stationary") {
  GridFunction u0 = xsq_sample();
  GridFunction zero = make_grid_1d(-2, 2, 257);  // all zeros
  MACauchyResult res = solve_ma_cauchy(u0, zero, {0.0, 1.0, 5.0});
  CHECK_FALSE(res.data.truncated);
  CHECK(res.data.t_est == doctest::Approx(5.0));
  REQUIRE(res.path.frames.size() == 3);
  CHECK(res.path.frames[2].values == res.path.frames[0].values);
}

TEST_CASE("cauchy with unit velocity ratio blows up at one") {
  GridFunction u0 = xsq_sample();
  std::vector<double> times;
  for (int k = 0; k <= 15; ++k) times.push_back(0.1 * k);
  MACauchyResult res = solve_ma_cauchy(u0, u0, times);
  CHECK(res.data.truncated);
  CHECK(res.data.t_est >= 0.9);
  CHECK(res.data.t_est <= 1.0);
  CHECK(res.path.times.back() <= 0.9 + 1e-12);
  // Closed form x^2 / (1 - t) before the horizon.
  double err = 0;
  for (size_t i = 0; i < res.path.times.size(); ++i) {
    double t = res.path.times[i];
    if (t > 0.8) continue;  // keep values well inside the lattice range
    for (double x : {-0.5, 0.5})
      err = std::max(err, std::abs(res.path.frames[i].evaluate(Vec{x}) -
                                   x * x / (1.0 - t)));
  }
  CHECK(err <= 2e-2);
  CHECK(res.data.v.values[res.data.v.origin_flat()] == 0.0);
}

TEST_CASE("cauchy scaled velocity follows the scaling closed form") {
  GridFunction u0 = xsq_sample();
  GridFunction du0 = scale_grid(0.5, u0);  // v = 1/2, u(t) = x^2/(1 - t/2)
  MACauchyResult res = solve_ma_cauchy(u0, du0, {0.0, 0.5, 1.0});
  CHECK_FALSE(res.data.truncated);
  double err = 0;
  for (size_t i = 0; i < res.path.times.size(); ++i) {
    double t = res.path.times[i];
    for (double x : {-0.5, 0.5})
      err = std::max(err, std::abs(res.path.frames[i].evaluate(Vec{x}) -
                                   x * x / (1.0 - 0.5 * t)));
  }
  CHECK(err <= 2e-2);
}

TEST_CASE("cauchy refuses when no time is admissible") {
  GridFunction u0 = xsq_sample(129);
  CHECK_THROWS_AS(solve_ma_cauchy(u0, u0, {1.5, 2.0}), BeyondMaximalTimeError);
}

TEST_CASE("cauchy requires vanishing initial velocity at the origin") {
  GridFunction u0 = xsq_sample(129);
  GridFunction du0 = make_grid_1d(-2, 2, 129);
  for (auto& v : du0.values) v = 1.0;
  CHECK_THROWS_AS(solve_ma_cauchy(u0, du0, {0.0, 0.1}), Error);
}
