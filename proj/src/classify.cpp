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

#include "polarcvx/classify.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace polarcvx {

namespace {

// Representation-agnostic probe view used by the classifier.
struct Probe {
  int dim = 1;
  std::function<double(const Vec&)> value;
  // May throw NotDifferentiableError / OutOfBoxError.
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
  // Largest usable radius along the unit direction d.
  std::function<double(const Vec&)> ray_extent;
  double lin_tol = 1e-9;
};

std::vector<Vec> ray_directions(int dim, int count, std::mt19937& rng) {
  std::vector<Vec> dirs;
  if (dim == 1) {
    dirs.push_back(Vec{1.0});
    dirs.push_back(Vec{-1.0});
    return dirs;
  }
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      double a = 2.0 * M_PI * k / count;
      dirs.push_back(Vec{std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(dirs.size()) < count) {
    Vec d(3);
    for (int i = 0; i < 3; ++i) d[i] = gauss(rng);
    double n = norm2(d);
    if (n < 1e-8) continue;
    dirs.push_back((1.0 / n) * d);
  }
  return dirs;
}

Vec random_point(int dim, double radius, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

// Linear-growth gap along a ray: with the secant slope measured near radius
// r, how far below that line f dips at r/2. Bounded gap under doubling of r
// is the numeric signature of "between h(t)=at and h(t)-b".
double linear_gap(const Probe& p, const Vec& d, double r) {
  double delta = r / 16.0;
  double fr = p.value(r * d);
  double fm = p.value((r - delta) * d);
  if (std::isinf(fr) || std::isinf(fm)) return -1.0;  // domain ends
  double slope = (fr - fm) / delta;
  double fh = p.value((r / 2.0) * d);
  if (std::isinf(fh)) return -1.0;
  return slope * (r / 2.0) - fh;
}

ClassReport classify_impl(const Probe& p, const SampleSpec& spec) {
  ClassReport rep;
  std::mt19937 rng(spec.seed);
  std::ostringstream diag;
  diag << "heuristic verdicts; " << spec.samples << " samples, " << spec.rays
       << " rays";

  // Cvx_0: f(0)=0, f >= 0, midpoint convexity on random pairs.
  bool cvx0 = std::abs(p.value(Vec::zero(p.dim))) <= 1e-12;
  double worst_mid = 0;
  for (int it = 0; it < spec.samples && cvx0; ++it) {
    Vec a = random_point(p.dim, spec.radius, rng);
    Vec b = random_point(p.dim, spec.radius, rng);
    double fa = p.value(a), fb = p.value(b);
    if (fa < -1e-12 || fb < -1e-12) {
      cvx0 = false;
      break;
    }
    if (std::isinf(fa) || std::isinf(fb)) continue;
    double fm = p.value(0.5 * (a + b));
    double scale = 1.0 + std::abs(fa) + std::abs(fb);
    worst_mid = std::max(worst_mid, (fm - 0.5 * (fa + fb)) / scale);
  }
  cvx0 = cvx0 && worst_mid <= 1e-9;
  rep.in_cvx0 = cvx0;

  // S1: finite values, gradient exists off the origin, no flat segments.
  bool finite_everywhere = true;
  bool differentiable = true;
  bool strictly_convex = true;
  bool hessian_pd = true;
  int tested = 0;
  for (int it = 0; it < spec.samples; ++it) {
    Vec x = random_point(p.dim, spec.radius, rng);
    if (norm2(x) < 1e-3) continue;
    double fx = p.value(x);
    if (std::isinf(fx)) {
      finite_everywhere = false;
      continue;
    }
    ++tested;
    try {
      (void)p.grad(x);
    } catch (const Error&) {
      differentiable = false;
    }
    try {
      Mat h = p.hess(x);
      if (min_symmetric_eigenvalue(h) <= 0) hessian_pd = false;
    } catch (const Error&) {
      hessian_pd = false;
    }
    // Strictness: a flat midpoint on a short random segment marks a segment
    // on the graph.
    Vec y = x + random_point(p.dim, spec.radius / 4.0, rng);
    double fy = p.value(y);
    if (std::isinf(fy)) continue;
    double fm = p.value(0.5 * (x + y));
    double gap = 0.5 * (fx + fy) - fm;
    if (norm2(x - y) > 1e-6 && gap <= 1e-10 * (1.0 + std::abs(fx) + std::abs(fy)))
      strictly_convex = false;
  }
  rep.in_s1 = rep.in_cvx0 && finite_everywhere && differentiable &&
              strictly_convex && tested > 0;
  rep.in_s2 = rep.in_s1 && hessian_pd;

  // Ray sweep: initial-segment linearity and growth at infinity.
  auto dirs = ray_directions(p.dim, spec.rays, rng);
  bool all_rays_nonlinear = true;
  for (const auto& d : dirs) {
    double rmax = p.ray_extent(d);
    if (rmax <= 0) {
      all_rays_nonlinear = false;
      continue;
    }
    // Linearity on the initial quarter segment: f(t d) = c t there.
    double t1 = rmax / 16.0;
    double f1 = p.value(t1 * d);
    if (!std::isinf(f1)) {
      double c = f1 / t1;
      bool linear = true;
      for (int k = 2; k <= 4; ++k) {
        double t = k * t1;
        double ft = p.value(t * d);
        if (std::isinf(ft) || std::abs(ft - c * t) > p.lin_tol * (1.0 + std::abs(ft))) {
          linear = false;
          break;
        }
      }
      if (linear) rep.ray_linearity_rays.push_back(d);
    }
    // Nonlinearity at infinity: the linear-minorant gap must keep growing.
    double g_half = linear_gap(p, d, rmax / 2.0);
    double g_full = linear_gap(p, d, rmax);
    double tol = 1e-9 * (1.0 + std::abs(p.value(rmax * d)));
    bool nonlinear =
        g_full >= 0 && g_half >= 0 && g_full > 1.5 * g_half + tol && g_full > tol;
    if (!nonlinear) all_rays_nonlinear = false;
  }
  rep.nonlinear_at_infinity = all_rays_nonlinear;

  diag << "; midpoint gap " << worst_mid;
  if (!rep.ray_linearity_rays.empty())
    diag << "; " << rep.ray_linearity_rays.size() << " ray-linear directions";
  rep.diagnostics = diag.str();
  return rep;
}

}  // namespace

ClassReport classify(const AnalyticConvexFunction& f, const SampleSpec& spec) {
  Probe p;
  p.dim = f.dim();
  p.value = [&f](const Vec& x) { return f.evaluate(x); };
  p.grad = [&f](const Vec& x) { return f.gradient(x); };
  p.hess = [&f](const Vec& x) { return f.hessian(x); };
  p.ray_extent = [&spec](const Vec&) { return spec.radius; };
  p.lin_tol = 1e-9;
  return classify_impl(p, spec);
}

ClassReport classify(const GridFunction& f, const SampleSpec& spec) {
  Probe p;
  p.dim = f.dim;
  p.value = [&f](const Vec& x) {
    try {
      return f.evaluate(x);
    } catch (const OutOfBoxError&) {
      return kInf;
    }
  };
  p.grad = [&f](const Vec& x) { return grid_gradient(f, x); };
  p.hess = [&f](const Vec& x) { return grid_hessian(f, x); };
  p.ray_extent = [&f](const Vec& d) {
    double t = kInf;
    for (int ax = 0; ax < f.dim; ++ax) {
      if (d[ax] > 1e-12) t = std::min(t, f.hi[ax] / d[ax]);
      if (d[ax] < -1e-12) t = std::min(t, f.lo[ax] / d[ax]);
    }
    return 0.95 * t;
  };
  // Multilinear interpolation is linear between nodes; linearity is judged
  // at node-scale steps only.
  p.lin_tol = 0.5 * f.max_cell() / std::max(1.0, f.max_finite_value());
  SampleSpec s = spec;
  s.radius = 0.9 * std::min(std::abs(f.lo[0]), f.hi[0]);
  return classify_impl(p, s);
}

}  // namespace polarcvx
