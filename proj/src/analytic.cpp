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

#include "polarcvx/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace polarcvx {

namespace {

constexpr double kTieTol = 1e-12;

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

AnalyticConvexFunction AnalyticConvexFunction::power_norm(int dim, double p,
                                                          double q,
                                                          double scale) {
  if (p < 1 || q < 1 || scale <= 0)
    throw Error("power_norm requires p >= 1, q >= 1, scale > 0");
  return {dim, PowerOfPNorm{p, q, scale}};
}

AnalyticConvexFunction AnalyticConvexFunction::quadratic(const Mat& a) {
  return {a.n, Quadratic{a}};
}

AnalyticConvexFunction AnalyticConvexFunction::ball_indicator(int dim, double p,
                                                              double radius) {
  if (p < 1 || radius <= 0)
    throw Error("ball_indicator requires p >= 1, radius > 0");
  return {dim, IndicatorOfBall{p, radius}};
}

AnalyticConvexFunction AnalyticConvexFunction::polytope_indicator(
    int dim, std::vector<HalfSpace> faces) {
  for (const auto& h : faces)
    if (h.b < 0) throw Error("polytope must contain the origin (b >= 0)");
  return {dim, IndicatorOfPolytope{std::move(faces)}};
}

AnalyticConvexFunction AnalyticConvexFunction::max_affine(
    int dim, std::vector<AffinePiece> pieces) {
  for (const auto& pc : pieces)
    if (pc.b > 0) throw Error("max_affine requires b_i <= 0");
  return {dim, MaxOfAffinePlus{std::move(pieces)}};
}

AnalyticConvexFunction AnalyticConvexFunction::sum(
    std::vector<AnalyticConvexFunction> fs) {
  if (fs.empty()) throw Error("sum of no functions");
  int d = fs.front().dim();
  for (const auto& f : fs)
    if (f.dim() != d) throw Error("sum: dimension mismatch");
  return {d, Sum{std::move(fs)}};
}

AnalyticConvexFunction AnalyticConvexFunction::scaled(
    double t, AnalyticConvexFunction f) {
  if (t <= 0) throw Error("scale factor must be positive");
  int d = f.dim();
  return {d, Scaled{t, std::make_shared<const AnalyticConvexFunction>(
                           std::move(f))}};
}

AnalyticConvexFunction AnalyticConvexFunction::precompose(
    const Mat& m, AnalyticConvexFunction f) {
  if (m.n != f.dim()) throw Error("precompose: dimension mismatch");
  if (det(m) == 0) throw Error("precompose: matrix must be invertible");
  int d = f.dim();
  return {d, PrecomposeLinear{m, std::make_shared<const AnalyticConvexFunction>(
                                     std::move(f))}};
}

AnalyticConvexFunction AnalyticConvexFunction::ray_1d(double c) {
  if (c <= 0) throw Error("ray_1d requires c > 0");
  auto linear = max_affine(1, {AffinePiece{Vec{c}, 0.0}});
  auto halfline = polytope_indicator(1, {HalfSpace{Vec{-1.0}, 0.0}});
  return sum({linear, halfline});
}

double AnalyticConvexFunction::evaluate(const Vec& x) const {
  return std::visit(
      [&](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PowerOfPNorm>) {
          return node.scale * std::pow(norm_p(x, node.p), node.q);
        } else if constexpr (std::is_same_v<T, Quadratic>) {
          return 0.5 * dot(matvec(node.A, x), x);
        } else if constexpr (std::is_same_v<T, IndicatorOfBall>) {
          return norm_p(x, node.p) <= node.radius ? 0.0 : kInf;
        } else if constexpr (std::is_same_v<T, IndicatorOfPolytope>) {
          for (const auto& h : node.faces)
            if (dot(h.a, x) > h.b) return kInf;
          return 0.0;
        } else if constexpr (std::is_same_v<T, MaxOfAffinePlus>) {
          double m = 0.0;
          for (const auto& pc : node.pieces)
            m = std::max(m, dot(pc.a, x) + pc.b);
          return m;
        } else if constexpr (std::is_same_v<T, Sum>) {
          double s = 0.0;
          for (const auto& f : node.children) s += f.evaluate(x);
          return s;
        } else if constexpr (std::is_same_v<T, Scaled>) {
          return node.t * node.child->evaluate(x);
        } else {  // PrecomposeLinear
          return node.child->evaluate(matvec(node.m, x));
        }
      },
      node_);
}

Vec AnalyticConvexFunction::gradient(const Vec& x) const {
  return std::visit(
      [&](const auto& node) -> Vec {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PowerOfPNorm>) {
          const double p = node.p, q = node.q, s = node.scale;
          double r = norm_p(x, p);
          if (r == 0.0) {
            if (q > 1.0) return Vec::zero(x.n);
            throw NotDifferentiableError("norm kink at the origin");
          }
          Vec g(x.n);
          if (std::isinf(p)) {
            // Max norm: unique active coordinate required.
            int arg = -1;
            int active = 0;
            for (int i = 0; i < x.n; ++i)
              if (std::abs(std::abs(x[i]) - r) <= kTieTol * r) {
                arg = i;
                ++active;
              }
            if (active != 1)
              throw NotDifferentiableError("max-norm tie");
            g[arg] = s * q * std::pow(r, q - 1.0) * sgn(x[arg]);
            return g;
          }
          if (p == 1.0 && q >= 1.0) {
            for (int i = 0; i < x.n; ++i)
              if (std::abs(x[i]) <= kTieTol * (1.0 + r))
                if (x.n > 1 || q == 1.0)
                  throw NotDifferentiableError("l1 kink");
            for (int i = 0; i < x.n; ++i)
              g[i] = s * q * std::pow(r, q - 1.0) * sgn(x[i]);
            return g;
          }
          double c = s * q * std::pow(r, q - p);
          for (int i = 0; i < x.n; ++i)
            g[i] = c * sgn(x[i]) * std::pow(std::abs(x[i]), p - 1.0);
          return g;
        } else if constexpr (std::is_same_v<T, Quadratic>) {
          return matvec(node.A, x);
        } else if constexpr (std::is_same_v<T, IndicatorOfBall>) {
          double r = norm_p(x, node.p);
          if (r < node.radius * (1.0 - 1e-12)) return Vec::zero(x.n);
          throw NotDifferentiableError("indicator boundary or exterior");
        } else if constexpr (std::is_same_v<T, IndicatorOfPolytope>) {
          for (const auto& h : node.faces) {
            double margin = h.b - dot(h.a, x);
            if (margin <= kTieTol * (1.0 + std::abs(h.b)))
              throw NotDifferentiableError("indicator boundary or exterior");
          }
          return Vec::zero(x.n);
        } else if constexpr (std::is_same_v<T, MaxOfAffinePlus>) {
          double best = 0.0;
          int arg = -1;  // -1 means the zero piece
          for (int i = 0; i < static_cast<int>(node.pieces.size()); ++i) {
            double v = dot(node.pieces[i].a, x) + node.pieces[i].b;
            if (v > best) {
              best = v;
              arg = i;
            }
          }
          double tol = kTieTol * (1.0 + std::abs(best));
          for (int i = -1; i < static_cast<int>(node.pieces.size()); ++i) {
            if (i == arg) continue;
            double v = i < 0 ? 0.0 : dot(node.pieces[i].a, x) + node.pieces[i].b;
            if (std::abs(v - best) <= tol) {
              // A tie is a kink unless the tied gradients coincide.
              const Vec ga = arg < 0 ? Vec::zero(x.n) : node.pieces[arg].a;
              const Vec gb = i < 0 ? Vec::zero(x.n) : node.pieces[i].a;
              if (norm2(ga - gb) > kTieTol)
                throw NotDifferentiableError("max_affine kink");
            }
          }
          return arg < 0 ? Vec::zero(x.n) : node.pieces[arg].a;
        } else if constexpr (std::is_same_v<T, Sum>) {
          Vec g = Vec::zero(x.n);
          for (const auto& f : node.children) g = g + f.gradient(x);
          return g;
        } else if constexpr (std::is_same_v<T, Scaled>) {
          return node.t * node.child->gradient(x);
        } else {  // PrecomposeLinear: grad f(Mx) = M^T grad f at Mx
          return matvec(transpose(node.m), node.child->gradient(matvec(node.m, x)));
        }
      },
      node_);
}

Mat AnalyticConvexFunction::hessian(const Vec& x) const {
  return std::visit(
      [&](const auto& node) -> Mat {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PowerOfPNorm>) {
          const double p = node.p, q = node.q, s = node.scale;
          double r = norm_p(x, p);
          if (r == 0.0) {
            if (q > 2.0) return Mat(x.n);
            if (q == 2.0 && p == 2.0) return (2.0 * s) * Mat::identity(x.n);
            throw NotDifferentiableError("second derivative undefined at 0");
          }
          if (std::isinf(p) || p == 1.0) {
            if (x.n == 1) {
              Mat h(1);
              h(0, 0) = s * q * (q - 1.0) * std::pow(r, q - 2.0);
              return h;
            }
            throw NotDifferentiableError("piecewise-linear norm");
          }
          Mat h(x.n);
          for (int i = 0; i < x.n; ++i) {
            double ui = sgn(x[i]) * std::pow(std::abs(x[i]), p - 1.0);
            for (int j = 0; j < x.n; ++j) {
              double uj = sgn(x[j]) * std::pow(std::abs(x[j]), p - 1.0);
              double v = s * q * (q - p) * std::pow(r, q - 2.0 * p) * ui * uj;
              if (i == j && p != 1.0)
                v += s * q * (p - 1.0) * std::pow(r, q - p) *
                     std::pow(std::abs(x[i]), p - 2.0);
              h(i, j) = v;
            }
          }
          return h;
        } else if constexpr (std::is_same_v<T, Quadratic>) {
          return node.A;
        } else if constexpr (std::is_same_v<T, IndicatorOfBall>) {
          if (norm_p(x, node.p) < node.radius * (1.0 - 1e-12)) return Mat(x.n);
          throw NotDifferentiableError("indicator boundary or exterior");
        } else if constexpr (std::is_same_v<T, IndicatorOfPolytope>) {
          for (const auto& h : node.faces)
            if (h.b - dot(h.a, x) <= kTieTol * (1.0 + std::abs(h.b)))
              throw NotDifferentiableError("indicator boundary or exterior");
          return Mat(x.n);
        } else if constexpr (std::is_same_v<T, MaxOfAffinePlus>) {
          (void)this->gradient(x);  // reuse the kink detection
          return Mat(x.n);
        } else if constexpr (std::is_same_v<T, Sum>) {
          Mat h(x.n);
          for (const auto& f : node.children) h = h + f.hessian(x);
          return h;
        } else if constexpr (std::is_same_v<T, Scaled>) {
          return node.t * node.child->hessian(x);
        } else {  // PrecomposeLinear: M^T H M
          Mat inner = node.child->hessian(matvec(node.m, x));
          return matmul(transpose(node.m), matmul(inner, node.m));
        }
      },
      node_);
}

}  // namespace polarcvx
