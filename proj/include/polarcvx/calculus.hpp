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

#ifndef POLARCVX_CALCULUS_HPP_
#define POLARCVX_CALCULUS_HPP_

#include <functional>
#include <vector>

#include "polarcvx/analytic.hpp"
#include "polarcvx/grid.hpp"
#include "polarcvx/transforms.hpp"

namespace polarcvx {

enum class PolarGradientKind { Empty, Point, Interval1D };

enum class PolarGradientReason {
  Regular,
  InteriorZeroSet,
  BoundaryZeroSet,
  NormLikeNoAttainment,
  Kink1D,
};

// Outcome of the polar subdifferential at a point: empty, a single dual
// point y with Pf(y) attached, or a 1D interval at a kink.
struct PolarGradientResult {
  PolarGradientKind kind = PolarGradientKind::Empty;
  PolarGradientReason reason = PolarGradientReason::Regular;
  Vec y;                   // when kind == Point
  double polar_value = 0;  // Pf(y) when kind == Point
  double interval_lo = 0, interval_hi = 0;  // when kind == Interval1D
};

// y = grad f / (<x, grad f> - f), Pf(y) = 1 / (<x, grad f> - f); empty when
// f vanishes at x or the denominator does (norm-like growth).
PolarGradientResult polar_gradient(const AnalyticConvexFunction& f,
                                   const Vec& x);
// Grid variant; at a 1D kink falls back to the brute-force dual scan and
// reports an interval.
PolarGradientResult polar_gradient(const GridFunction& f, const Vec& x);

struct Subdifferential1D {
  bool empty = true;
  double y_lo = 0, y_hi = 0;
};

// Brute-force scan of the dual lattice for |Pf(y) f(x) - (xy - 1)| below the
// quantization tolerance; the oracle for polar_gradient in 1D.
Subdifferential1D polar_subdifferential_1d(const GridFunction& f, double x,
                                           const GridFunction& pf);
Subdifferential1D polar_subdifferential_1d(const GridFunction& f, double x);

// Hessians of f at x, of Pf at y = polar gradient, and of Jf at x/f(x),
// linked by the transfer identity. det_residual stores
// |det(hess_f) det(hess_polar) (f(x) Pf(y))^{n+2} - 1|.
struct HessianTransfer {
  Vec x, y;
  double f_value = 0, polar_value = 0;
  Mat hess_f, hess_polar, hess_j;
  double det_residual = 0;
};

// Analytic path: hess_polar from the transfer formula with exact f data.
HessianTransfer hessian_of_polar(const AnalyticConvexFunction& f, const Vec& x);
// Grid path: both Hessians by finite differences (f on its lattice, the
// precomputed polar pf on the dual lattice); det_residual is then a genuine
// two-sided check.
HessianTransfer hessian_of_polar(const GridFunction& f, const GridFunction& pf,
                                 const Vec& x);
HessianTransfer hessian_of_polar(const GridFunction& f, const Vec& x);

// Convex-combination formula for the polar gradient of f + g, weights the
// crossed polar values.
Vec polar_gradient_of_sum(const AnalyticConvexFunction& f,
                          const AnalyticConvexFunction& g, const Vec& x);

// -------------------------------------------------------------------------
// Variation residual checkers. A family is u(t, .) with each frame in the
// smooth class; residuals measure both sides of the first/second variation
// identities with central differences in t.

struct AnalyticFamily {
  std::function<AnalyticConvexFunction(double)> at;
  double dt = 1e-3;
  double radius = 4.0;  // search box for gradient inversion and sup scans
  int scan = 201;       // scan resolution per axis for seeds
  bool richardson = false;
};

struct GridFamily {
  std::vector<double> times;  // uniformly spaced
  std::vector<GridFunction> frames;
};

struct SecondVariationResiduals {
  double legendre = 0;       // conjugate second-variation identity
  double polar_matrix = 0;   // log-polar identity, quadratic-form right side
  double bordered_det = 0;   // same identity via the bordered determinant
  double symmetric_form = 0; // gap between the two symmetric writings
};

double legendre_first_variation_residual(const AnalyticFamily& fam, double t,
                                         const Vec& y);
double polar_first_variation_residual(const AnalyticFamily& fam, double t,
                                      const Vec& y);
SecondVariationResiduals second_variation_residuals(const AnalyticFamily& fam,
                                                    double t, const Vec& y);
double j_variation_residual(const AnalyticFamily& fam, double t, const Vec& x);

// Grid-path variants over precomputed frames; i indexes an interior frame.
double legendre_first_variation_residual(const GridFamily& fam, int i,
                                         const Vec& y);
double polar_first_variation_residual(const GridFamily& fam, int i,
                                      const Vec& y);
SecondVariationResiduals second_variation_residuals(const GridFamily& fam,
                                                    int i, const Vec& y);
double j_variation_residual(const GridFamily& fam, int i, const Vec& x);

// -------------------------------------------------------------------------
// Analytic-path helpers (exposed for tests).

// Newton inversion of the gradient map, seeded by a coarse lattice scan.
Vec invert_gradient(const AnalyticConvexFunction& f, const Vec& y,
                    double radius, int scan = 201);
// Exact-envelope Legendre value via the gradient inverse.
double legendre_value(const AnalyticConvexFunction& f, const Vec& y,
                      double radius, int scan = 201);
// Polar value by maximizing (<x,y>-1)/f(x): closed form when available,
// otherwise scan seed plus Newton on the stationarity system. Also returns
// the maximizer through arg when non-null.
double polar_value(const AnalyticConvexFunction& f, const Vec& y,
                   double radius, int scan = 201, Vec* arg = nullptr);

}  // namespace polarcvx

#endif  // POLARCVX_CALCULUS_HPP_
