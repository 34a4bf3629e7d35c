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

#ifndef POLARCVX_PDE_HPP_
#define POLARCVX_PDE_HPP_

#include <functional>
#include <string>
#include <vector>

#include "polarcvx/grid.hpp"
#include "polarcvx/transforms.hpp"

namespace polarcvx {

enum class ProvenanceKind { HJ, MADirichlet, MACauchy };

struct FrameDiagnostics {
  double boundary_fraction = 0;
  double convexity_violation = 0;
};

// A one-parameter family of grid functions computed by a closed-form dual
// formula. Frames share the lattice of the initial datum.
struct TimePath {
  std::vector<double> times;
  std::vector<GridFunction> frames;
  ProvenanceKind provenance = ProvenanceKind::HJ;
  std::string provenance_detail;
  std::vector<FrameDiagnostics> diagnostics;
};

enum class AdvisoryPolicy { Warn, Abort };

struct PdeOptions {
  AdvisoryPolicy advisory = AdvisoryPolicy::Warn;
  TransformOptions transform;
  // Collected advisory messages when the policy is Warn.
  std::vector<std::string>* advisories = nullptr;
};

// Hamilton-Jacobi family in polar form: frame(t) is the polar of
// polar(f) + t * g, with g evaluated on the dual lattice. The initial frame
// is the geometric envelope of f. Advisory: f should be smooth, strictly
// convex and superlinear in every direction; g nonnegative convex with
// g(0) = 0 (norms allowed).
TimePath solve_polar_hj(const GridFunction& f,
                        const AnalyticConvexFunction& g,
                        const std::vector<double>& times,
                        const PdeOptions& opts = {});
TimePath solve_polar_hj(const GridFunction& f, const GridFunction& g,
                        const std::vector<double>& times,
                        const PdeOptions& opts = {});

// Pointwise equation residual of an interior frame:
// |du/dt / u + L(grad u) * g(grad u / L(grad u))| where L is the frame's
// conjugate evaluated at the gradient. Pure discretization error for exact
// solution paths.
double hj_residual(const TimePath& path, int i, const Vec& x,
                   const std::function<double(const Vec&)>& g);

// Interpolation between two data by convex combination of their polars:
// frame(t) = polar((1 - t/T) polar(u0) + (t/T) polar(u1)).
TimePath solve_ma_dirichlet(const GridFunction& u0, const GridFunction& u1,
                            double T, const std::vector<double>& times,
                            const PdeOptions& opts = {});
// Cross-check route through the geometric inf-convolution of the rescaled
// data; agrees with the dual-combination route on interior times.
TimePath solve_ma_dirichlet_ginf(const GridFunction& u0,
                                 const GridFunction& u1, double T,
                                 const std::vector<double>& times,
                                 const PdeOptions& opts = {});

// Residual of the interpolation equation (1/u)'' + |grad(u'/u)|^2 in the
// inverse-Hessian metric, at interior frame i and point x.
double ma_residual(const TimePath& path, int i, const Vec& x);

struct CauchyData {
  GridFunction v;      // velocity ratio on the dual lattice, v(0) = 0
  double t_est = 0;    // largest time the dual frame stays admissible
  bool truncated = false;  // some requested times exceeded t_est
};

struct MACauchyResult {
  TimePath path;
  CauchyData data;
};

// Initial-value interpolation: the dual frame is polar(u0) * (1 - t v) with
// v(y) = du0(x) / u0(x) at the attaining node x of the polar sup. Requested
// times past the admissibility horizon are dropped and reported through
// t_est / truncated rather than silently clipped.
MACauchyResult solve_ma_cauchy(const GridFunction& u0, const GridFunction& du0,
                               const std::vector<double>& times,
                               const PdeOptions& opts = {});

}  // namespace polarcvx

#endif  // POLARCVX_PDE_HPP_
