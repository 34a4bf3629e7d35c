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

#ifndef POLARCVX_TRANSFORMS_HPP_
#define POLARCVX_TRANSFORMS_HPP_

#include <optional>

#include "polarcvx/analytic.hpp"
#include "polarcvx/grid.hpp"

namespace polarcvx {

struct TransformResult {
  GridFunction output;  // carries argmax_map
  // Fraction of finite output nodes whose argmax lies on the input box
  // boundary. Nonzero means the discrete sup was truncated by the box.
  double boundary_attainment_fraction = 0;
};

struct TransformOptions {
  // Turn boundary attainment into a TruncationError instead of a report.
  bool strict = false;
  // Run the per-output-node sup loop in parallel (OpenMP). The serial and
  // parallel paths produce identical results including tie-breaks.
  bool parallel = true;
};

struct DualGrid {
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  std::array<int, kMaxDim> shape{};
};

// Reciprocal heuristic [-N/(2R), N/(2R)] per axis, same shape as the input.
DualGrid default_dual_grid(const GridFunction& f);
// Gradient-range box: covers the slopes f attains times margin, with the
// input shape refined by the given integer factor.
DualGrid slope_dual_grid(const GridFunction& f, double margin, int refine);
DualGrid dual_grid_1d(double lo, double hi, int n);
DualGrid dual_grid_2d(double lo, double hi, int n);
DualGrid dual_grid_of(const GridFunction& f);  // same box and shape as f

// Discrete Legendre transform: output[y] = max_x <x,y> - f(x) over finite
// lattice nodes, ties broken by smallest lexicographic lattice index.
TransformResult legendre(const GridFunction& f, const DualGrid& dual,
                         const TransformOptions& opts = {});

// Discrete polarity transform per the zero-set-restricted sup formula,
// clamped below at zero, with the zero-set polarity constraint enforced.
TransformResult polar(const GridFunction& f, const DualGrid& dual,
                      const TransformOptions& opts = {});

// Closed-form polar for the sub-catalog that has one; nullopt otherwise.
std::optional<AnalyticConvexFunction> polar_analytic(
    const AnalyticConvexFunction& f);

enum class JRoute { Auto, FractionalMap, Composition };

struct JResult {
  GridFunction output;
  // Max interior deviation between the fractional-linear-map route and the
  // Legendre-of-polar route (when both were computed).
  double cross_deviation = 0;
};

// The order-preserving involution J = Legendre of polar, computed on the
// input's own lattice. Auto uses the epigraph map route for dim <= 2 with a
// cross-check against the composition; dim 3 always uses the composition.
JResult j_transform(const GridFunction& f, JRoute route = JRoute::Auto,
                    const TransformOptions& opts = {});

// Double polar restricted to the original lattice: the greatest geometric
// convex minorant of f.
GridFunction geometric_envelope(const GridFunction& f,
                                const TransformOptions& opts = {});

struct DomainDualityReport {
  double max_deviation = 0;   // grid-Hausdorff gap between the two sets
  double mismatch_fraction = 0;
};

// Compares the finite-value region of Pf with the polar of the zero set of f.
DomainDualityReport domain_duality_check(const GridFunction& f,
                                         const TransformOptions& opts = {});

// Set-level check of epi(Pf) against the reflected polar of epi(f);
// returns the max signed support deviation over sampled dual points.
double epigraph_polar_check(const GridFunction& f, int n_directions,
                            unsigned seed = 7);

namespace reference {
// Naive serial transforms straight off the defining formulas; kept as the
// oracle for the packed kernels. Intentionally unoptimized.
TransformResult legendre(const GridFunction& f, const DualGrid& dual);
TransformResult polar(const GridFunction& f, const DualGrid& dual);
}  // namespace reference

}  // namespace polarcvx

#endif  // POLARCVX_TRANSFORMS_HPP_
