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

#ifndef POLARCVX_GRID_HPP_
#define POLARCVX_GRID_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "polarcvx/analytic.hpp"
#include "polarcvx/errors.hpp"
#include "polarcvx/linalg.hpp"

namespace polarcvx {

// A geometric convex function sampled on a uniform box lattice.
// Values are extended nonnegative reals with kInf as the only sentinel;
// any interpolation stencil touching kInf yields kInf. Each axis has an odd
// node count so the origin is a lattice node and f(0) = 0 holds exactly.
struct GridFunction {
  int dim = 1;
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  std::array<int, kMaxDim> shape{};
  std::vector<double> values;  // row-major, axis 0 slowest
  bool convexified = false;
  // Filled by the duality transforms: flat index of the input lattice node
  // where the defining sup was attained, per output node. Empty otherwise.
  std::vector<std::int64_t> argmax_map;

  std::int64_t size() const {
    std::int64_t s = 1;
    for (int i = 0; i < dim; ++i) s *= shape[i];
    return s;
  }
  double cell(int axis) const {
    return (hi[axis] - lo[axis]) / (shape[axis] - 1);
  }
  double max_cell() const {
    double c = 0;
    for (int i = 0; i < dim; ++i) c = std::max(c, cell(i));
    return c;
  }

  std::array<int, kMaxDim> multi_index(std::int64_t flat) const;
  std::int64_t flat_index(const std::array<int, kMaxDim>& idx) const;
  Vec node(std::int64_t flat) const;
  std::int64_t origin_flat() const;
  bool on_boundary(std::int64_t flat) const;

  // Multilinear interpolation; throws OutOfBoxError outside the box.
  double evaluate(const Vec& x) const;

  double max_finite_value() const;
  // Threshold below which a node counts as part of f^{-1}(0).
  double eps_zero() const;

  // Worst midpoint-convexity violation over collinear lattice triples
  // (axis-aligned and small-integer directions, all step sizes).
  double midpoint_convexity_violation() const;
};

GridFunction make_grid(int dim, const std::array<double, kMaxDim>& lo,
                       const std::array<double, kMaxDim>& hi,
                       const std::array<int, kMaxDim>& shape);
GridFunction make_grid_1d(double lo, double hi, int n);
GridFunction make_grid_2d(double lo, double hi, int n);

GridFunction sample(const AnalyticConvexFunction& f,
                    const std::array<double, kMaxDim>& lo,
                    const std::array<double, kMaxDim>& hi,
                    const std::array<int, kMaxDim>& shape);
GridFunction sample_1d(const AnalyticConvexFunction& f, double lo, double hi,
                       int n);
GridFunction sample_2d(const AnalyticConvexFunction& f, double lo, double hi,
                       int n);

// Central finite differences with step max(1e-5, cell/2); throws
// NotDifferentiableError when one-sided slopes disagree beyond the kink
// tolerance, OutOfBoxError near the boundary.
Vec grid_gradient(const GridFunction& f, const Vec& x);
// Second central differences with cell-sized steps, centered on the nearest
// interior node so the stencil reads node values rather than interpolants.
Mat grid_hessian(const GridFunction& f, const Vec& x);

// Nodewise extended-real algebra on identical lattices.
GridFunction add_grids(const GridFunction& f, const GridFunction& g);
GridFunction scale_grid(double t, const GridFunction& f);
// a*f + b*g nodewise, extended-real.
GridFunction combine_grids(double a, const GridFunction& f, double b,
                           const GridFunction& g);

}  // namespace polarcvx

#endif  // POLARCVX_GRID_HPP_
