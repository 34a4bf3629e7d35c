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

#include "polarcvx/ginfconv.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace polarcvx {

GinfResult ginf_dual(const GridFunction& f, const GridFunction& g,
                     const DualGrid& dual, const TransformOptions& opts) {
  TransformResult pf = polar(f, dual, opts);
  TransformResult pg = polar(g, dual, opts);
  GridFunction dual_sum = add_grids(pf.output, pg.output);
  // Back to f's own lattice.
  DualGrid primal = dual_grid_of(f);
  TransformResult out = polar(dual_sum, primal, opts);
  GinfResult r;
  r.output = out.output;
  r.route = GinfRoute::DualSpace;
  return r;
}

GinfResult ginf_dual(const GridFunction& f, const GridFunction& g,
                     const TransformOptions& opts) {
  return ginf_dual(f, g, default_dual_grid(f), opts);
}

GinfWitness ginf_direct_1d(const GridFunction& f, const GridFunction& g,
                           double x) {
  if (f.dim != 1 || g.dim != 1) throw Error("direct route is 1D only");
  GinfWitness best;
  best.x = x;
  best.value = kInf;
  const double epsf = f.eps_zero();
  const double epsg = g.eps_zero();
  const double cell = std::max(f.cell(0), g.cell(0));

  // Both factors vanishing drives the harmonic sum to 0. Under the strictly
  // convex contract the zero sets are {0}, so this only fires near x = 0.
  for (std::int64_t i = 0; i < f.size(); ++i) {
    double fy = f.values[i];
    if (!(fy <= epsf)) continue;
    double y = f.node(i)[0];
    for (std::int64_t j = 0; j < g.size(); ++j) {
      if (!(g.values[j] <= epsg)) continue;
      double z = g.node(j)[0];
      if (std::abs(x - (y + z)) <= cell) {
        best.value = 0;
        best.y = y;
        best.z = z;
        best.feasible = true;
        return best;
      }
    }
  }

  for (std::int64_t i = 0; i < f.size(); ++i) {
    double fy = f.values[i];
    if (!std::isfinite(fy)) continue;
    double y = f.node(i)[0];
    for (std::int64_t j = 0; j < g.size(); ++j) {
      double gz = g.values[j];
      if (!std::isfinite(gz)) continue;
      if (fy <= epsf && gz <= epsg) continue;  // cleared form is vacuous
      double z = g.node(j)[0];
      // Half-cell collinearity band. Exactly collinear node pairs have
      // residual O(cell^2) and stay feasible; a full-cell band would admit
      // the pair with both nodes shifted by one cell, whose residual is
      // 2*cell*fy and whose value is biased low at first order in the cell.
      double tol = 0.5 * cell * (fy + gz) + 1e-12;
      if (std::abs((x - y) * gz - (z - x) * fy) > tol) continue;
      double value = (fy <= epsf || gz <= epsg)
                         ? 0.0
                         : 1.0 / (1.0 / fy + 1.0 / gz);
      if (value < best.value) {
        best.value = value;
        best.y = y;
        best.z = z;
        best.feasible = true;
      }
    }
  }
  return best;
}

GinfResult ginf_direct_1d_all(const GridFunction& f, const GridFunction& g) {
  GinfResult r;
  r.route = GinfRoute::Direct1D;
  r.output = f;
  r.output.argmax_map.clear();
  r.output.convexified = false;
  r.witness_pairs.resize(f.size());
  const std::int64_t n = f.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    GinfWitness w = ginf_direct_1d(f, g, f.node(i)[0]);
    r.output.values[i] = w.feasible ? w.value : kInf;
    r.witness_pairs[i] = w;
  }
  return r;
}

double cone_body_check(const GridFunction& f, const GridFunction& g,
                       int n_samples, unsigned seed) {
  GridFunction h = ginf_dual(f, g).output;
  std::mt19937 rng(seed);
  const int dim = f.dim;
  auto sample_body = [&](const GridFunction& phi, std::vector<Vec>& pts,
                         std::vector<double>& heights) {
    std::uniform_real_distribution<double> uy(1e-3, 4.0);
    std::array<std::uniform_real_distribution<double>, kMaxDim> ux;
    for (int ax = 0; ax < dim; ++ax)
      ux[ax] = std::uniform_real_distribution<double>(phi.lo[ax], phi.hi[ax]);
    int kept = 0, tries = 0;
    while (kept < n_samples && tries < 100 * n_samples) {
      ++tries;
      double y = uy(rng);
      Vec x(dim);
      for (int ax = 0; ax < dim; ++ax) x[ax] = ux[ax](rng) * y;
      double v;
      try {
        v = phi.evaluate((1.0 / y) * x);
      } catch (const OutOfBoxError&) {
        continue;
      }
      if (!(y * v <= 1.0)) continue;
      pts.push_back(x);
      heights.push_back(y);
      ++kept;
    }
  };
  std::vector<Vec> xf, xg;
  std::vector<double> yf, yg;
  sample_body(f, xf, yf);
  sample_body(g, xg, yg);
  double worst = 0;
  const double tol_cell = h.max_cell();
  for (size_t i = 0; i < xf.size(); ++i) {
    for (size_t j = 0; j < xg.size(); ++j) {
      Vec x = xf[i] + xg[j];
      double y = yf[i] + yg[j];
      double v;
      try {
        v = h.evaluate((1.0 / y) * x);
      } catch (const OutOfBoxError&) {
        continue;  // the summed body can outgrow h's sampled box
      }
      // Membership in K_h up to one cell of slack on the scaled argument.
      double violation = y * v - 1.0 - tol_cell * (1.0 + y);
      worst = std::max(worst, violation);
    }
  }
  return std::max(0.0, worst);
}

}  // namespace polarcvx
