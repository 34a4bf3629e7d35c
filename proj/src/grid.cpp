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

#include "polarcvx/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polarcvx {

std::array<int, kMaxDim> GridFunction::multi_index(std::int64_t flat) const {
  std::array<int, kMaxDim> idx{};
  for (int ax = dim - 1; ax >= 0; --ax) {
    idx[ax] = static_cast<int>(flat % shape[ax]);
    flat /= shape[ax];
  }
  return idx;
}

std::int64_t GridFunction::flat_index(
    const std::array<int, kMaxDim>& idx) const {
  std::int64_t f = 0;
  for (int ax = 0; ax < dim; ++ax) f = f * shape[ax] + idx[ax];
  return f;
}

Vec GridFunction::node(std::int64_t flat) const {
  auto idx = multi_index(flat);
  Vec x(dim);
  for (int ax = 0; ax < dim; ++ax) x[ax] = lo[ax] + idx[ax] * cell(ax);
  return x;
}

std::int64_t GridFunction::origin_flat() const {
  std::array<int, kMaxDim> idx{};
  for (int ax = 0; ax < dim; ++ax) {
    // Node nearest to 0; the odd shape and lo < 0 < hi pin it exactly.
    idx[ax] = static_cast<int>(std::lround(-lo[ax] / cell(ax)));
  }
  return flat_index(idx);
}

bool GridFunction::on_boundary(std::int64_t flat) const {
  auto idx = multi_index(flat);
  for (int ax = 0; ax < dim; ++ax)
    if (idx[ax] == 0 || idx[ax] == shape[ax] - 1) return true;
  return false;
}

double GridFunction::evaluate(const Vec& x) const {
  std::array<int, kMaxDim> base{};
  std::array<double, kMaxDim> frac{};
  for (int ax = 0; ax < dim; ++ax) {
    double c = cell(ax);
    double t = (x[ax] - lo[ax]) / c;
    if (t < -1e-12 || t > shape[ax] - 1 + 1e-12)
      throw OutOfBoxError("evaluation point outside the box");
    int i = static_cast<int>(std::floor(t));
    i = std::clamp(i, 0, shape[ax] - 2);
    base[ax] = i;
    frac[ax] = std::clamp(t - i, 0.0, 1.0);
  }
  double acc = 0;
  int corners = 1 << dim;
  for (int c = 0; c < corners; ++c) {
    std::array<int, kMaxDim> idx = base;
    double w = 1;
    for (int ax = 0; ax < dim; ++ax) {
      if (c & (1 << ax)) {
        idx[ax] += 1;
        w *= frac[ax];
      } else {
        w *= 1.0 - frac[ax];
      }
    }
    double v = values[flat_index(idx)];
    if (std::isinf(v)) return kInf;
    if (w != 0.0) acc += w * v;
  }
  return acc;
}

double GridFunction::max_finite_value() const {
  double m = 0;
  for (double v : values)
    if (std::isfinite(v)) m = std::max(m, v);
  return m;
}

double GridFunction::eps_zero() const {
  return std::max(1e-12, 1e-9 * max_finite_value());
}

double GridFunction::midpoint_convexity_violation() const {
  // Direction set: all nonzero integer offsets with entries in [-2, 2],
  // deduplicated up to sign and common factors, swept over all step sizes.
  std::vector<std::array<int, kMaxDim>> dirs;
  if (dim == 1) {
    dirs.push_back({1, 0, 0});
  } else {
    int lim = 2;
    for (int d0 = 0; d0 <= lim; ++d0)
      for (int d1 = -lim; d1 <= lim; ++d1)
        for (int d2 = (dim == 3 ? -lim : 0); d2 <= (dim == 3 ? lim : 0); ++d2) {
          if (d0 == 0 && (d1 < 0 || (d1 == 0 && d2 <= 0))) continue;
          if (d0 == 0 && d1 == 0 && d2 == 0) continue;
          int g = std::abs(d0);
          g = std::gcd(g, std::abs(d1));
          g = std::gcd(g, std::abs(d2));
          if (g > 1) continue;
          dirs.push_back({d0, d1, d2});
        }
  }
  double worst = 0;
  std::int64_t n = size();
  for (std::int64_t flat = 0; flat < n; ++flat) {
    double fm = values[flat];
    if (std::isinf(fm)) continue;
    auto mid = multi_index(flat);
    for (const auto& d : dirs) {
      for (int step = 1;; ++step) {
        std::array<int, kMaxDim> a = mid, b = mid;
        bool ok = true;
        for (int ax = 0; ax < dim; ++ax) {
          a[ax] -= step * d[ax];
          b[ax] += step * d[ax];
          if (a[ax] < 0 || a[ax] >= shape[ax] || b[ax] < 0 ||
              b[ax] >= shape[ax])
            ok = false;
        }
        if (!ok) break;
        double fa = values[flat_index(a)];
        double fb = values[flat_index(b)];
        if (std::isinf(fa) || std::isinf(fb)) continue;
        worst = std::max(worst, fm - 0.5 * (fa + fb));
      }
    }
  }
  return worst;
}

GridFunction make_grid(int dim, const std::array<double, kMaxDim>& lo,
                       const std::array<double, kMaxDim>& hi,
                       const std::array<int, kMaxDim>& shape) {
  if (dim < 1 || dim > kMaxDim) throw Error("dimension must be 1..3");
  GridFunction g;
  g.dim = dim;
  g.lo = lo;
  g.hi = hi;
  g.shape = shape;
  for (int ax = 0; ax < dim; ++ax) {
    if (!(lo[ax] < 0 && 0 < hi[ax]))
      throw BoxExcludesOriginError("box must satisfy lo < 0 < hi");
    if (shape[ax] < 3 || shape[ax] % 2 == 0)
      throw Error("shape must be odd and >= 3 per axis");
    // The origin must land on a lattice node.
    double t = -lo[ax] / g.cell(ax);
    if (std::abs(t - std::lround(t)) > 1e-9)
      throw BoxExcludesOriginError("origin is not a lattice node");
  }
  g.values.assign(g.size(), 0.0);
  return g;
}

GridFunction make_grid_1d(double lo, double hi, int n) {
  return make_grid(1, {lo, 0, 0}, {hi, 0, 0}, {n, 0, 0});
}

GridFunction make_grid_2d(double lo, double hi, int n) {
  return make_grid(2, {lo, lo, 0}, {hi, hi, 0}, {n, n, 0});
}

GridFunction sample(const AnalyticConvexFunction& f,
                    const std::array<double, kMaxDim>& lo,
                    const std::array<double, kMaxDim>& hi,
                    const std::array<int, kMaxDim>& shape) {
  GridFunction g = make_grid(f.dim(), lo, hi, shape);
  std::int64_t n = g.size();
  for (std::int64_t i = 0; i < n; ++i) g.values[i] = f.evaluate(g.node(i));
  g.values[g.origin_flat()] = 0.0;
  g.convexified = false;
  return g;
}

GridFunction sample_1d(const AnalyticConvexFunction& f, double lo, double hi,
                       int n) {
  return sample(f, {lo, 0, 0}, {hi, 0, 0}, {n, 0, 0});
}

GridFunction sample_2d(const AnalyticConvexFunction& f, double lo, double hi,
                       int n) {
  return sample(f, {lo, lo, 0}, {hi, hi, 0}, {n, n, 0});
}

Vec grid_gradient(const GridFunction& f, const Vec& x) {
  Vec g(f.dim);
  for (int ax = 0; ax < f.dim; ++ax) {
    double c = f.cell(ax);
    double h = std::max(1e-5, c / 2.0);
    Vec xm = x, xp = x;
    xm[ax] -= h;
    xp[ax] += h;
    double fm = f.evaluate(xm), f0 = f.evaluate(x), fp = f.evaluate(xp);
    if (std::isinf(fm) || std::isinf(f0) || std::isinf(fp))
      throw NotDifferentiableError("infinite value in gradient stencil");
    double sl = (f0 - fm) / h;
    double sr = (fp - f0) / h;
    double scale = std::max({std::abs(sl), std::abs(sr), 1.0});
    if (std::abs(sr - sl) > 10.0 * scale * c)
      throw NotDifferentiableError("one-sided slopes disagree (kink)");
    g[ax] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Mat grid_hessian(const GridFunction& f, const Vec& xq) {
  // Snap the stencil center to the nearest interior node: sub-cell reads are
  // piecewise multilinear and carry no curvature, node reads do.
  Vec x = xq;
  for (int ax = 0; ax < f.dim; ++ax) {
    double t = std::lround((xq[ax] - f.lo[ax]) / f.cell(ax));
    t = std::clamp(t, 1.0, static_cast<double>(f.shape[ax] - 2));
    x[ax] = f.lo[ax] + t * f.cell(ax);
  }
  Mat h(f.dim);
  double f0 = f.evaluate(x);
  if (std::isinf(f0)) throw NotDifferentiableError("infinite value");
  for (int i = 0; i < f.dim; ++i) {
    double hi_ = f.cell(i);
    Vec xp = x, xm = x;
    xp[i] += hi_;
    xm[i] -= hi_;
    double fp = f.evaluate(xp), fm = f.evaluate(xm);
    if (std::isinf(fp) || std::isinf(fm))
      throw NotDifferentiableError("infinite value in Hessian stencil");
    h(i, i) = (fp - 2.0 * f0 + fm) / (hi_ * hi_);
    for (int j = i + 1; j < f.dim; ++j) {
      double hj = f.cell(j);
      Vec xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += hi_;
      xpp[j] += hj;
      xpm[i] += hi_;
      xpm[j] -= hj;
      xmp[i] -= hi_;
      xmp[j] += hj;
      xmm[i] -= hi_;
      xmm[j] -= hj;
      double v = (f.evaluate(xpp) - f.evaluate(xpm) - f.evaluate(xmp) +
                  f.evaluate(xmm)) /
                 (4.0 * hi_ * hj);
      if (!std::isfinite(v))
        throw NotDifferentiableError("infinite value in Hessian stencil");
      h(i, j) = h(j, i) = v;
    }
  }
  return h;
}

GridFunction combine_grids(double a, const GridFunction& f, double b,
                           const GridFunction& g) {
  if (f.dim != g.dim || f.shape != g.shape || f.lo != g.lo || f.hi != g.hi)
    throw Error("grid mismatch in nodewise combination");
  GridFunction r = f;
  r.argmax_map.clear();
  r.convexified = false;
  for (std::int64_t i = 0; i < r.size(); ++i) {
    double u = f.values[i], v = g.values[i];
    r.values[i] = (std::isinf(u) || std::isinf(v)) ? kInf : a * u + b * v;
  }
  return r;
}

GridFunction add_grids(const GridFunction& f, const GridFunction& g) {
  return combine_grids(1.0, f, 1.0, g);
}

GridFunction scale_grid(double t, const GridFunction& f) {
  if (t <= 0) throw Error("scale factor must be positive");
  GridFunction r = f;
  for (auto& v : r.values)
    if (!std::isinf(v)) v *= t;
  return r;
}

}  // namespace polarcvx
