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

#include "polarcvx/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace polarcvx {

namespace {

// Struct-of-arrays packing of the finite input nodes, in lexicographic
// lattice order so that a strict > comparison realizes the smallest-index
// tie-break.
struct PackedNodes {
  std::array<std::vector<double>, kMaxDim> c;
  std::vector<double> v;  // f(x), or 1/f(x) for the polar sup
  std::vector<std::int64_t> flat;

  // Per-block coordinate and weight ranges. The sup loops bound each block
  // from above and skip blocks that cannot beat the running maximum; skipped
  // blocks never contain a strict improvement, so values and argmax are
  // identical to the full scan.
  static constexpr std::size_t kBlock = 128;
  struct Block {
    std::array<double, kMaxDim> cmin{}, cmax{};
    double vmin = 0, vmax = 0;
  };
  std::vector<Block> blocks;

  std::size_t count() const { return flat.size(); }

  void finalize(int dim) {
    blocks.clear();
    for (std::size_t b0 = 0; b0 < count(); b0 += kBlock) {
      const std::size_t b1 = std::min(b0 + kBlock, count());
      Block b;
      for (int ax = 0; ax < dim; ++ax) {
        double lo = kInf, hi = -kInf;
        for (std::size_t i = b0; i < b1; ++i) {
          lo = std::min(lo, c[ax][i]);
          hi = std::max(hi, c[ax][i]);
        }
        b.cmin[ax] = lo;
        b.cmax[ax] = hi;
      }
      double lo = kInf, hi = -kInf;
      for (std::size_t i = b0; i < b1; ++i) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
      }
      b.vmin = lo;
      b.vmax = hi;
      blocks.push_back(b);
    }
  }
};

GridFunction make_output(const GridFunction& in, const DualGrid& dual) {
  GridFunction out = make_grid(in.dim, dual.lo, dual.hi, dual.shape);
  out.argmax_map.assign(out.size(), -1);
  return out;
}

double boundary_fraction(const GridFunction& in, const GridFunction& out) {
  std::int64_t counted = 0, on_bd = 0;
  for (std::int64_t j = 0; j < out.size(); ++j) {
    if (std::isinf(out.values[j])) continue;
    std::int64_t arg = out.argmax_map[j];
    if (arg < 0) continue;
    ++counted;
    if (in.on_boundary(arg)) ++on_bd;
  }
  return counted == 0 ? 0.0 : static_cast<double>(on_bd) / counted;
}

template <int DIM>
void legendre_loop(const PackedNodes& p, GridFunction& out, bool parallel) {
  const std::int64_t m = out.size();
  const std::size_t k = p.count();
  const double* px = p.c[0].data();
  const double* py = DIM >= 2 ? p.c[1].data() : nullptr;
  const double* pz = DIM >= 3 ? p.c[2].data() : nullptr;
  const double* pv = p.v.data();
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t j = 0; j < m; ++j) {
    Vec y = out.node(j);
    const double y0 = y[0];
    const double y1 = DIM >= 2 ? y[1] : 0;
    const double y2 = DIM >= 3 ? y[2] : 0;
    double best = -kInf;
    std::size_t arg = 0;
    for (std::size_t bi = 0; bi < p.blocks.size(); ++bi) {
      const auto& blk = p.blocks[bi];
      double dmax = (y0 >= 0 ? blk.cmax[0] : blk.cmin[0]) * y0;
      if constexpr (DIM >= 2) dmax += (y1 >= 0 ? blk.cmax[1] : blk.cmin[1]) * y1;
      if constexpr (DIM >= 3) dmax += (y2 >= 0 ? blk.cmax[2] : blk.cmin[2]) * y2;
      if (dmax - blk.vmin <= best) continue;
      const std::size_t i1 = std::min((bi + 1) * PackedNodes::kBlock, k);
      for (std::size_t i = bi * PackedNodes::kBlock; i < i1; ++i) {
        double s = px[i] * y0 - pv[i];
        if constexpr (DIM >= 2) s += py[i] * y1;
        if constexpr (DIM >= 3) s += pz[i] * y2;
        if (s > best) {
          best = s;
          arg = i;
        }
      }
    }
    out.values[j] = best;
    out.argmax_map[j] = p.flat[arg];
  }
}

template <int DIM>
void polar_loop(const PackedNodes& pos, const PackedNodes& zero,
                GridFunction& out, bool parallel) {
  const std::int64_t m = out.size();
  const std::size_t kp = pos.count();
  const std::size_t kz = zero.count();
  const double* px = pos.c[0].data();
  const double* py = DIM >= 2 ? pos.c[1].data() : nullptr;
  const double* pz = DIM >= 3 ? pos.c[2].data() : nullptr;
  const double* pinv = pos.v.data();
  const double* zx = zero.c[0].data();
  const double* zy = DIM >= 2 ? zero.c[1].data() : nullptr;
  const double* zz = DIM >= 3 ? zero.c[2].data() : nullptr;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t j = 0; j < m; ++j) {
    Vec y = out.node(j);
    const double y0 = y[0];
    const double y1 = DIM >= 2 ? y[1] : 0;
    const double y2 = DIM >= 3 ? y[2] : 0;
    // Zero-set polarity constraint: <x,y> <= 1 on f^{-1}(0).
    bool excluded = false;
    for (std::size_t i = 0; i < kz; ++i) {
      double s = zx[i] * y0;
      if constexpr (DIM >= 2) s += zy[i] * y1;
      if constexpr (DIM >= 3) s += zz[i] * y2;
      if (s > 1.0 + 1e-12) {
        excluded = true;
        break;
      }
    }
    if (excluded) {
      out.values[j] = kInf;
      out.argmax_map[j] = -1;
      continue;
    }
    double best = -kInf;
    std::int64_t arg = -1;
    for (std::size_t bi = 0; bi < pos.blocks.size(); ++bi) {
      const auto& blk = pos.blocks[bi];
      double dmax = (y0 >= 0 ? blk.cmax[0] : blk.cmin[0]) * y0;
      if constexpr (DIM >= 2) dmax += (y1 >= 0 ? blk.cmax[1] : blk.cmin[1]) * y1;
      if constexpr (DIM >= 3) dmax += (y2 >= 0 ? blk.cmax[2] : blk.cmin[2]) * y2;
      double sb = dmax - 1.0;
      sb *= sb > 0 ? blk.vmax : blk.vmin;  // v holds 1/f(x) > 0
      if (sb <= best) continue;
      const std::size_t i1 = std::min((bi + 1) * PackedNodes::kBlock, kp);
      for (std::size_t i = bi * PackedNodes::kBlock; i < i1; ++i) {
        double s = px[i] * y0 - 1.0;
        if constexpr (DIM >= 2) s += py[i] * y1;
        if constexpr (DIM >= 3) s += pz[i] * y2;
        s *= pinv[i];
        if (s > best) {
          best = s;
          arg = static_cast<std::int64_t>(i);
        }
      }
    }
    // inf{c >= 0 : ...}: negative sups clamp to zero.
    out.values[j] = kp == 0 ? 0.0 : std::max(0.0, best);
    out.argmax_map[j] = arg >= 0 ? pos.flat[arg] : -1;
  }
}

}  // namespace

DualGrid default_dual_grid(const GridFunction& f) {
  DualGrid d;
  for (int ax = 0; ax < f.dim; ++ax) {
    double r = std::max(std::abs(f.lo[ax]), f.hi[ax]);
    double s = f.shape[ax] / (2.0 * r);
    d.lo[ax] = -s;
    d.hi[ax] = s;
    d.shape[ax] = f.shape[ax];
  }
  return d;
}

DualGrid dual_grid_1d(double lo, double hi, int n) {
  DualGrid d;
  d.lo = {lo, 0, 0};
  d.hi = {hi, 0, 0};
  d.shape = {n, 0, 0};
  return d;
}

DualGrid dual_grid_2d(double lo, double hi, int n) {
  DualGrid d;
  d.lo = {lo, lo, 0};
  d.hi = {hi, hi, 0};
  d.shape = {n, n, 0};
  return d;
}

DualGrid dual_grid_of(const GridFunction& f) {
  return DualGrid{f.lo, f.hi, f.shape};
}

TransformResult legendre(const GridFunction& f, const DualGrid& dual,
                         const TransformOptions& opts) {
  PackedNodes p;
  for (std::int64_t i = 0; i < f.size(); ++i) {
    double v = f.values[i];
    if (std::isinf(v)) continue;
    Vec x = f.node(i);
    for (int ax = 0; ax < f.dim; ++ax) p.c[ax].push_back(x[ax]);
    p.v.push_back(v);
    p.flat.push_back(i);
  }
  if (p.count() == 0) throw EmptyDomainError("no finite values");
  p.finalize(f.dim);
  TransformResult r;
  r.output = make_output(f, dual);
  switch (f.dim) {
    case 1:
      legendre_loop<1>(p, r.output, opts.parallel);
      break;
    case 2:
      legendre_loop<2>(p, r.output, opts.parallel);
      break;
    default:
      legendre_loop<3>(p, r.output, opts.parallel);
  }
  r.boundary_attainment_fraction = boundary_fraction(f, r.output);
  if (opts.strict && r.boundary_attainment_fraction > 0)
    throw TruncationError("legendre sup attained on the input box boundary");
  return r;
}

TransformResult polar(const GridFunction& f, const DualGrid& dual,
                      const TransformOptions& opts) {
  const double eps = f.eps_zero();
  PackedNodes pos, zero;
  std::int64_t finite = 0;
  for (std::int64_t i = 0; i < f.size(); ++i) {
    double v = f.values[i];
    if (std::isinf(v)) continue;
    ++finite;
    Vec x = f.node(i);
    if (v <= eps) {
      for (int ax = 0; ax < f.dim; ++ax) zero.c[ax].push_back(x[ax]);
      zero.v.push_back(0.0);
      zero.flat.push_back(i);
    } else {
      for (int ax = 0; ax < f.dim; ++ax) pos.c[ax].push_back(x[ax]);
      pos.v.push_back(1.0 / v);
      pos.flat.push_back(i);
    }
  }
  if (finite == 0) throw EmptyDomainError("no finite values");
  pos.finalize(f.dim);
  TransformResult r;
  r.output = make_output(f, dual);
  if (pos.count() == 0 && finite == f.size()) {
    // f vanishes identically on the grid: the polar is the indicator of {0}.
    std::fill(r.output.values.begin(), r.output.values.end(), kInf);
    std::int64_t o = r.output.origin_flat();
    r.output.values[o] = 0.0;
    r.output.argmax_map[o] = f.origin_flat();
    r.output.convexified = true;
    return r;
  }
  switch (f.dim) {
    case 1:
      polar_loop<1>(pos, zero, r.output, opts.parallel);
      break;
    case 2:
      polar_loop<2>(pos, zero, r.output, opts.parallel);
      break;
    default:
      polar_loop<3>(pos, zero, r.output, opts.parallel);
  }
  std::int64_t o = r.output.origin_flat();
  r.output.values[o] = 0.0;
  if (r.output.argmax_map[o] < 0) r.output.argmax_map[o] = f.origin_flat();
  r.output.convexified = true;
  r.boundary_attainment_fraction = boundary_fraction(f, r.output);
  if (opts.strict && r.boundary_attainment_fraction > 0)
    throw TruncationError("polar sup attained on the input box boundary");
  return r;
}

namespace reference {

TransformResult legendre(const GridFunction& f, const DualGrid& dual) {
  TransformResult r;
  r.output = make_output(f, dual);
  bool any = false;
  for (std::int64_t i = 0; i < f.size(); ++i)
    if (std::isfinite(f.values[i])) any = true;
  if (!any) throw EmptyDomainError("no finite values");
  for (std::int64_t j = 0; j < r.output.size(); ++j) {
    Vec y = r.output.node(j);
    double best = -kInf;
    std::int64_t arg = -1;
    for (std::int64_t i = 0; i < f.size(); ++i) {
      if (std::isinf(f.values[i])) continue;
      double s = dot(f.node(i), y) - f.values[i];
      if (s > best) {
        best = s;
        arg = i;
      }
    }
    r.output.values[j] = best;
    r.output.argmax_map[j] = arg;
  }
  r.boundary_attainment_fraction = boundary_fraction(f, r.output);
  return r;
}

TransformResult polar(const GridFunction& f, const DualGrid& dual) {
  const double eps = f.eps_zero();
  TransformResult r;
  r.output = make_output(f, dual);
  std::int64_t finite = 0, positive = 0;
  for (std::int64_t i = 0; i < f.size(); ++i)
    if (std::isfinite(f.values[i])) {
      ++finite;
      if (f.values[i] > eps) ++positive;
    }
  if (finite == 0) throw EmptyDomainError("no finite values");
  if (positive == 0 && finite == f.size()) {
    std::fill(r.output.values.begin(), r.output.values.end(), kInf);
    std::int64_t o = r.output.origin_flat();
    r.output.values[o] = 0.0;
    r.output.argmax_map[o] = f.origin_flat();
    r.output.convexified = true;
    return r;
  }
  for (std::int64_t j = 0; j < r.output.size(); ++j) {
    Vec y = r.output.node(j);
    bool excluded = false;
    for (std::int64_t i = 0; i < f.size() && !excluded; ++i)
      if (std::isfinite(f.values[i]) && f.values[i] <= eps &&
          dot(f.node(i), y) > 1.0 + 1e-12)
        excluded = true;
    if (excluded) {
      r.output.values[j] = kInf;
      continue;
    }
    double best = -kInf;
    std::int64_t arg = -1;
    for (std::int64_t i = 0; i < f.size(); ++i) {
      if (!std::isfinite(f.values[i]) || f.values[i] <= eps) continue;
      double s = (dot(f.node(i), y) - 1.0) / f.values[i];
      if (s > best) {
        best = s;
        arg = i;
      }
    }
    r.output.values[j] = positive == 0 ? 0.0 : std::max(0.0, best);
    r.output.argmax_map[j] = arg;
  }
  std::int64_t o = r.output.origin_flat();
  r.output.values[o] = 0.0;
  if (r.output.argmax_map[o] < 0) r.output.argmax_map[o] = f.origin_flat();
  r.output.convexified = true;
  r.boundary_attainment_fraction = boundary_fraction(f, r.output);
  return r;
}

}  // namespace reference

std::optional<AnalyticConvexFunction> polar_analytic(
    const AnalyticConvexFunction& f) {
  using ACF = AnalyticConvexFunction;
  const auto& node = f.node();
  if (const auto* b = std::get_if<ACF::IndicatorOfBall>(&node)) {
    return ACF::ball_indicator(f.dim(), dual_exponent(b->p), 1.0 / b->radius);
  }
  if (const auto* pn = std::get_if<ACF::PowerOfPNorm>(&node)) {
    double pd = dual_exponent(pn->p);
    if (pn->q == 1.0) return ACF::power_norm(f.dim(), pd, 1.0, 1.0 / pn->scale);
    // Radial reduction of the 1D stationary formula for s*t^q.
    double q = pn->q;
    double c = std::pow(q - 1.0, q - 1.0) / std::pow(q, q) / pn->scale;
    return ACF::power_norm(f.dim(), pd, q, c);
  }
  if (const auto* qd = std::get_if<ACF::Quadratic>(&node)) {
    return ACF::quadratic(inverse(qd->A));
  }
  if (const auto* sc = std::get_if<ACF::Scaled>(&node)) {
    auto child = polar_analytic(*sc->child);
    if (!child) return std::nullopt;
    return ACF::scaled(1.0 / sc->t, std::move(*child));
  }
  if (const auto* pl = std::get_if<ACF::PrecomposeLinear>(&node)) {
    auto child = polar_analytic(*pl->child);
    if (!child) return std::nullopt;
    return ACF::precompose(transpose(inverse(pl->m)), std::move(*child));
  }
  return std::nullopt;
}

namespace {

// Graph samples of f pushed through (x, t) |-> (x/t, 1/t), plus the origin.
// The lower convex envelope of this cloud is the graph of Jf.
struct Cloud {
  std::vector<Vec> z;
  std::vector<double> h;
};

Cloud epigraph_image(const GridFunction& f) {
  Cloud c;
  const double eps = f.eps_zero();
  for (std::int64_t i = 0; i < f.size(); ++i) {
    double v = f.values[i];
    if (std::isinf(v)) continue;
    double t = std::max(v, eps);
    Vec x = f.node(i);
    c.z.push_back((1.0 / t) * x);
    c.h.push_back(1.0 / t);
  }
  c.z.push_back(Vec::zero(f.dim));
  c.h.push_back(0.0);
  return c;
}

GridFunction lower_hull_resample_1d(const Cloud& cloud, const GridFunction& f) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(cloud.z.size());
  for (std::size_t i = 0; i < cloud.z.size(); ++i)
    pts.emplace_back(cloud.z[i][0], cloud.h[i]);
  std::sort(pts.begin(), pts.end());
  // Merge near-duplicate abscissae keeping the lower value.
  std::vector<std::pair<double, double>> uniq;
  for (const auto& p : pts) {
    if (!uniq.empty() && p.first - uniq.back().first < 1e-14)
      uniq.back().second = std::min(uniq.back().second, p.second);
    else
      uniq.push_back(p);
  }
  // Monotone chain, lower hull.
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : uniq) {
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      double cross = (b.first - a.first) * (p.second - a.second) -
                     (b.second - a.second) * (p.first - a.first);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  GridFunction out = make_grid(1, f.lo, f.hi, f.shape);
  for (std::int64_t j = 0; j < out.size(); ++j) {
    double s = out.node(j)[0];
    if (s < hull.front().first - 1e-14 || s > hull.back().first + 1e-14) {
      out.values[j] = kInf;
      continue;
    }
    auto it = std::lower_bound(
        hull.begin(), hull.end(), s,
        [](const std::pair<double, double>& a, double v) { return a.first < v; });
    if (it == hull.begin()) {
      out.values[j] = it->second;
    } else {
      auto a = *(it - 1);
      auto b = it == hull.end() ? hull.back() : *it;
      double w = b.first > a.first ? (s - a.first) / (b.first - a.first) : 0.0;
      out.values[j] = (1.0 - w) * a.second + w * b.second;
    }
  }
  out.values[out.origin_flat()] = 0.0;
  out.convexified = true;
  return out;
}

// Lower convex envelope of a 2D cloud by a discrete biconjugate over a slope
// lattice: env(s) = max_m <m,s> - max_k(<m,z_k> - h_k).
GridFunction lower_hull_resample_2d(const Cloud& cloud, const GridFunction& f,
                                    bool parallel) {
  GridFunction out = make_grid(2, f.lo, f.hi, f.shape);
  DualGrid sl = default_dual_grid(out);
  GridFunction slopes = make_grid(2, sl.lo, sl.hi, sl.shape);
  const std::int64_t ms = slopes.size();
  std::vector<double> conj(ms);
  const std::size_t k = cloud.z.size();
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t j = 0; j < ms; ++j) {
    Vec m = slopes.node(j);
    double best = -kInf;
    for (std::size_t i = 0; i < k; ++i)
      best = std::max(best, dot(m, cloud.z[i]) - cloud.h[i]);
    conj[j] = best;
  }
  const std::int64_t n = out.size();
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t j = 0; j < n; ++j) {
    Vec s = out.node(j);
    double best = -kInf;
    for (std::int64_t i = 0; i < ms; ++i)
      best = std::max(best, dot(slopes.node(i), s) - conj[i]);
    out.values[j] = std::max(0.0, best);
  }
  out.values[out.origin_flat()] = 0.0;
  out.convexified = true;
  return out;
}

}  // namespace

// Gradient-range dual box: covers the slopes f actually attains, with some
// headroom, on a refined lattice.
DualGrid slope_dual_grid(const GridFunction& f, double margin, int refine) {
  DualGrid d;
  for (int ax = 0; ax < f.dim; ++ax) {
    double smax = 1.0;
    for (std::int64_t i = 0; i < f.size(); ++i) {
      auto idx = f.multi_index(i);
      if (idx[ax] + 1 >= f.shape[ax]) continue;
      auto nxt = idx;
      nxt[ax] += 1;
      double a = f.values[i], b = f.values[f.flat_index(nxt)];
      if (std::isinf(a) || std::isinf(b)) continue;
      smax = std::max(smax, std::abs(b - a) / f.cell(ax));
    }
    double s = margin * smax;
    d.lo[ax] = -s;
    d.hi[ax] = s;
    int n = refine * (f.shape[ax] - 1) + 1;
    d.shape[ax] = n;
  }
  return d;
}

JResult j_transform(const GridFunction& f, JRoute route,
                    const TransformOptions& opts) {
  bool any = false;
  for (double v : f.values)
    if (std::isfinite(v)) any = true;
  if (!any) throw DegenerateEpigraphError("no finite values");

  auto composition = [&]() {
    int refine = f.dim == 1 ? 4 : 1;
    TransformResult w = polar(f, slope_dual_grid(f, 2.0, refine), opts);
    TransformResult j = legendre(w.output, dual_grid_of(f), opts);
    GridFunction out = std::move(j.output);
    for (auto& v : out.values) v = std::max(0.0, v);
    out.values[out.origin_flat()] = 0.0;
    out.convexified = true;
    return out;
  };

  JResult r;
  if (route == JRoute::Composition || (route == JRoute::Auto && f.dim == 3)) {
    r.output = composition();
    return r;
  }
  Cloud cloud = epigraph_image(f);
  r.output = f.dim == 1 ? lower_hull_resample_1d(cloud, f)
                        : lower_hull_resample_2d(cloud, f, opts.parallel);
  if (route == JRoute::Auto) {
    GridFunction comp = composition();
    double dev = 0;
    for (std::int64_t i = 0; i < r.output.size(); ++i) {
      if (r.output.on_boundary(i)) continue;
      double a = r.output.values[i], b = comp.values[i];
      if (std::isinf(a) || std::isinf(b)) continue;
      dev = std::max(dev, std::abs(a - b));
    }
    r.cross_deviation = dev;
  }
  return r;
}

GridFunction geometric_envelope(const GridFunction& f,
                                const TransformOptions& opts) {
  TransformResult w = polar(f, slope_dual_grid(f, 2.0, f.dim == 1 ? 4 : 1), opts);
  TransformResult back = polar(w.output, dual_grid_of(f), opts);
  GridFunction out = std::move(back.output);
  out.convexified = true;
  return out;
}

DomainDualityReport domain_duality_check(const GridFunction& f,
                                         const TransformOptions& opts) {
  TransformResult pf = polar(f, default_dual_grid(f), opts);
  const GridFunction& w = pf.output;
  const double eps = f.eps_zero();
  std::vector<Vec> zero_set;
  for (std::int64_t i = 0; i < f.size(); ++i)
    if (std::isfinite(f.values[i]) && f.values[i] <= eps)
      zero_set.push_back(f.node(i));
  // Membership of y in the polar of the zero set via the support function.
  auto in_polar = [&](const Vec& y) {
    double h = 0;
    for (const auto& z : zero_set) h = std::max(h, dot(z, y));
    double tol = 0.5 * f.max_cell() * (norm2(y) + 1.0);
    return h <= 1.0 + tol;
  };
  std::vector<std::int64_t> in_a, in_b, mism;
  for (std::int64_t j = 0; j < w.size(); ++j) {
    bool a = std::isfinite(w.values[j]);
    bool b = in_polar(w.node(j));
    if (a) in_a.push_back(j);
    if (b) in_b.push_back(j);
    if (a != b) mism.push_back(j);
  }
  DomainDualityReport rep;
  rep.mismatch_fraction = static_cast<double>(mism.size()) / w.size();
  for (std::int64_t j : mism) {
    Vec y = w.node(j);
    bool a = std::isfinite(w.values[j]);
    const auto& other = a ? in_b : in_a;
    double dmin = kInf;
    for (std::int64_t i : other) dmin = std::min(dmin, norm2(w.node(i) - y));
    if (other.empty()) dmin = norm2(y);
    rep.max_deviation = std::max(rep.max_deviation, dmin);
  }
  return rep;
}

double epigraph_polar_check(const GridFunction& f, int n_directions,
                            unsigned seed) {
  TransformResult pf = polar(f, default_dual_grid(f), {});
  const GridFunction& w = pf.output;
  std::vector<std::int64_t> finite;
  for (std::int64_t j = 0; j < w.size(); ++j)
    if (std::isfinite(w.values[j]) && w.values[j] > 0) finite.push_back(j);
  if (finite.empty()) return 0.0;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, finite.size() - 1);
  double worst = -kInf;
  for (int d = 0; d < n_directions; ++d) {
    std::int64_t j = finite[pick(rng)];
    Vec y = w.node(j);
    double c = w.values[j];
    // Reflected boundary point (y, -c) against epi(f): sup <x,y> - t*c over
    // (x,t) in epi f; attained on the graph since c >= 0.
    double sup = -kInf;
    for (std::int64_t i = 0; i < f.size(); ++i) {
      double v = f.values[i];
      if (std::isinf(v)) continue;
      sup = std::max(sup, dot(f.node(i), y) - v * c);
    }
    worst = std::max(worst, sup - 1.0);
  }
  return worst;
}

}  // namespace polarcvx
