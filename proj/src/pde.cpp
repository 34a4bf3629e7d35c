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

#include "polarcvx/pde.hpp"

#include <algorithm>
#include <cmath>

#include "polarcvx/classify.hpp"
#include "polarcvx/ginfconv.hpp"

namespace polarcvx {

namespace {

void advise(const PdeOptions& opts, bool ok, const std::string& msg) {
  if (ok) return;
  if (opts.advisory == AdvisoryPolicy::Abort) throw AdvisoryFailureError(msg);
  if (opts.advisories) opts.advisories->push_back(msg);
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw TimesOutOfRangeError("empty time list");
  double prev = -kInf;
  for (double t : times) {
    if (t < 0 || !std::isfinite(t))
      throw TimesOutOfRangeError("times must be finite and >= 0");
    if (t <= prev && prev >= 0)
      throw TimesOutOfRangeError("times must be strictly increasing");
    prev = t;
  }
}

void advise_smooth_superlinear(const GridFunction& f, const PdeOptions& opts,
                               const char* name) {
  ClassReport rep = classify(f);
  advise(opts, rep.in_s2,
         std::string(name) + ": smooth strict convexity not confirmed");
  advise(opts, rep.nonlinear_at_infinity,
         std::string(name) + ": superlinear growth not confirmed");
}

GridFunction sample_on_dual(const AnalyticConvexFunction& g,
                            const DualGrid& dual) {
  GridFunction out = make_grid(g.dim(), dual.lo, dual.hi, dual.shape);
  for (std::int64_t k = 0; k < out.size(); ++k)
    out.values[k] = g.evaluate(out.node(k));
  return out;
}

GridFunction resample_on_dual(const GridFunction& g, const DualGrid& dual) {
  GridFunction out = make_grid(g.dim, dual.lo, dual.hi, dual.shape);
  for (std::int64_t k = 0; k < out.size(); ++k) {
    try {
      out.values[k] = g.evaluate(out.node(k));
    } catch (const OutOfBoxError&) {
      out.values[k] = kInf;
    }
  }
  return out;
}

TimePath hj_core(const GridFunction& f, const GridFunction& g_on_dual,
                 const DualGrid& dual, const std::vector<double>& times,
                 const PdeOptions& opts) {
  check_times(times);
  advise_smooth_superlinear(f, opts, "f");
  TimePath path;
  path.provenance = ProvenanceKind::HJ;
  path.provenance_detail = "hj";
  path.times = times;
  TransformResult w0 = polar(f, dual, opts.transform);
  DualGrid primal = dual_grid_of(f);
  for (double t : times) {
    GridFunction dual_frame = combine_grids(1.0, w0.output, t, g_on_dual);
    TransformResult frame = polar(dual_frame, primal, opts.transform);
    FrameDiagnostics d;
    d.boundary_fraction = frame.boundary_attainment_fraction;
    d.convexity_violation = frame.output.midpoint_convexity_violation();
    path.frames.push_back(std::move(frame.output));
    path.diagnostics.push_back(d);
  }
  return path;
}

}  // namespace

TimePath solve_polar_hj(const GridFunction& f, const AnalyticConvexFunction& g,
                        const std::vector<double>& times,
                        const PdeOptions& opts) {
  DualGrid dual = default_dual_grid(f);
  return hj_core(f, sample_on_dual(g, dual), dual, times, opts);
}

TimePath solve_polar_hj(const GridFunction& f, const GridFunction& g,
                        const std::vector<double>& times,
                        const PdeOptions& opts) {
  DualGrid dual = default_dual_grid(f);
  return hj_core(f, resample_on_dual(g, dual), dual, times, opts);
}

double hj_residual(const TimePath& path, int i, const Vec& x,
                   const std::function<double(const Vec&)>& g) {
  if (i < 1 || i + 1 >= static_cast<int>(path.frames.size()))
    throw FrameOutOfRangeError("interior frame index required");
  const GridFunction& u = path.frames[i];
  double ux = u.evaluate(x);
  if (!(ux > u.eps_zero()))
    throw RayLinearAtPointError("u(t,x) must be positive");
  double span = path.times[i + 1] - path.times[i - 1];
  double dudt =
      (path.frames[i + 1].evaluate(x) - path.frames[i - 1].evaluate(x)) / span;
  Vec grad = grid_gradient(u, x);
  TransformResult conj = legendre(u, default_dual_grid(u));
  double lstar = conj.output.evaluate(grad);
  if (!(lstar > u.eps_zero()))
    throw EmptyPolarGradientError("conjugate value vanishes at grad u");
  return std::abs(dudt / ux + lstar * g((1.0 / lstar) * grad));
}

TimePath solve_ma_dirichlet(const GridFunction& u0, const GridFunction& u1,
                            double T, const std::vector<double>& times,
                            const PdeOptions& opts) {
  check_times(times);
  if (times.back() > T + 1e-12)
    throw TimesOutOfRangeError("requested time beyond T");
  advise_smooth_superlinear(u0, opts, "u0");
  advise_smooth_superlinear(u1, opts, "u1");
  DualGrid dual = default_dual_grid(u0);
  DualGrid primal = dual_grid_of(u0);
  TransformResult w0 = polar(u0, dual, opts.transform);
  TransformResult w1 = polar(u1, dual, opts.transform);
  TimePath path;
  path.provenance = ProvenanceKind::MADirichlet;
  path.provenance_detail = "ma_dirichlet";
  path.times = times;
  for (double t : times) {
    double s = t / T;
    GridFunction dual_frame = combine_grids(1.0 - s, w0.output, s, w1.output);
    TransformResult frame = polar(dual_frame, primal, opts.transform);
    FrameDiagnostics d;
    d.boundary_fraction = frame.boundary_attainment_fraction;
    d.convexity_violation = frame.output.midpoint_convexity_violation();
    path.frames.push_back(std::move(frame.output));
    path.diagnostics.push_back(d);
  }
  return path;
}

TimePath solve_ma_dirichlet_ginf(const GridFunction& u0,
                                 const GridFunction& u1, double T,
                                 const std::vector<double>& times,
                                 const PdeOptions& opts) {
  check_times(times);
  if (times.back() > T + 1e-12)
    throw TimesOutOfRangeError("requested time beyond T");
  DualGrid dual = default_dual_grid(u0);
  TimePath path;
  path.provenance = ProvenanceKind::MADirichlet;
  path.provenance_detail = "ma_dirichlet_ginf";
  path.times = times;
  for (double t : times) {
    GridFunction frame;
    if (t <= 1e-12 * T) {
      frame = geometric_envelope(u0, opts.transform);
    } else if (t >= T * (1.0 - 1e-12)) {
      frame = geometric_envelope(u1, opts.transform);
    } else {
      GridFunction a = scale_grid(T / (T - t), u0);
      GridFunction b = scale_grid(T / t, u1);
      frame = ginf_dual(a, b, dual, opts.transform).output;
    }
    FrameDiagnostics d;
    d.convexity_violation = frame.midpoint_convexity_violation();
    path.frames.push_back(std::move(frame));
    path.diagnostics.push_back(d);
  }
  return path;
}

double ma_residual(const TimePath& path, int i, const Vec& x) {
  if (i < 1 || i + 1 >= static_cast<int>(path.frames.size()))
    throw FrameOutOfRangeError("interior frame index required");
  const GridFunction& u = path.frames[i];
  double u0 = u.evaluate(x);
  if (!(u0 > u.eps_zero()))
    throw RayLinearAtPointError("u(t,x) must be positive");
  double up = path.frames[i + 1].evaluate(x);
  double um = path.frames[i - 1].evaluate(x);
  if (!(up > 0) || !(um > 0) || !std::isfinite(up) || !std::isfinite(um))
    throw RayLinearAtPointError("u must stay finite positive at x");
  double dt = 0.5 * (path.times[i + 1] - path.times[i - 1]);
  double inv_u_dd = (1.0 / up - 2.0 / u0 + 1.0 / um) / (dt * dt);
  // Nodewise rate field du/dt / u; +inf where undefined.
  GridFunction q = u;
  q.argmax_map.clear();
  double span = path.times[i + 1] - path.times[i - 1];
  for (std::int64_t k = 0; k < q.size(); ++k) {
    double vp = path.frames[i + 1].values[k];
    double vm = path.frames[i - 1].values[k];
    double v0 = u.values[k];
    q.values[k] =
        (std::isfinite(vp) && std::isfinite(vm) && v0 > u.eps_zero())
            ? (vp - vm) / (span * v0)
            : kInf;
  }
  Vec a = grid_gradient(q, x);
  Mat h = grid_hessian(u, x);
  double quad;
  try {
    quad = dot(a, solve(h, a));
  } catch (const std::runtime_error&) {
    // Frames from coarse dual lattices are locally linear, so the discrete
    // Hessian can vanish. The curvature term enters only through the rate
    // gradient, which must vanish there as well.
    if (norm2(a) > 1e-6 * (1.0 + std::abs(inv_u_dd)))
      throw RayLinearAtPointError("degenerate Hessian at x");
    quad = 0;
  }
  return std::abs(inv_u_dd + quad);
}

namespace {

struct DualFrameCheck {
  double value_tol = 0;
  double convexity_tol = 0;
  double degeneracy_floor = 0;
};

GridFunction dual_cauchy_frame(const GridFunction& w0, const GridFunction& v,
                               double t) {
  GridFunction d = w0;
  d.argmax_map.clear();
  for (std::int64_t k = 0; k < d.size(); ++k) {
    double w = w0.values[k];
    d.values[k] = std::isfinite(w) ? w * (1.0 - t * v.values[k]) : kInf;
  }
  return d;
}

bool admissible(const GridFunction& w0, const GridFunction& v, double t,
                const DualFrameCheck& chk) {
  GridFunction d = dual_cauchy_frame(w0, v, t);
  double maxv = 0;
  for (double w : d.values) {
    if (!std::isfinite(w)) continue;
    if (w < -chk.value_tol) return false;
    maxv = std::max(maxv, w);
  }
  if (maxv <= chk.degeneracy_floor) return false;
  return d.midpoint_convexity_violation() <= chk.convexity_tol;
}

}  // namespace

MACauchyResult solve_ma_cauchy(const GridFunction& u0, const GridFunction& du0,
                               const std::vector<double>& times,
                               const PdeOptions& opts) {
  check_times(times);
  advise_smooth_superlinear(u0, opts, "u0");
  Vec origin = Vec::zero(u0.dim);
  if (std::abs(du0.evaluate(origin)) > u0.eps_zero())
    throw Error("du0 must vanish at the origin");

  DualGrid dual = default_dual_grid(u0);
  DualGrid primal = dual_grid_of(u0);
  TransformResult w0 = polar(u0, dual, opts.transform);

  // Velocity ratio on the dual lattice, read off the attaining nodes.
  GridFunction v = w0.output;
  v.argmax_map.clear();
  v.convexified = false;
  const double eps = u0.eps_zero();
  for (std::int64_t k = 0; k < v.size(); ++k) {
    double w = w0.output.values[k];
    std::int64_t xk = w0.output.argmax_map[k];
    if (!std::isfinite(w) || xk < 0 || !(u0.values[xk] > eps)) {
      v.values[k] = 0;
      continue;
    }
    v.values[k] = du0.values[xk] / u0.values[xk];
  }
  v.values[v.origin_flat()] = 0;

  DualFrameCheck chk;
  double maxw = w0.output.max_finite_value();
  chk.value_tol = 1e-9 * (1.0 + maxw);
  chk.degeneracy_floor = 1e-6 * (1.0 + maxw);
  chk.convexity_tol =
      10.0 * w0.output.midpoint_convexity_violation() + 1e-8 * (1.0 + maxw);

  MACauchyResult res;
  res.path.provenance = ProvenanceKind::MACauchy;
  res.path.provenance_detail = "ma_cauchy";
  res.data.v = v;

  double last_good = 0, first_bad = -1;
  for (double t : times) {
    if (!admissible(w0.output, v, t, chk)) {
      res.data.truncated = true;
      if (first_bad < 0) first_bad = t;
      continue;
    }
    if (res.data.truncated) continue;  // times past the horizon are dropped
    last_good = std::max(last_good, t);
    GridFunction dual_frame = dual_cauchy_frame(w0.output, v, t);
    for (double& w : dual_frame.values)
      if (std::isfinite(w) && w < 0) w = 0;  // tolerance-scale negatives only
    TransformResult frame = polar(dual_frame, primal, opts.transform);
    FrameDiagnostics d;
    d.boundary_fraction = frame.boundary_attainment_fraction;
    d.convexity_violation = frame.output.midpoint_convexity_violation();
    res.path.times.push_back(t);
    res.path.frames.push_back(std::move(frame.output));
    res.path.diagnostics.push_back(d);
  }

  if (!res.data.truncated) {
    res.data.t_est = times.back();
  } else {
    // Refine the horizon between the last admissible and first refused time.
    double lo = last_good, hi = first_bad;
    for (int it = 0; it < 50 && hi - lo > 1e-4 * (1.0 + hi); ++it) {
      double mid = 0.5 * (lo + hi);
      (admissible(w0.output, v, mid, chk) ? lo : hi) = mid;
    }
    res.data.t_est = lo;
  }
  if (res.path.frames.empty())
    throw BeyondMaximalTimeError("no requested time is admissible");
  return res;
}

}  // namespace polarcvx
