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

#include "polarcvx/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace polarcvx {

namespace {

constexpr double kZeroEps = 1e-12;

// Perturbation probe: is x surrounded by (near-)zero values of f?
bool interior_of_zero_set(const std::function<double(const Vec&)>& value,
                          const Vec& x, double h, double eps) {
  for (int ax = 0; ax < x.n; ++ax) {
    for (double s : {-h, h}) {
      Vec z = x;
      z[ax] += s;
      double v;
      try {
        v = value(z);
      } catch (const OutOfBoxError&) {
        continue;
      }
      if (v > eps) return false;
    }
  }
  return true;
}

PolarGradientResult polar_gradient_impl(
    const std::function<double(const Vec&)>& value, double fx, const Vec& g,
    const Vec& x, double eps, double probe_h) {
  PolarGradientResult r;
  if (fx <= eps) {
    r.kind = PolarGradientKind::Empty;
    r.reason = interior_of_zero_set(value, x, probe_h, eps)
                   ? PolarGradientReason::InteriorZeroSet
                   : PolarGradientReason::BoundaryZeroSet;
    return r;
  }
  double s = dot(x, g) - fx;
  if (s <= eps) {
    r.kind = PolarGradientKind::Empty;
    r.reason = PolarGradientReason::NormLikeNoAttainment;
    return r;
  }
  r.kind = PolarGradientKind::Point;
  r.reason = PolarGradientReason::Regular;
  r.y = (1.0 / s) * g;
  r.polar_value = 1.0 / s;
  return r;
}

}  // namespace

PolarGradientResult polar_gradient(const AnalyticConvexFunction& f,
                                   const Vec& x) {
  double fx = f.evaluate(x);
  if (std::isinf(fx)) throw NotDifferentiableError("x outside dom(f)");
  auto value = [&f](const Vec& z) { return f.evaluate(z); };
  if (fx <= kZeroEps)
    return polar_gradient_impl(value, fx, Vec::zero(f.dim()), x, kZeroEps,
                               1e-6 * (1.0 + norm2(x)));
  Vec g = f.gradient(x);
  return polar_gradient_impl(value, fx, g, x, kZeroEps,
                             1e-6 * (1.0 + norm2(x)));
}

PolarGradientResult polar_gradient(const GridFunction& f, const Vec& x) {
  double fx = f.evaluate(x);
  if (std::isinf(fx)) throw NotDifferentiableError("x outside dom(f)");
  double eps = f.eps_zero();
  auto value = [&f](const Vec& z) { return f.evaluate(z); };
  if (fx <= eps)
    return polar_gradient_impl(value, fx, Vec::zero(f.dim), x, eps,
                               f.max_cell());
  Vec g;
  try {
    g = grid_gradient(f, x);
  } catch (const NotDifferentiableError&) {
    if (f.dim != 1) throw;
    auto sub = polar_subdifferential_1d(f, x[0]);
    PolarGradientResult r;
    if (sub.empty) {
      r.kind = PolarGradientKind::Empty;
      r.reason = PolarGradientReason::NormLikeNoAttainment;
    } else {
      r.kind = PolarGradientKind::Interval1D;
      r.reason = PolarGradientReason::Kink1D;
      r.interval_lo = sub.y_lo;
      r.interval_hi = sub.y_hi;
    }
    return r;
  }
  return polar_gradient_impl(value, fx, g, x, eps, f.max_cell());
}

Subdifferential1D polar_subdifferential_1d(const GridFunction& f, double x,
                                           const GridFunction& pf) {
  if (f.dim != 1 || pf.dim != 1) throw Error("1D only");
  Vec xv{x};
  double fx = f.evaluate(xv);
  if (std::isinf(fx)) throw Error("f(x) must be finite");
  const double cell = pf.cell(0);
  Subdifferential1D out;
  for (std::int64_t j = 0; j < pf.size(); ++j) {
    double w = pf.values[j];
    if (std::isinf(w)) continue;
    double y = pf.node(j)[0];
    // Local slope of Pf for the first-order quantization tolerance.
    double slope = 0;
    if (j > 0 && std::isfinite(pf.values[j - 1]))
      slope = std::max(slope, std::abs(w - pf.values[j - 1]) / cell);
    if (j + 1 < pf.size() && std::isfinite(pf.values[j + 1]))
      slope = std::max(slope, std::abs(pf.values[j + 1] - w) / cell);
    double tol = cell * (std::abs(x) + fx * slope) + 1e-9;
    if (std::abs(w * fx - (x * y - 1.0)) <= tol && w > 0) {
      if (out.empty) {
        out.empty = false;
        out.y_lo = out.y_hi = y;
      } else {
        out.y_lo = std::min(out.y_lo, y);
        out.y_hi = std::max(out.y_hi, y);
      }
    }
  }
  return out;
}

Subdifferential1D polar_subdifferential_1d(const GridFunction& f, double x) {
  TransformResult pf = polar(f, default_dual_grid(f));
  return polar_subdifferential_1d(f, x, pf.output);
}

namespace {

Mat transfer_inverse_hessian(double fx, double pv, const Vec& x, const Vec& y,
                             const Mat& hess_f) {
  // (hess of Pf)^{-1} = f(x) Pf(y) (I - x y)^T hess_f (I - x y), with x a
  // column and y a row.
  Mat m = Mat::identity(x.n) - outer(x, y);
  return (fx * pv) * matmul(transpose(m), matmul(hess_f, m));
}

double det_identity_residual(const Mat& hf, const Mat& hp, double fx,
                             double pv, int n) {
  return std::abs(det(hf) * det(hp) * std::pow(fx * pv, n + 2) - 1.0);
}

}  // namespace

HessianTransfer hessian_of_polar(const AnalyticConvexFunction& f,
                                 const Vec& x) {
  auto pg = polar_gradient(f, x);
  if (pg.kind != PolarGradientKind::Point)
    throw EmptyPolarGradientError("polar gradient is not a single point");
  HessianTransfer t;
  t.x = x;
  t.y = pg.y;
  t.f_value = f.evaluate(x);
  t.polar_value = pg.polar_value;
  t.hess_f = f.hessian(x);
  if (std::abs(det(t.hess_f)) < 1e-300)
    throw SingularHessianError("hess f singular at x");
  t.hess_j = transfer_inverse_hessian(t.f_value, t.polar_value, x, t.y,
                                      t.hess_f);
  t.hess_polar = inverse(t.hess_j);
  t.det_residual = det_identity_residual(t.hess_f, t.hess_polar, t.f_value,
                                         t.polar_value, x.n);
  return t;
}

HessianTransfer hessian_of_polar(const GridFunction& f, const GridFunction& pf,
                                 const Vec& x) {
  auto pg = polar_gradient(f, x);
  if (pg.kind != PolarGradientKind::Point)
    throw EmptyPolarGradientError("polar gradient is not a single point");
  HessianTransfer t;
  t.x = x;
  t.y = pg.y;
  t.f_value = f.evaluate(x);
  t.polar_value = pg.polar_value;
  t.hess_f = grid_hessian(f, x);
  if (std::abs(det(t.hess_f)) < 1e-300)
    throw SingularHessianError("hess f singular at x");
  t.hess_polar = grid_hessian(pf, t.y);
  t.hess_j = inverse(t.hess_polar);
  t.det_residual = det_identity_residual(t.hess_f, t.hess_polar, t.f_value,
                                         t.polar_value, x.n);
  return t;
}

HessianTransfer hessian_of_polar(const GridFunction& f, const Vec& x) {
  TransformResult pf = polar(f, default_dual_grid(f));
  return hessian_of_polar(f, pf.output, x);
}

Vec polar_gradient_of_sum(const AnalyticConvexFunction& f,
                          const AnalyticConvexFunction& g, const Vec& x) {
  auto rf = polar_gradient(f, x);
  auto rg = polar_gradient(g, x);
  if (rf.kind != PolarGradientKind::Point ||
      rg.kind != PolarGradientKind::Point)
    throw EmptyPolarGradientError("both summands must be polar differentiable");
  // Weight on each polar gradient is the other function's polar value.
  double denom = rf.polar_value + rg.polar_value;
  return (rg.polar_value / denom) * rf.y + (rf.polar_value / denom) * rg.y;
}

// ---------------------------------------------------------------------------
// Analytic-path helpers.

namespace {

// Lattice of scan points in [-r, r]^n, resolution capped by dimension.
int effective_scan(int dim, int scan) {
  if (dim == 1) return std::max(scan, 11);
  if (dim == 2) return std::min(std::max(scan, 11), 121);
  return 41;
}

template <typename Score>
Vec best_scan_point(int dim, double radius, int scan, Score&& score) {
  int n = effective_scan(dim, scan);
  Vec best = Vec::zero(dim);
  double best_v = -kInf;
  std::array<int, kMaxDim> idx{};
  std::int64_t total = 1;
  for (int i = 0; i < dim; ++i) total *= n;
  for (std::int64_t k = 0; k < total; ++k) {
    std::int64_t rem = k;
    Vec x(dim);
    for (int ax = dim - 1; ax >= 0; --ax) {
      idx[ax] = static_cast<int>(rem % n);
      rem /= n;
      x[ax] = -radius + 2.0 * radius * idx[ax] / (n - 1);
    }
    double v = score(x);
    if (v > best_v) {
      best_v = v;
      best = x;
    }
  }
  return best;
}

}  // namespace

Vec invert_gradient(const AnalyticConvexFunction& f, const Vec& y,
                    double radius, int scan) {
  auto score = [&](const Vec& x) {
    try {
      Vec g = f.gradient(x);
      return -norm2(g - y);
    } catch (const Error&) {
      return -kInf;
    }
  };
  Vec x = best_scan_point(f.dim(), radius, scan, score);
  for (int it = 0; it < 60; ++it) {
    Vec g;
    Mat h;
    try {
      g = f.gradient(x);
      h = f.hessian(x);
    } catch (const Error&) {
      break;
    }
    Vec step = solve(h, g - y);
    Vec xn = x - step;
    x = xn;
    if (norm2(step) < 1e-14 * (1.0 + norm2(x))) break;
  }
  return x;
}

double legendre_value(const AnalyticConvexFunction& f, const Vec& y,
                      double radius, int scan) {
  Vec x = invert_gradient(f, y, radius, scan);
  return dot(x, y) - f.evaluate(x);
}

double polar_value(const AnalyticConvexFunction& f, const Vec& y,
                   double radius, int scan, Vec* arg) {
  if (norm2(y) < 1e-300) {
    if (arg) *arg = Vec::zero(f.dim());
    return 0.0;
  }
  if (auto pf = polar_analytic(f)) {
    double v = pf->evaluate(y);
    if (arg) {
      // Recover the maximizer from the polar gradient inverse relation:
      // grad Pf(y) = x / f(x) and Pf(y) f(x) = <x,y> - 1.
      try {
        Vec gp = pf->gradient(y);
        // f(x) solves <x,y> - 1 = v f(x) with x = f(x) gp:
        // f(x) (<gp,y> - v) = 1.
        double fx = 1.0 / (dot(gp, y) - v);
        *arg = fx * gp;
      } catch (const Error&) {
        *arg = Vec::zero(f.dim());
      }
    }
    return v;
  }
  auto score = [&](const Vec& x) {
    double fx = f.evaluate(x);
    if (!std::isfinite(fx) || fx <= kZeroEps) return -kInf;
    return (dot(x, y) - 1.0) / fx;
  };
  Vec x = best_scan_point(f.dim(), radius, scan, score);
  double best = score(x);
  if (best <= 0.0) {
    if (arg) *arg = Vec::zero(f.dim());
    return 0.0;
  }
  // Newton on the stationarity system y f(x) = (<x,y> - 1) grad f(x).
  for (int it = 0; it < 60; ++it) {
    double fx = f.evaluate(x);
    Vec g;
    Mat h;
    try {
      g = f.gradient(x);
      h = f.hessian(x);
    } catch (const Error&) {
      break;
    }
    double s = dot(x, y) - 1.0;
    Vec G(x.n);
    for (int i = 0; i < x.n; ++i) G[i] = y[i] * fx - s * g[i];
    Mat J(x.n);
    for (int i = 0; i < x.n; ++i)
      for (int j = 0; j < x.n; ++j)
        J(i, j) = y[i] * g[j] - y[j] * g[i] - s * h(i, j);
    Vec step;
    try {
      step = solve(J, G);
    } catch (const std::runtime_error&) {
      break;
    }
    Vec xn = x - step;
    if (score(xn) < best - 1e-12) break;  // keep the scan point if worse
    x = xn;
    best = score(x);
    if (norm2(step) < 1e-14 * (1.0 + norm2(x))) break;
  }
  if (arg) *arg = x;
  return std::max(0.0, best);
}

// ---------------------------------------------------------------------------
// Analytic-path variation residuals.

namespace {

double time_derivative(const std::function<double(double)>& F, double t,
                       double dt, bool richardson) {
  auto central = [&](double h) { return (F(t + h) - F(t - h)) / (2.0 * h); };
  if (!richardson) return central(dt);
  return (4.0 * central(dt / 2.0) - central(dt)) / 3.0;
}

double time_second_derivative(const std::function<double(double)>& F, double t,
                              double dt, bool richardson) {
  auto central = [&](double h) {
    return (F(t + h) - 2.0 * F(t) + F(t - h)) / (h * h);
  };
  if (!richardson) return central(dt);
  return (16.0 * central(dt / 2.0) - central(dt)) / 15.0;
}

Vec grad_time_derivative(const AnalyticFamily& fam, double t, const Vec& x,
                         bool of_log) {
  auto at = [&](double s) {
    Vec g = fam.at(s).gradient(x);
    if (of_log) g = (1.0 / fam.at(s).evaluate(x)) * g;
    return g;
  };
  Vec gp = at(t + fam.dt), gm = at(t - fam.dt);
  return (1.0 / (2.0 * fam.dt)) * (gp - gm);
}

}  // namespace

double legendre_first_variation_residual(const AnalyticFamily& fam, double t,
                                         const Vec& y) {
  AnalyticConvexFunction ut = fam.at(t);
  Vec x = invert_gradient(ut, y, fam.radius, fam.scan);
  double wdot = time_derivative(
      [&](double s) { return legendre_value(fam.at(s), y, fam.radius, fam.scan); },
      t, fam.dt, fam.richardson);
  double udot = time_derivative(
      [&](double s) { return fam.at(s).evaluate(x); }, t, fam.dt,
      fam.richardson);
  return std::abs(wdot + udot);
}

double polar_first_variation_residual(const AnalyticFamily& fam, double t,
                                      const Vec& y) {
  Vec x;
  double w = polar_value(fam.at(t), y, fam.radius, fam.scan, &x);
  if (w <= 0) throw EmptyPolarGradientError("polar value vanishes at y");
  double lwdot = time_derivative(
      [&](double s) {
        return std::log(polar_value(fam.at(s), y, fam.radius, fam.scan));
      },
      t, fam.dt, fam.richardson);
  double ludot = time_derivative(
      [&](double s) { return std::log(fam.at(s).evaluate(x)); }, t, fam.dt,
      fam.richardson);
  return std::abs(lwdot + ludot);
}

SecondVariationResiduals second_variation_residuals(const AnalyticFamily& fam,
                                                    double t, const Vec& y) {
  SecondVariationResiduals res;
  AnalyticConvexFunction ut = fam.at(t);
  const int n = ut.dim();

  // Legendre form, evaluated at the gradient-inverse point.
  {
    Vec x = invert_gradient(ut, y, fam.radius, fam.scan);
    double wdd = time_second_derivative(
        [&](double s) {
          return legendre_value(fam.at(s), y, fam.radius, fam.scan);
        },
        t, fam.dt, fam.richardson);
    double udd = time_second_derivative(
        [&](double s) { return fam.at(s).evaluate(x); }, t, fam.dt,
        fam.richardson);
    Vec a = grad_time_derivative(fam, t, x, /*of_log=*/false);
    Mat h = ut.hessian(x);
    res.legendre = std::abs(wdd + udd - dot(a, solve(h, a)));
  }

  // Polar forms, evaluated at the polar-sup maximizer.
  Vec x;
  double w = polar_value(ut, y, fam.radius, fam.scan, &x);
  if (w <= 0) throw EmptyPolarGradientError("polar value vanishes at y");
  double u0 = ut.evaluate(x);
  Mat h = ut.hessian(x);
  Vec a = grad_time_derivative(fam, t, x, /*of_log=*/true);
  double term = u0 * dot(a, solve(h, a));

  double lwdd = time_second_derivative(
      [&](double s) {
        return std::log(polar_value(fam.at(s), y, fam.radius, fam.scan));
      },
      t, fam.dt, fam.richardson);
  double ludd = time_second_derivative(
      [&](double s) { return std::log(fam.at(s).evaluate(x)); }, t, fam.dt,
      fam.richardson);
  res.polar_matrix = std::abs(lwdd + ludd - term);

  // Bordered-determinant form: same identity written through the
  // (n+1)x(n+1) block determinant, normalized by det(hess u).
  {
    double wdd = time_second_derivative(
        [&](double s) { return polar_value(fam.at(s), y, fam.radius, fam.scan); },
        t, fam.dt, fam.richardson);
    double inv_u_dd = time_second_derivative(
        [&](double s) { return 1.0 / fam.at(s).evaluate(x); }, t, fam.dt,
        fam.richardson);
    std::array<double, 16> b{};
    b[0] = -u0 * u0 * inv_u_dd;
    for (int i = 0; i < n; ++i) {
      b[0 * 4 + (i + 1)] = u0 * a[i];
      b[(i + 1) * 4 + 0] = u0 * a[i];
      for (int j = 0; j < n; ++j) b[(i + 1) * 4 + (j + 1)] = h(i, j);
    }
    double detb = det_up_to_4(b, n + 1);
    res.bordered_det = std::abs(wdd / w + detb / (u0 * det(h)));
  }

  // Symmetric form: the quadratic-form term rewritten through the dual-side
  // log-gradient b and the rank-one coupling of the two gradients.
  {
    // b = spatial gradient (in y) of d/dt log w.
    Vec b(n);
    for (int ax = 0; ax < n; ++ax) {
      double hstep = 1e-4 * (1.0 + std::abs(y[ax]));
      auto lw_dot_at = [&](const Vec& yy) {
        return time_derivative(
            [&](double s) {
              return std::log(polar_value(fam.at(s), yy, fam.radius, fam.scan));
            },
            t, fam.dt, fam.richardson);
      };
      Vec yp = y, ym = y;
      yp[ax] += hstep;
      ym[ax] -= hstep;
      b[ax] = (lw_dot_at(yp) - lw_dot_at(ym)) / (2.0 * hstep);
    }
    Vec grad_u = ut.gradient(x);       // equals y / w at the linked points
    Vec grad_w = (1.0 / u0) * x;       // grad Pf(y) = x / f(x)
    Mat coupling = outer(grad_u, grad_w) - Mat::identity(n);
    double term_b = u0 * w * dot(b, matvec(inverse(coupling), a));
    res.symmetric_form = std::abs(term - term_b);
  }
  return res;
}

double j_variation_residual(const AnalyticFamily& fam, double t, const Vec& x) {
  AnalyticConvexFunction ut = fam.at(t);
  double ux = ut.evaluate(x);
  if (ux <= kZeroEps) throw Error("u(t,x) must be positive");
  Vec z = (1.0 / ux) * x;
  // J(u_s)(z) = 1/lambda where lambda solves lambda = u_s(lambda z).
  auto jval = [&](double s) {
    AnalyticConvexFunction us = fam.at(s);
    auto g = [&](double lam) { return us.evaluate(lam * z) - lam; };
    double lo = 1e-12, hi = 1.0;
    while (g(hi) < 0) {
      hi *= 2.0;
      if (hi > 1e12) throw Error("no epigraph-ray crossing");
    }
    while (g(lo) > 0) lo /= 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (g(mid) < 0 ? lo : hi) = mid;
    }
    return 1.0 / (0.5 * (lo + hi));
  };
  double wdot = time_derivative(jval, t, fam.dt, fam.richardson);
  double udot = time_derivative(
      [&](double s) { return fam.at(s).evaluate(x); }, t, fam.dt,
      fam.richardson);
  Vec g = ut.gradient(x);
  double lstar = dot(x, g) - ux;  // u_t^*(grad u_t(x)), exact envelope value
  if (lstar <= kZeroEps) throw EmptyPolarGradientError("conjugate value vanishes");
  return std::abs(wdot - udot / (ux * lstar));
}

// ---------------------------------------------------------------------------
// Grid-path variation residuals.

namespace {

void check_interior_frame(const GridFamily& fam, int i) {
  if (i < 1 || i + 1 >= static_cast<int>(fam.frames.size()))
    throw FrameOutOfRangeError("interior frame index required");
}

double frame_dt(const GridFamily& fam) {
  if (fam.times.size() < 2) throw FrameOutOfRangeError("need >= 2 frames");
  return fam.times[1] - fam.times[0];
}

// Nodewise (log f_{i+1} - log f_{i-1}) / (2 dt); +inf where undefined.
GridFunction log_rate_field(const GridFamily& fam, int i) {
  GridFunction q = fam.frames[i];
  q.argmax_map.clear();
  double dt = frame_dt(fam);
  for (std::int64_t k = 0; k < q.size(); ++k) {
    double vp = fam.frames[i + 1].values[k];
    double vm = fam.frames[i - 1].values[k];
    q.values[k] = (vp > 0 && vm > 0 && std::isfinite(vp) && std::isfinite(vm))
                      ? (std::log(vp) - std::log(vm)) / (2.0 * dt)
                      : kInf;
  }
  return q;
}

GridFunction rate_field(const GridFamily& fam, int i) {
  GridFunction q = fam.frames[i];
  q.argmax_map.clear();
  double dt = frame_dt(fam);
  for (std::int64_t k = 0; k < q.size(); ++k) {
    double vp = fam.frames[i + 1].values[k];
    double vm = fam.frames[i - 1].values[k];
    q.values[k] = (std::isfinite(vp) && std::isfinite(vm))
                      ? (vp - vm) / (2.0 * dt)
                      : kInf;
  }
  return q;
}

// grid_gradient tolerates sign-mixed fields but not +inf stencils; the rate
// fields above are finite on the interior where the residuals are evaluated.
std::int64_t nearest_node(const GridFunction& g, const Vec& y) {
  std::array<int, kMaxDim> idx{};
  for (int ax = 0; ax < g.dim; ++ax) {
    double t = (y[ax] - g.lo[ax]) / g.cell(ax);
    int i = static_cast<int>(std::lround(t));
    idx[ax] = std::clamp(i, 0, g.shape[ax] - 1);
  }
  return g.flat_index(idx);
}

}  // namespace

double legendre_first_variation_residual(const GridFamily& fam, int i,
                                         const Vec& y) {
  check_interior_frame(fam, i);
  double dt = frame_dt(fam);
  DualGrid dual = default_dual_grid(fam.frames[i]);
  TransformResult w0 = legendre(fam.frames[i], dual);
  std::int64_t j = nearest_node(w0.output, y);
  Vec yn = w0.output.node(j);
  TransformResult wp = legendre(fam.frames[i + 1], dual);
  TransformResult wm = legendre(fam.frames[i - 1], dual);
  double wdot = (wp.output.values[j] - wm.output.values[j]) / (2.0 * dt);
  // Discrete gradient inverse: the node where the conjugate sup is attained.
  std::int64_t xk = w0.output.argmax_map[j];
  (void)yn;
  double udot =
      (fam.frames[i + 1].values[xk] - fam.frames[i - 1].values[xk]) / (2.0 * dt);
  return std::abs(wdot + udot);
}

double polar_first_variation_residual(const GridFamily& fam, int i,
                                      const Vec& y) {
  check_interior_frame(fam, i);
  double dt = frame_dt(fam);
  DualGrid dual = default_dual_grid(fam.frames[i]);
  TransformResult w0 = polar(fam.frames[i], dual);
  std::int64_t j = nearest_node(w0.output, y);
  if (!(w0.output.values[j] > 0) || !std::isfinite(w0.output.values[j]))
    throw RayLinearAtPointError("polar frame vanishes or is infinite at y");
  TransformResult wp = polar(fam.frames[i + 1], dual);
  TransformResult wm = polar(fam.frames[i - 1], dual);
  double lwdot =
      (std::log(wp.output.values[j]) - std::log(wm.output.values[j])) /
      (2.0 * dt);
  std::int64_t xk = w0.output.argmax_map[j];
  if (xk < 0) throw EmptyPolarGradientError("no attained maximizer at y");
  double ludot = (std::log(fam.frames[i + 1].values[xk]) -
                  std::log(fam.frames[i - 1].values[xk])) /
                 (2.0 * dt);
  return std::abs(lwdot + ludot);
}

SecondVariationResiduals second_variation_residuals(const GridFamily& fam,
                                                    int i, const Vec& y) {
  check_interior_frame(fam, i);
  SecondVariationResiduals res;
  double dt = frame_dt(fam);
  const GridFunction& u = fam.frames[i];
  const int n = u.dim;
  DualGrid dual = default_dual_grid(u);

  // Legendre form.
  {
    TransformResult w0 = legendre(u, dual);
    std::int64_t j = nearest_node(w0.output, y);
    TransformResult wp = legendre(fam.frames[i + 1], dual);
    TransformResult wm = legendre(fam.frames[i - 1], dual);
    double wdd = (wp.output.values[j] - 2.0 * w0.output.values[j] +
                  wm.output.values[j]) /
                 (dt * dt);
    std::int64_t xk = w0.output.argmax_map[j];
    Vec x = u.node(xk);
    double udd = (fam.frames[i + 1].values[xk] - 2.0 * u.values[xk] +
                  fam.frames[i - 1].values[xk]) /
                 (dt * dt);
    GridFunction qd = rate_field(fam, i);
    Vec a = grid_gradient(qd, x);
    Mat h = grid_hessian(u, x);
    res.legendre = std::abs(wdd + udd - dot(a, solve(h, a)));
  }

  // Polar forms.
  TransformResult w0 = polar(u, dual);
  std::int64_t j = nearest_node(w0.output, y);
  double w = w0.output.values[j];
  if (!(w > 0) || !std::isfinite(w))
    throw RayLinearAtPointError("polar frame vanishes or is infinite at y");
  TransformResult wp = polar(fam.frames[i + 1], dual);
  TransformResult wm = polar(fam.frames[i - 1], dual);
  std::int64_t xk = w0.output.argmax_map[j];
  if (xk < 0) throw EmptyPolarGradientError("no attained maximizer at y");
  Vec x = u.node(xk);
  double u0 = u.values[xk];
  Mat h = grid_hessian(u, x);
  GridFunction ql = log_rate_field(fam, i);
  Vec a = grid_gradient(ql, x);
  double term = u0 * dot(a, solve(h, a));

  double lwdd = (std::log(wp.output.values[j]) - 2.0 * std::log(w) +
                 std::log(wm.output.values[j])) /
                (dt * dt);
  double ludd = (std::log(fam.frames[i + 1].values[xk]) -
                 2.0 * std::log(u0) +
                 std::log(fam.frames[i - 1].values[xk])) /
                (dt * dt);
  res.polar_matrix = std::abs(lwdd + ludd - term);

  {
    double wdd = (wp.output.values[j] - 2.0 * w + wm.output.values[j]) /
                 (dt * dt);
    double inv_u_dd = (1.0 / fam.frames[i + 1].values[xk] - 2.0 / u0 +
                       1.0 / fam.frames[i - 1].values[xk]) /
                      (dt * dt);
    std::array<double, 16> b{};
    b[0] = -u0 * u0 * inv_u_dd;
    for (int r = 0; r < n; ++r) {
      b[r + 1] = u0 * a[r];
      b[(r + 1) * 4] = u0 * a[r];
      for (int c = 0; c < n; ++c) b[(r + 1) * 4 + (c + 1)] = h(r, c);
    }
    double detb = det_up_to_4(b, n + 1);
    res.bordered_det = std::abs(wdd / w + detb / (u0 * det(h)));
  }

  {
    GridFamily wfam;
    wfam.times = fam.times;
    wfam.frames = {wm.output, w0.output, wp.output};
    GridFamily wview{{fam.times[i - 1], fam.times[i], fam.times[i + 1]},
                     wfam.frames};
    GridFunction bfield = log_rate_field(wview, 1);
    Vec yn = w0.output.node(j);
    Vec b = grid_gradient(bfield, yn);
    Vec grad_u = grid_gradient(u, x);
    Vec grad_w = grid_gradient(w0.output, yn);
    Mat coupling = outer(grad_u, grad_w) - Mat::identity(n);
    double term_b = u0 * w * dot(b, matvec(inverse(coupling), a));
    res.symmetric_form = std::abs(term - term_b);
  }
  return res;
}

double j_variation_residual(const GridFamily& fam, int i, const Vec& x) {
  check_interior_frame(fam, i);
  double dt = frame_dt(fam);
  const GridFunction& u = fam.frames[i];
  double ux = u.evaluate(x);
  if (!(ux > 0) || !std::isfinite(ux)) throw Error("u(t,x) must be positive");
  Vec z = (1.0 / ux) * x;
  JResult jp = j_transform(fam.frames[i + 1], JRoute::Composition);
  JResult jm = j_transform(fam.frames[i - 1], JRoute::Composition);
  double wdot = (jp.output.evaluate(z) - jm.output.evaluate(z)) / (2.0 * dt);
  Vec g = grid_gradient(u, x);
  double lstar = dot(x, g) - ux;
  if (lstar <= u.eps_zero())
    throw EmptyPolarGradientError("conjugate value vanishes");
  double udot =
      (fam.frames[i + 1].evaluate(x) - fam.frames[i - 1].evaluate(x)) /
      (2.0 * dt);
  return std::abs(wdot - udot / (ux * lstar));
}

}  // namespace polarcvx
