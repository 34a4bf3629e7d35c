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

#include "polarcvx/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "polarcvx/calculus.hpp"
#include "polarcvx/ginfconv.hpp"
#include "polarcvx/grid.hpp"
#include "polarcvx/pde.hpp"
#include "polarcvx/transforms.hpp"

namespace polarcvx {

namespace {

using Clock = std::chrono::steady_clock;

struct Stopwatch {
  Clock::time_point t0 = Clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }
};

void add(std::vector<CheckResult>& rows, const std::string& suite,
         const std::string& name, double measured, double tol,
         double secs = 0) {
  rows.push_back({suite, name, measured, tol, measured <= tol, secs});
}

GridFunction sample_box(const AnalyticConvexFunction& f, double r, int n) {
  return f.dim() == 1 ? sample_1d(f, -r, r, n) : sample_2d(f, -r, r, n);
}

// Max |P(P f) - f| over lattice nodes in the central half of the box. The
// dual box is fixed by the caller so refining n also refines the dual cell.
double envelope_error_central(const AnalyticConvexFunction& f, int n,
                              DualGrid dual) {
  GridFunction g = sample_box(f, 2.0, n);
  for (int ax = 0; ax < g.dim; ++ax) dual.shape[ax] = n;
  GridFunction env = polar(polar(g, dual).output, dual_grid_of(g)).output;
  double err = 0;
  for (std::int64_t k = 0; k < g.size(); ++k) {
    Vec x = g.node(k);
    bool central = true;
    for (int ax = 0; ax < g.dim; ++ax)
      if (std::abs(x[ax]) > 1.0 + 1e-12) central = false;
    if (!central) continue;
    err = std::max(err, std::abs(env.values[k] - g.values[k]));
  }
  return err;
}

void involution_suite(std::vector<CheckResult>& rows) {
  Stopwatch total;
  struct Case {
    const char* name;
    AnalyticConvexFunction f;
    int n;
    // The l1 square is dual-cell-limited, so the tighter gradient-range box
    // buys resolution at equal node count. The quadratics need the wide
    // reciprocal box to keep the truncation error below the cell error.
    bool slope_box;
  };
  Mat eye2 = Mat::identity(2);
  const Case cases[] = {
      {"xsq_1d", AnalyticConvexFunction::power_norm(1, 2, 2), 257, false},
      {"l1sq_2d", AnalyticConvexFunction::power_norm(2, 1, 2), 129, true},
      {"quad_2d", AnalyticConvexFunction::quadratic(eye2), 129, false},
  };
  for (const auto& c : cases) {
    Stopwatch sw;
    GridFunction base = sample_box(c.f, 2.0, c.n);
    DualGrid d =
        c.slope_box ? slope_dual_grid(base, 2.0, 1) : default_dual_grid(base);
    double e1 = envelope_error_central(c.f, c.n, d);
    double e2 = envelope_error_central(c.f, 2 * c.n - 1, d);
    add(rows, "involution", std::string(c.name) + "_error", e1, 5e-2,
        sw.elapsed());
    add(rows, "involution", std::string(c.name) + "_refine_ratio", e2 / e1,
        1.0 / 1.5);
  }
  add(rows, "involution", "runtime_seconds", total.elapsed(), 10.0);

  // Dual norms: polarity of the 1-norm against the max norm.
  {
    Stopwatch sw;
    AnalyticConvexFunction l1 = AnalyticConvexFunction::power_norm(2, 1, 1);
    GridFunction g = sample_2d(l1, -200, 200, 129);
    TransformResult pf = polar(g, default_dual_grid(g));
    double err = 0;
    for (std::int64_t k = 0; k < pf.output.size(); ++k) {
      if (pf.output.on_boundary(k)) continue;
      Vec y = pf.output.node(k);
      if (std::isinf(pf.output.values[k])) {
        err = kInf;
        continue;
      }
      err = std::max(err, std::abs(pf.output.values[k] - norm_p(y, kInf)));
    }
    add(rows, "involution", "l1_dual_norm_grid", err, 1e-2, sw.elapsed());

    auto pa = polar_analytic(l1);
    double aerr = pa ? 0.0 : kInf;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int it = 0; pa && it < 50; ++it) {
      Vec y{u(rng), u(rng)};
      aerr = std::max(aerr, std::abs(pa->evaluate(y) - norm_p(y, kInf)));
    }
    add(rows, "involution", "l1_dual_norm_analytic", aerr, 1e-12);
  }
}

void jdual_suite(std::vector<CheckResult>& rows) {
  for (double q : {2.0, 3.0, 4.0}) {
    Stopwatch sw;
    AnalyticConvexFunction f = AnalyticConvexFunction::power_norm(1, 2, q);
    GridFunction g = sample_1d(f, -2, 2, 1025);
    JResult jc = j_transform(g, JRoute::Composition);
    JResult jf = j_transform(g, JRoute::FractionalMap);
    double id_err = 0, cross = 0;
    for (int k = 0; k < 20; ++k) {
      double x = 0.85 + (1.5 - 0.85) * k / 19.0;
      double fx = f.evaluate(Vec{x});
      Vec z{x / fx};
      double jcz = jc.output.evaluate(z);
      id_err = std::max(id_err, std::abs(fx * jcz - 1.0));
      cross = std::max(cross, std::abs(jcz - jf.output.evaluate(z)));
    }
    std::ostringstream tag;
    tag << "t_pow_" << static_cast<int>(q);
    add(rows, "jdual", tag.str() + "_identity", id_err, 1e-3, sw.elapsed());
    add(rows, "jdual", tag.str() + "_route_agreement", cross, 2e-3);
  }
}

void hessian_suite(std::vector<CheckResult>& rows) {
  std::mt19937 rng(17);
  // Analytic transfer identity, 1D and 2D quadratics.
  {
    Stopwatch sw;
    Mat a1(1);
    a1(0, 0) = 2.0;
    AnalyticConvexFunction f1 = AnalyticConvexFunction::quadratic(a1);
    std::uniform_real_distribution<double> u(0.2, 1.8);
    std::bernoulli_distribution sign(0.5);
    double err = 0;
    for (int it = 0; it < 20; ++it) {
      Vec x{(sign(rng) ? 1.0 : -1.0) * u(rng)};
      err = std::max(err, hessian_of_polar(f1, x).det_residual);
    }
    add(rows, "hessian", "det_identity_analytic_1d", err, 1e-8, sw.elapsed());

    Mat a2(2);
    a2(0, 0) = 2.0;
    a2(0, 1) = a2(1, 0) = 0.5;
    a2(1, 1) = 1.0;
    AnalyticConvexFunction f2 = AnalyticConvexFunction::quadratic(a2);
    std::uniform_real_distribution<double> v(-1.5, 1.5);
    err = 0;
    int done = 0;
    while (done < 20) {
      Vec x{v(rng), v(rng)};
      if (norm2(x) < 0.3) continue;
      err = std::max(err, hessian_of_polar(f2, x).det_residual);
      ++done;
    }
    add(rows, "hessian", "det_identity_analytic_2d", err, 1e-8);
  }
  // Grid finite-difference path.
  {
    Stopwatch sw;
    AnalyticConvexFunction xsq = AnalyticConvexFunction::power_norm(1, 2, 2);
    GridFunction g = sample_1d(xsq, -2, 2, 1025);
    TransformResult pf = polar(g, default_dual_grid(g));
    double err = 0;
    for (double x : {-1.0, -0.6, 0.6, 1.0, 1.4})
      err = std::max(err, hessian_of_polar(g, pf.output, Vec{x}).det_residual);
    add(rows, "hessian", "det_identity_grid_1d", err, 1e-3, sw.elapsed());
  }
  // Polar gradient point formula against the brute-force dual scan.
  {
    Stopwatch sw;
    AnalyticConvexFunction xsq = AnalyticConvexFunction::power_norm(1, 2, 2);
    GridFunction g = sample_1d(xsq, -2, 2, 401);
    TransformResult pf = polar(g, dual_grid_1d(-8, 8, 1601));
    auto pg = polar_gradient(g, Vec{1.0});
    double point_err =
        pg.kind == PolarGradientKind::Point
            ? std::max(std::abs(pg.y[0] - 2.0), std::abs(pg.polar_value - 1.0))
            : kInf;
    add(rows, "hessian", "polar_gradient_point", point_err, 1e-6,
        sw.elapsed());
    // Distance from the closed-form polar gradient to the scanned interval.
    auto sub = polar_subdifferential_1d(g, 1.0, pf.output);
    double cell = pf.output.cell(0);
    double scan_err = sub.empty
                          ? kInf
                          : std::max({0.0, sub.y_lo - 2.0, 2.0 - sub.y_hi});
    add(rows, "hessian", "polar_gradient_scan_cell", scan_err, cell);
    auto pn = polar_gradient(
        sample_1d(AnalyticConvexFunction::power_norm(1, 2, 1), -2, 2, 401),
        Vec{1.0});
    bool empty_ok = pn.kind == PolarGradientKind::Empty &&
                    pn.reason == PolarGradientReason::NormLikeNoAttainment;
    add(rows, "hessian", "polar_gradient_norm_empty", empty_ok ? 0.0 : 1.0,
        0.5);
  }
  // Sum formula vs direct polar gradient of the sum.
  {
    Stopwatch sw;
    AnalyticConvexFunction f = AnalyticConvexFunction::power_norm(1, 2, 2);
    AnalyticConvexFunction g4 = AnalyticConvexFunction::power_norm(1, 2, 4);
    AnalyticConvexFunction s = AnalyticConvexFunction::sum({f, g4});
    std::uniform_real_distribution<double> u(0.3, 1.7);
    std::bernoulli_distribution sign(0.5);
    double err = 0;
    for (int it = 0; it < 20; ++it) {
      Vec x{(sign(rng) ? 1.0 : -1.0) * u(rng)};
      Vec z = polar_gradient_of_sum(f, g4, x);
      auto direct = polar_gradient(s, x);
      err = std::max(err, norm2(z - direct.y));
    }
    add(rows, "hessian", "sum_formula", err, 1e-6, sw.elapsed());
  }
}

void variation_suite(std::vector<CheckResult>& rows) {
  // Analytic scaling family c(t) f with c(t) = 1 + t/2.
  {
    Stopwatch sw;
    AnalyticConvexFunction base = AnalyticConvexFunction::power_norm(1, 2, 2);
    AnalyticFamily fam;
    fam.at = [base](double t) {
      return AnalyticConvexFunction::scaled(1.0 + 0.5 * t, base);
    };
    Vec y{2.0};
    add(rows, "variation", "legendre_first_analytic",
        legendre_first_variation_residual(fam, 0.5, y), 1e-3, sw.elapsed());
    add(rows, "variation", "polar_first_analytic",
        polar_first_variation_residual(fam, 0.5, y), 1e-3);
    auto sv = second_variation_residuals(fam, 0.5, y);
    add(rows, "variation", "second_legendre_analytic", sv.legendre, 1e-3);
    add(rows, "variation", "second_polar_analytic", sv.polar_matrix, 1e-3);
    add(rows, "variation", "second_bordered_analytic", sv.bordered_det, 1e-3);
    add(rows, "variation", "second_symmetric_analytic", sv.symmetric_form,
        1e-3);
    add(rows, "variation", "j_first_analytic",
        j_variation_residual(fam, 0.5, Vec{1.2}), 1e-3);
  }
  {
    Stopwatch sw;
    Mat a2(2);
    a2(0, 0) = 2.0;
    a2(0, 1) = a2(1, 0) = 0.5;
    a2(1, 1) = 1.0;
    AnalyticConvexFunction base = AnalyticConvexFunction::quadratic(a2);
    AnalyticFamily fam;
    fam.at = [base](double t) {
      return AnalyticConvexFunction::scaled(1.0 + 0.5 * t, base);
    };
    Vec y{1.2, 0.4};
    auto sv = second_variation_residuals(fam, 0.5, y);
    add(rows, "variation", "second_legendre_analytic_2d", sv.legendre, 1e-3,
        sw.elapsed());
    add(rows, "variation", "second_polar_analytic_2d", sv.polar_matrix, 1e-3);
    add(rows, "variation", "second_bordered_analytic_2d", sv.bordered_det,
        1e-3);
    add(rows, "variation", "second_symmetric_analytic_2d", sv.symmetric_form,
        1e-3);
  }
  // Grid path: precomputed frames of the same scaling family.
  {
    Stopwatch sw;
    AnalyticConvexFunction base = AnalyticConvexFunction::power_norm(1, 2, 2);
    GridFamily fam;
    fam.times = {0.48, 0.50, 0.52};
    for (double t : fam.times)
      fam.frames.push_back(sample_1d(
          AnalyticConvexFunction::scaled(1.0 + 0.5 * t, base), -2, 2, 2049));
    Vec y{2.0};
    add(rows, "variation", "legendre_first_grid",
        legendre_first_variation_residual(fam, 1, y), 1e-2, sw.elapsed());
    add(rows, "variation", "polar_first_grid",
        polar_first_variation_residual(fam, 1, y), 1e-2);
    auto sv = second_variation_residuals(fam, 1, y);
    add(rows, "variation", "second_legendre_grid", sv.legendre, 1e-2);
    add(rows, "variation", "second_polar_grid", sv.polar_matrix, 1e-2);
    add(rows, "variation", "second_bordered_grid", sv.bordered_det, 1e-2);
    add(rows, "variation", "second_symmetric_grid", sv.symmetric_form, 1e-2);
    add(rows, "variation", "j_first_grid", j_variation_residual(fam, 1, Vec{1.2}),
        1e-2);
  }
}

void ginf_suite(std::vector<CheckResult>& rows) {
  {
    Stopwatch sw;
    AnalyticConvexFunction xsq = AnalyticConvexFunction::power_norm(1, 2, 2);
    GridFunction f = sample_1d(xsq, -2, 2, 401);
    // Finer dual lattice than the reciprocal default to keep the slope
    // quantization well under the agreement tolerance.
    GinfResult dual = ginf_dual(f, f, dual_grid_1d(-100.25, 100.25, 1605));
    double err = 0;
    for (double x : {0.5, 1.0, 1.5}) {
      GinfWitness w = ginf_direct_1d(f, f, x);
      if (!w.feasible) {
        err = kInf;
        continue;
      }
      err = std::max(err, std::abs(dual.output.evaluate(Vec{x}) - w.value));
    }
    add(rows, "ginf", "dual_vs_direct_xsq", err, 1e-2, sw.elapsed());
  }
  {
    Stopwatch sw;
    GridFunction l1 = sample_1d(AnalyticConvexFunction::ray_1d(1.0), -2, 2, 401);
    GinfResult r = ginf_dual(l1, l1, dual_grid_1d(-1000, 1000, 401));
    double err = 0;
    for (std::int64_t k = 0; k < r.output.size(); ++k) {
      double x = r.output.node(k)[0];
      double v = r.output.values[k];
      if (x < -1e-12) {
        if (std::isfinite(v)) err = kInf;  // must stay the half-line indicator
        continue;
      }
      if (!std::isfinite(v)) {
        err = kInf;
        continue;
      }
      err = std::max(err, std::abs(v - 0.5 * x));
    }
    add(rows, "ginf", "halfline_ray_halved", err, 1e-3, sw.elapsed());
  }
}

void pde_suite(std::vector<CheckResult>& rows) {
  AnalyticConvexFunction xsq = AnalyticConvexFunction::power_norm(1, 2, 2);
  PdeOptions opts;
  // Hamilton-Jacobi with quadratic Hamiltonian: closed form x^2 / (1 + 2t).
  {
    Stopwatch sw;
    GridFunction f = sample_1d(xsq, -2, 2, 257);
    Mat a1(1);
    a1(0, 0) = 1.0;
    AnalyticConvexFunction g = AnalyticConvexFunction::quadratic(a1);
    TimePath path = solve_polar_hj(f, g, {0.0, 0.25, 0.5, 1.0}, opts);
    double err = 0;
    for (size_t i = 1; i < path.times.size(); ++i) {
      double t = path.times[i];
      for (double x : {-1.0, -0.5, 0.5, 1.0})
        err = std::max(err, std::abs(path.frames[i].evaluate(Vec{x}) -
                                     x * x / (1.0 + 2.0 * t)));
    }
    add(rows, "pde", "hj_quadratic_closed_form", err, 2e-2, sw.elapsed());

    auto geval = [&g](const Vec& y) { return g.evaluate(y); };
    auto res_at = [&](int n, double dt) {
      GridFunction fn = sample_1d(xsq, -2, 2, n);
      TimePath p = solve_polar_hj(fn, g, {0.5 - dt, 0.5, 0.5 + dt}, opts);
      return hj_residual(p, 1, Vec{1.0}, geval);
    };
    double r1 = res_at(257, 0.1);
    double r2 = res_at(513, 0.05);
    double slope = std::log2(r1 / std::max(r2, 1e-300));
    rows.push_back({"pde", "hj_residual_refinement_slope", slope, 0.8,
                    slope >= 0.8, sw.elapsed()});
  }
  // Dirichlet interpolation between x^2 and 4 x^2 over T = 1.
  {
    Stopwatch sw;
    AnalyticConvexFunction xsq4 =
        AnalyticConvexFunction::power_norm(1, 2, 2, 4.0);
    auto run = [&](int n, double dt) {
      GridFunction u0 = sample_1d(xsq, -2, 2, n);
      GridFunction u1 = sample_1d(xsq4, -2, 2, n);
      return solve_ma_dirichlet(u0, u1, 1.0,
                                {0.0, 0.5 - dt, 0.5, 0.5 + dt, 1.0}, opts);
    };
    TimePath path = run(257, 0.01);
    auto closed = [](double t, double x) {
      double s = (1.0 - t) / 4.0 + t / 16.0;
      return x * x / (4.0 * s);
    };
    double err = 0;
    for (size_t i = 0; i < path.times.size(); ++i)
      for (double x : {-1.0, -0.5, 0.5, 1.0})
        err = std::max(err, std::abs(path.frames[i].evaluate(Vec{x}) -
                                     closed(path.times[i], x)));
    add(rows, "pde", "ma_dirichlet_closed_form", err, 2e-2, sw.elapsed());
    double rf = ma_residual(path, 2, Vec{1.0});
    add(rows, "pde", "ma_residual", rf, 5e-2);
    double rc = ma_residual(run(129, 0.02), 2, Vec{1.0});
    add(rows, "pde", "ma_residual_refines", rf - rc, 1e-3);
  }
  // Cauchy blow-up with unit velocity ratio.
  {
    Stopwatch sw;
    GridFunction u0 = sample_1d(xsq, -2, 2, 257);
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) times.push_back(0.1 * k);
    MACauchyResult res = solve_ma_cauchy(u0, u0, times, opts);
    add(rows, "pde", "cauchy_t_est", std::abs(res.data.t_est - 0.975), 0.025,
        sw.elapsed());
    MACauchyResult early = solve_ma_cauchy(u0, u0, {0.0, 0.005}, opts);
    double verr = 0;
    for (double x : {-1.0, -0.5, 0.5, 1.0}) {
      double rate = (early.path.frames[1].evaluate(Vec{x}) -
                     early.path.frames[0].evaluate(Vec{x})) /
                    0.005;
      verr = std::max(verr, std::abs(rate - u0.evaluate(Vec{x})));
    }
    add(rows, "pde", "cauchy_initial_velocity", verr, 5e-2);
  }
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
  std::vector<CheckResult> rows;
  bool known = false;
  auto want = [&](const char* s) {
    bool w = suite == s || suite == "all";
    known = known || suite == s;
    return w;
  };
  if (want("involution")) involution_suite(rows);
  if (want("jdual")) jdual_suite(rows);
  if (want("hessian")) hessian_suite(rows);
  if (want("variation")) variation_suite(rows);
  if (want("ginf")) ginf_suite(rows);
  if (want("pde")) pde_suite(rows);
  if (!known && suite != "all") throw Error("unknown suite: " + suite);
  return rows;
}

bool all_passed(const std::vector<CheckResult>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return !rows.empty();
}

std::string format_report_csv(const std::vector<CheckResult>& rows) {
  std::ostringstream out;
  out.precision(12);
  out << "suite,check,measured,tolerance,pass,seconds\n";
  for (const auto& r : rows)
    out << r.suite << ',' << r.name << ',' << r.measured << ',' << r.tolerance
        << ',' << (r.pass ? "pass" : "FAIL") << ',' << r.seconds << '\n';
  return out.str();
}

std::string format_report_json(const std::vector<CheckResult>& rows) {
  std::ostringstream out;
  out.precision(12);
  out << "[\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << "  {\"suite\": \"" << r.suite << "\", \"check\": \"" << r.name
        << "\", \"measured\": " << r.measured
        << ", \"tolerance\": " << r.tolerance << ", \"pass\": "
        << (r.pass ? "true" : "false") << ", \"seconds\": " << r.seconds
        << "}" << (i + 1 < rows.size() ? "," : "") << "\n";
  }
  out << "]\n";
  return out.str();
}

}  // namespace polarcvx
