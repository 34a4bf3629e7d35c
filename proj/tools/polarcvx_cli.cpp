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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polarcvx/calculus.hpp"
#include "polarcvx/classify.hpp"
#include "polarcvx/descriptor.hpp"
#include "polarcvx/ginfconv.hpp"
#include "polarcvx/pde.hpp"
#include "polarcvx/transforms.hpp"
#include "polarcvx/verify.hpp"

namespace {

using namespace polarcvx;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitVerifyFailed = 3;

// Thrown after a failed input load so main can map it to the parse exit code.
struct ParseFailure {
  std::string message;
};

FunctionDescriptor load_input(const std::string& path) {
  try {
    return load_descriptor(path);
  } catch (const Error& e) {
    throw ParseFailure{e.what()};
  }
}

std::vector<double> make_times(double t_end, int steps) {
  if (steps < 2 || !(t_end > 0)) throw ParseFailure{"need steps >= 2, t-end > 0"};
  std::vector<double> times;
  for (int i = 0; i < steps; ++i) times.push_back(t_end * i / (steps - 1));
  return times;
}

struct CommonOpts {
  std::string in_path, out_path;
  std::vector<double> dual_box;
  int dual_shape = 0;
  bool strict = false;
  bool no_timestamp = false;
  std::string format = "json";
  double sample_lo = -2.0, sample_hi = 2.0;
  int sample_n = 257;
};

DualGrid resolve_dual(const GridFunction& g, const CommonOpts& c) {
  DualGrid d = default_dual_grid(g);
  if (!c.dual_box.empty()) {
    if (static_cast<int>(c.dual_box.size()) != 2)
      throw ParseFailure{"--dual-box expects lo hi"};
    for (int ax = 0; ax < g.dim; ++ax) {
      d.lo[ax] = c.dual_box[0];
      d.hi[ax] = c.dual_box[1];
    }
  }
  if (c.dual_shape > 0)
    for (int ax = 0; ax < g.dim; ++ax) d.shape[ax] = c.dual_shape;
  return d;
}

int run_transform(const CommonOpts& c, const std::string& op) {
  FunctionDescriptor in = load_input(c.in_path);
  GridFunction g = materialize(in, {c.sample_lo, c.sample_hi, c.sample_n});
  TransformOptions topts;
  topts.strict = c.strict;
  auto t0 = std::chrono::steady_clock::now();
  nlohmann::json out;
  if (op == "legendre") {
    out = transform_result_to_json(legendre(g, resolve_dual(g, c), topts));
  } else if (op == "polar") {
    out = transform_result_to_json(polar(g, resolve_dual(g, c), topts));
  } else if (op == "j") {
    JResult r = j_transform(g, JRoute::Auto, topts);
    FunctionDescriptor d;
    d.grid = r.output;
    out = descriptor_to_json(d);
    out["cross_deviation"] = r.cross_deviation;
  } else if (op == "envelope") {
    FunctionDescriptor d;
    d.grid = geometric_envelope(g, topts);
    out = descriptor_to_json(d);
  } else {
    throw ParseFailure{"unknown --op: " + op};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  write_file_atomic(c.out_path, out.dump(2) + "\n");
  nlohmann::json diag;
  diag["op"] = op;
  if (out.contains("boundary_fraction"))
    diag["boundary_fraction"] = out["boundary_fraction"];
  if (!c.no_timestamp) diag["seconds"] = secs;
  write_file_atomic(c.out_path + ".diag.json", diag.dump(2) + "\n");
  return kExitOk;
}

int run_ginf(const CommonOpts& c, const std::string& f_path,
             const std::string& g_path, const std::string& witness_csv) {
  GridFunction f =
      materialize(load_input(f_path), {c.sample_lo, c.sample_hi, c.sample_n});
  GridFunction g =
      materialize(load_input(g_path), {c.sample_lo, c.sample_hi, c.sample_n});
  TransformOptions topts;
  topts.strict = c.strict;
  GinfResult r = c.dual_box.empty() && c.dual_shape == 0
                     ? ginf_dual(f, g, topts)
                     : ginf_dual(f, g, resolve_dual(f, c), topts);
  FunctionDescriptor d;
  d.grid = r.output;
  write_file_atomic(c.out_path, descriptor_to_json(d).dump(2) + "\n");
  if (!witness_csv.empty()) {
    if (f.dim != 1) throw Error("witness dump is 1D only");
    GinfResult direct = ginf_direct_1d_all(f, g);
    std::ostringstream out;
    out.precision(17);
    out << "x,y,z,value,feasible\n";
    for (const auto& w : direct.witness_pairs)
      out << w.x << ',' << w.y << ',' << w.z << ',' << w.value << ','
          << (w.feasible ? 1 : 0) << '\n';
    write_file_atomic(witness_csv, out.str());
  }
  return kExitOk;
}

void write_path_outputs(const std::string& out_dir, const TimePath& path,
                        const CommonOpts& c) {
  save_time_path(out_dir, path, !c.no_timestamp);
  if (c.format == "csv")
    save_time_path_csv(
        (std::filesystem::path(out_dir) / "path.csv").string(), path);
}

int run_hj(const CommonOpts& c, const std::string& f_path,
           const std::string& g_path, double t_end, int steps, bool check,
           const std::string& out_dir) {
  GridFunction f =
      materialize(load_input(f_path), {c.sample_lo, c.sample_hi, c.sample_n});
  FunctionDescriptor gd = load_input(g_path);
  PdeOptions opts;
  opts.transform.strict = c.strict;
  std::vector<double> times = make_times(t_end, steps);
  TimePath path;
  std::function<double(const Vec&)> geval;
  if (gd.is_analytic()) {
    path = solve_polar_hj(f, *gd.analytic, times, opts);
    AnalyticConvexFunction g = *gd.analytic;
    geval = [g](const Vec& y) { return g.evaluate(y); };
  } else {
    path = solve_polar_hj(f, *gd.grid, times, opts);
    GridFunction g = *gd.grid;
    geval = [g](const Vec& y) {
      try {
        return g.evaluate(y);
      } catch (const OutOfBoxError&) {
        return kInf;
      }
    };
  }
  write_path_outputs(out_dir, path, c);
  if (check) {
    std::ostringstream out;
    out.precision(12);
    out << "t,x,residual\n";
    for (int i = 1; i + 1 < static_cast<int>(path.frames.size()); ++i) {
      for (double frac : {-0.5, -0.25, 0.25, 0.5}) {
        Vec x{frac * (f.hi[0] - f.lo[0]) / 2.0};
        try {
          out << path.times[i] << ',' << x[0] << ','
              << hj_residual(path, i, x, geval) << '\n';
        } catch (const Error&) {
          out << path.times[i] << ',' << x[0] << ",nan\n";
        }
      }
    }
    write_file_atomic(
        (std::filesystem::path(out_dir) / "residuals.csv").string(),
        out.str());
  }
  return kExitOk;
}

int run_interpolate(const CommonOpts& c, const std::string& u0_path,
                    const std::string& u1_path, double T, int steps,
                    const std::string& out_dir) {
  GridFunction u0 =
      materialize(load_input(u0_path), {c.sample_lo, c.sample_hi, c.sample_n});
  GridFunction u1 =
      materialize(load_input(u1_path), {c.sample_lo, c.sample_hi, c.sample_n});
  PdeOptions opts;
  opts.transform.strict = c.strict;
  std::vector<double> times = make_times(T, steps);
  TimePath path = solve_ma_dirichlet(u0, u1, T, times, opts);
  write_path_outputs(out_dir, path, c);
  return kExitOk;
}

int run_cauchy(const CommonOpts& c, const std::string& u0_path,
               const std::string& du0_path, double t_end, int steps,
               const std::string& out_dir) {
  GridFunction u0 =
      materialize(load_input(u0_path), {c.sample_lo, c.sample_hi, c.sample_n});
  GridFunction du0 = materialize(load_input(du0_path),
                                 {c.sample_lo, c.sample_hi, c.sample_n});
  PdeOptions opts;
  opts.transform.strict = c.strict;
  MACauchyResult res = solve_ma_cauchy(u0, du0, make_times(t_end, steps), opts);
  write_path_outputs(out_dir, res.path, c);
  if (res.data.truncated) {
    std::cerr << "refused frames past the admissibility horizon t_est="
              << res.data.t_est << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int run_verify(const std::string& suite, const std::string& format) {
  auto rows = run_suite(suite);
  std::cout << (format == "csv" ? format_report_csv(rows)
                                : format_report_json(rows));
  if (!all_passed(rows)) {
    for (const auto& r : rows)
      if (!r.pass)
        std::cerr << "FAIL " << r.suite << "/" << r.name << ": measured "
                  << r.measured << " vs tolerance " << r.tolerance << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int run_info(const CommonOpts& c) {
  FunctionDescriptor d = load_input(c.in_path);
  if (d.is_analytic()) {
    std::cout << "kind: analytic\ndim: " << d.analytic->dim() << "\n";
    ClassReport rep = classify(*d.analytic);
    std::cout << "cvx0: " << rep.in_cvx0 << "\ns1: " << rep.in_s1
              << "\ns2: " << rep.in_s2
              << "\nnonlinear_at_infinity: " << rep.nonlinear_at_infinity
              << "\nray_linear_directions: " << rep.ray_linearity_rays.size()
              << "\ndiagnostics: " << rep.diagnostics << "\n";
    return kExitOk;
  }
  const GridFunction& g = *d.grid;
  std::cout << "kind: grid\ndim: " << g.dim << "\nshape:";
  for (int ax = 0; ax < g.dim; ++ax) std::cout << ' ' << g.shape[ax];
  std::cout << "\nbox:";
  for (int ax = 0; ax < g.dim; ++ax)
    std::cout << " [" << g.lo[ax] << ", " << g.hi[ax] << "]";
  std::cout << "\nmax_finite: " << g.max_finite_value()
            << "\nconvexity_violation: " << g.midpoint_convexity_violation()
            << "\n";
  ClassReport rep = classify(g);
  std::cout << "cvx0: " << rep.in_cvx0 << "\ns1: " << rep.in_s1
            << "\ns2: " << rep.in_s2
            << "\nnonlinear_at_infinity: " << rep.nonlinear_at_infinity << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarcvx: polarity-transform toolkit for geometric convex "
               "functions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  CommonOpts c;
  std::string op, suite = "all", f_path, g_path, u0_path, u1_path, du0_path;
  std::string out_dir, witness_csv;
  double t_end = 1.0, T = 1.0;
  int steps = 11;
  bool check = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--strict", c.strict, "Refuse truncated transforms")
        ->envname("POLARCVX_STRICT");
    sub->add_flag("--no-timestamp", c.no_timestamp,
                  "Omit wall-clock fields for byte-identical reruns")
        ->envname("POLARCVX_NO_TIMESTAMP");
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->envname("POLARCVX_FORMAT");
    sub->add_option("--sample-lo", c.sample_lo,
                    "Sampling box lower bound for analytic inputs")
        ->envname("POLARCVX_SAMPLE_LO");
    sub->add_option("--sample-hi", c.sample_hi,
                    "Sampling box upper bound for analytic inputs")
        ->envname("POLARCVX_SAMPLE_HI");
    sub->add_option("--sample-n", c.sample_n,
                    "Sampling nodes per axis for analytic inputs")
        ->envname("POLARCVX_SAMPLE_N");
  };
  auto add_dual = [&](CLI::App* sub) {
    sub->add_option("--dual-box", c.dual_box,
                    "Dual lattice box as: lo hi (all axes)")
        ->expected(2);
    sub->add_option("--dual-shape", c.dual_shape,
                    "Dual lattice nodes per axis");
  };

  CLI::App* tr = app.add_subcommand("transform", "Apply a duality transform");
  tr->add_option("--op", op, "legendre | polar | j | envelope")->required();
  tr->add_option("--in", c.in_path, "Input descriptor")->required();
  tr->add_option("--out", c.out_path, "Output descriptor")->required();
  add_dual(tr);
  add_common(tr);

  CLI::App* gi = app.add_subcommand("ginf", "Geometric inf-convolution");
  gi->add_option("--f", f_path, "First input descriptor")->required();
  gi->add_option("--g", g_path, "Second input descriptor")->required();
  gi->add_option("--out", c.out_path, "Output descriptor")->required();
  gi->add_option("--witness-csv", witness_csv,
                 "Also run the direct 1D route and dump witness pairs");
  add_dual(gi);
  add_common(gi);

  CLI::App* hj = app.add_subcommand("hj", "Solve the polar Hamilton-Jacobi "
                                          "family");
  hj->add_option("--f", f_path, "Initial datum descriptor")->required();
  hj->add_option("--g", g_path, "Hamiltonian descriptor")->required();
  hj->add_option("--t-end", t_end, "Final time");
  hj->add_option("--steps", steps, "Number of frames");
  hj->add_option("--out", out_dir, "Output frame directory")->required();
  hj->add_flag("--check", check, "Emit a residual CSV");
  add_common(hj);

  CLI::App* ip = app.add_subcommand("interpolate",
                                    "Interpolate two data through the dual");
  ip->add_option("--u0", u0_path, "Left endpoint descriptor")->required();
  ip->add_option("--u1", u1_path, "Right endpoint descriptor")->required();
  ip->add_option("--T", T, "Interpolation horizon");
  ip->add_option("--steps", steps, "Number of frames");
  ip->add_option("--out", out_dir, "Output frame directory")->required();
  add_common(ip);

  CLI::App* ca = app.add_subcommand("cauchy", "Initial-value interpolation");
  ca->add_option("--u0", u0_path, "Initial datum descriptor")->required();
  ca->add_option("--du0", du0_path, "Initial velocity descriptor")->required();
  ca->add_option("--t-end", t_end, "Final requested time");
  ca->add_option("--steps", steps, "Number of frames");
  ca->add_option("--out", out_dir, "Output frame directory")->required();
  add_common(ca);

  CLI::App* ve = app.add_subcommand("verify", "Run verification suites");
  ve->add_option("--suite", suite,
                 "involution | jdual | hessian | variation | ginf | pde | all")
      ->envname("POLARCVX_SUITE");
  std::string catalog = "builtin";
  ve->add_option("--catalog", catalog, "Input catalog (builtin only)")
      ->check(CLI::IsMember({"builtin"}));
  add_common(ve);

  CLI::App* in = app.add_subcommand("info", "Describe and classify an input");
  in->add_option("--in", c.in_path, "Input descriptor")->required();
  add_common(in);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (tr->parsed()) return run_transform(c, op);
    if (gi->parsed()) return run_ginf(c, f_path, g_path, witness_csv);
    if (hj->parsed())
      return run_hj(c, f_path, g_path, t_end, steps, check, out_dir);
    if (ip->parsed()) return run_interpolate(c, u0_path, u1_path, T, steps,
                                             out_dir);
    if (ca->parsed()) return run_cauchy(c, u0_path, du0_path, t_end, steps,
                                        out_dir);
    if (ve->parsed()) return run_verify(suite, c.format);
    if (in->parsed()) return run_info(c);
  } catch (const ParseFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitParse;
  } catch (const TruncationError& e) {
    std::cerr << "numeric refusal: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const BeyondMaximalTimeError& e) {
    std::cerr << "numeric refusal: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const AdvisoryFailureError& e) {
    std::cerr << "numeric refusal: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "numeric refusal: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitParse;
}
