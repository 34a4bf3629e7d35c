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

// Timing comparison of the packed transform kernels against the naive serial
// reference, and of the parallel loop against its serial setting.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "polarcvx/grid.hpp"
#include "polarcvx/transforms.hpp"

using namespace polarcvx;

namespace {

using Clock = std::chrono::steady_clock;

double time_once(const char* label, const GridFunction& f, const DualGrid& d,
                 bool use_reference, bool parallel) {
  auto t0 = Clock::now();
  TransformResult r;
  if (use_reference) {
    r = reference::polar(f, d);
  } else {
    TransformOptions opts;
    opts.parallel = parallel;
    r = polar(f, d, opts);
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  double checksum = 0;
  for (double v : r.output.values)
    if (std::isfinite(v)) checksum += v;
  std::printf("%-24s %10.4f s   (checksum %.6e)\n", label, secs, checksum);
  return secs;
}

void bench_case(const char* name, const GridFunction& f, bool with_reference) {
  DualGrid d = default_dual_grid(f);
  std::printf("--- %s ---\n", name);
  if (with_reference) time_once("reference serial", f, d, true, false);
  double serial = time_once("packed serial", f, d, false, false);
  double parallel = time_once("packed parallel", f, d, false, true);
  std::printf("parallel speedup: %.2fx\n\n", serial / parallel);
}

}  // namespace

int main() {
  AnalyticConvexFunction xsq = AnalyticConvexFunction::power_norm(1, 2, 2);
  AnalyticConvexFunction quad2 =
      AnalyticConvexFunction::quadratic(Mat::identity(2));

  bench_case("polar 1D N=4097", sample_1d(xsq, -2, 2, 4097), true);
  bench_case("polar 2D N=129^2", sample_2d(quad2, -2, 2, 129), true);
  bench_case("polar 2D N=257^2", sample_2d(quad2, -2, 2, 257), false);
  return 0;
}
