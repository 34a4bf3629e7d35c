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

#ifndef POLARCVX_CLASSIFY_HPP_
#define POLARCVX_CLASSIFY_HPP_

#include <string>
#include <vector>

#include "polarcvx/analytic.hpp"
#include "polarcvx/grid.hpp"

namespace polarcvx {

// Structural verdicts about a function: membership in the geometric convex
// class and its smooth subclasses, plus growth behaviour along rays. All
// verdicts are sample-based heuristics; they advise, they never prove.
struct ClassReport {
  bool in_cvx0 = false;
  bool in_s1 = false;  // finite, C^1 away from 0, strictly convex
  bool in_s2 = false;  // additionally C^2 with positive-definite Hessian
  // Unit directions along which f is linear on an initial segment from 0
  // (slope zero included, i.e. rays through the zero set).
  std::vector<Vec> ray_linearity_rays;
  bool nonlinear_at_infinity = false;
  std::string diagnostics;
};

struct SampleSpec {
  double radius = 2.0;  // probe radius for analytic functions
  int rays = 16;        // ray directions per classification sweep
  int samples = 200;    // random interior sample points
  unsigned seed = 11;
};

ClassReport classify(const AnalyticConvexFunction& f,
                     const SampleSpec& spec = {});
ClassReport classify(const GridFunction& f, const SampleSpec& spec = {});

}  // namespace polarcvx

#endif  // POLARCVX_CLASSIFY_HPP_
