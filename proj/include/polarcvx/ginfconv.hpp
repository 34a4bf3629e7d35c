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

#ifndef POLARCVX_GINFCONV_HPP_
#define POLARCVX_GINFCONV_HPP_

#include <optional>
#include <vector>

#include "polarcvx/grid.hpp"
#include "polarcvx/transforms.hpp"

namespace polarcvx {

enum class GinfRoute { DualSpace, Direct1D };

struct GinfWitness {
  double x = 0;  // output point
  double y = 0, z = 0;
  double value = 0;
  bool feasible = false;
};

// Geometric inf-convolution result. The output lives on the first input's
// lattice; witness pairs are filled by the direct 1D route only.
struct GinfResult {
  GridFunction output;
  GinfRoute route = GinfRoute::DualSpace;
  std::vector<GinfWitness> witness_pairs;
};

// f [ginf] g through the dual space: the polar of the nodewise sum of the
// polars, computed on the given dual lattice and mapped back to f's lattice.
GinfResult ginf_dual(const GridFunction& f, const GridFunction& g,
                     const DualGrid& dual, const TransformOptions& opts = {});
GinfResult ginf_dual(const GridFunction& f, const GridFunction& g,
                     const TransformOptions& opts = {});

// Direct constrained scan in 1D: minimize the harmonic sum of f(y) and g(z)
// over lattice pairs whose weighted split reproduces x; the constraint is
// tested in the cleared form (x - y) g(z) = (z - x) f(y) with a tolerance
// proportional to cell * (f(y) + g(z)). Infeasible points report value +inf
// rather than throwing; this is the oracle for ginf_dual on strictly convex
// inputs.
GinfWitness ginf_direct_1d(const GridFunction& f, const GridFunction& g,
                           double x);

// Full direct route over every node of f's lattice, with witnesses.
GinfResult ginf_direct_1d_all(const GridFunction& f, const GridFunction& g);

// Samples the cone bodies K_f and K_g (membership y * phi(x/y) <= 1, y > 0),
// forms pairwise Minkowski sums, and measures the worst membership violation
// against K of the dual-route inf-convolution. Small values support the
// set-level characterization of the operation.
double cone_body_check(const GridFunction& f, const GridFunction& g,
                       int n_samples, unsigned seed = 7);

}  // namespace polarcvx

#endif  // POLARCVX_GINFCONV_HPP_
