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

#ifndef POLARCVX_ANALYTIC_HPP_
#define POLARCVX_ANALYTIC_HPP_

#include <memory>
#include <variant>
#include <vector>

#include "polarcvx/errors.hpp"
#include "polarcvx/linalg.hpp"

namespace polarcvx {

// Half-space {x : <a,x> <= b} with b >= 0 so the set contains the origin.
struct HalfSpace {
  Vec a;
  double b = 0;
};

// Affine piece <a,x> + b with b <= 0 so max(0, .) vanishes at the origin.
struct AffinePiece {
  Vec a;
  double b = 0;
};

// Closed-form catalog of geometric convex functions: nonnegative, convex,
// vanishing at the origin. Evaluation, gradients and Hessians are exact.
class AnalyticConvexFunction {
 public:
  struct PowerOfPNorm {
    double p = 2, q = 2, scale = 1;  // scale * ||x||_p^q
  };
  struct Quadratic {
    Mat A;  // (1/2) <Ax, x>
  };
  struct IndicatorOfBall {
    double p = 2, radius = 1;
  };
  struct IndicatorOfPolytope {
    std::vector<HalfSpace> faces;
  };
  struct MaxOfAffinePlus {
    std::vector<AffinePiece> pieces;  // max(0, max_i <a_i,x> + b_i)
  };
  struct Sum {
    std::vector<AnalyticConvexFunction> children;
  };
  struct Scaled {
    double t = 1;  // t > 0
    std::shared_ptr<const AnalyticConvexFunction> child;
  };
  struct PrecomposeLinear {
    Mat m;  // invertible; f(Mx)
    std::shared_ptr<const AnalyticConvexFunction> child;
  };
  using Node = std::variant<PowerOfPNorm, Quadratic, IndicatorOfBall,
                            IndicatorOfPolytope, MaxOfAffinePlus, Sum, Scaled,
                            PrecomposeLinear>;

  static AnalyticConvexFunction power_norm(int dim, double p, double q,
                                           double scale = 1.0);
  static AnalyticConvexFunction quadratic(const Mat& a);
  static AnalyticConvexFunction ball_indicator(int dim, double p,
                                               double radius);
  static AnalyticConvexFunction polytope_indicator(int dim,
                                                   std::vector<HalfSpace> faces);
  static AnalyticConvexFunction max_affine(int dim,
                                           std::vector<AffinePiece> pieces);
  static AnalyticConvexFunction sum(std::vector<AnalyticConvexFunction> fs);
  static AnalyticConvexFunction scaled(double t, AnalyticConvexFunction f);
  static AnalyticConvexFunction precompose(const Mat& m,
                                           AnalyticConvexFunction f);
  // The 1D ray function l_c: c*t for t >= 0, +inf for t < 0.
  static AnalyticConvexFunction ray_1d(double c);

  int dim() const { return dim_; }
  const Node& node() const { return node_; }

  double evaluate(const Vec& x) const;
  // Throws NotDifferentiableError at kinks / outside the domain interior.
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;

 private:
  AnalyticConvexFunction(int dim, Node node)
      : dim_(dim), node_(std::move(node)) {}
  int dim_ = 1;
  Node node_;
};

}  // namespace polarcvx

#endif  // POLARCVX_ANALYTIC_HPP_
