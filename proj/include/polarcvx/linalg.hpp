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

#ifndef POLARCVX_LINALG_HPP_
#define POLARCVX_LINALG_HPP_

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>

namespace polarcvx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kMaxDim = 3;

inline bool is_finite(double v) { return std::isfinite(v); }

// Small fixed-capacity vector for points in dimension 1..3.
struct Vec {
  int n = 0;
  std::array<double, kMaxDim> a{};

  Vec() = default;
  explicit Vec(int dim) : n(dim) { assert(dim >= 1 && dim <= kMaxDim); }
  Vec(std::initializer_list<double> vals) {
    n = static_cast<int>(vals.size());
    assert(n >= 1 && n <= kMaxDim);
    int i = 0;
    for (double v : vals) a[i++] = v;
  }
  static Vec zero(int dim) { return Vec(dim); }

  double& operator[](int i) { return a[i]; }
  double operator[](int i) const { return a[i]; }
};

inline Vec operator+(const Vec& u, const Vec& v) {
  Vec r(u.n);
  for (int i = 0; i < u.n; ++i) r[i] = u[i] + v[i];
  return r;
}
inline Vec operator-(const Vec& u, const Vec& v) {
  Vec r(u.n);
  for (int i = 0; i < u.n; ++i) r[i] = u[i] - v[i];
  return r;
}
inline Vec operator*(double s, const Vec& u) {
  Vec r(u.n);
  for (int i = 0; i < u.n; ++i) r[i] = s * u[i];
  return r;
}
inline double dot(const Vec& u, const Vec& v) {
  double s = 0;
  for (int i = 0; i < u.n; ++i) s += u[i] * v[i];
  return s;
}
inline double norm2(const Vec& u) { return std::sqrt(dot(u, u)); }

// p-norm with p in [1, inf]; p = kInf means the max norm.
inline double norm_p(const Vec& u, double p) {
  if (std::isinf(p)) {
    double m = 0;
    for (int i = 0; i < u.n; ++i) m = std::max(m, std::abs(u[i]));
    return m;
  }
  if (p == 1.0) {
    double s = 0;
    for (int i = 0; i < u.n; ++i) s += std::abs(u[i]);
    return s;
  }
  if (p == 2.0) return norm2(u);
  double s = 0;
  for (int i = 0; i < u.n; ++i) s += std::pow(std::abs(u[i]), p);
  return std::pow(s, 1.0 / p);
}

// Holder conjugate exponent, 1 <-> inf.
inline double dual_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

// Square matrix of order 1..3, row-major.
struct Mat {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> a{};

  Mat() = default;
  explicit Mat(int dim) : n(dim) { assert(dim >= 1 && dim <= kMaxDim); }
  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int i, int j) { return a[i * kMaxDim + j]; }
  double operator()(int i, int j) const { return a[i * kMaxDim + j]; }
};

inline Mat operator+(const Mat& A, const Mat& B) {
  Mat r(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) r(i, j) = A(i, j) + B(i, j);
  return r;
}
inline Mat operator-(const Mat& A, const Mat& B) {
  Mat r(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) r(i, j) = A(i, j) - B(i, j);
  return r;
}
inline Mat operator*(double s, const Mat& A) {
  Mat r(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) r(i, j) = s * A(i, j);
  return r;
}
inline Mat matmul(const Mat& A, const Mat& B) {
  Mat r(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      double s = 0;
      for (int k = 0; k < A.n; ++k) s += A(i, k) * B(k, j);
      r(i, j) = s;
    }
  return r;
}
inline Vec matvec(const Mat& A, const Vec& x) {
  Vec r(A.n);
  for (int i = 0; i < A.n; ++i) {
    double s = 0;
    for (int j = 0; j < A.n; ++j) s += A(i, j) * x[j];
    r[i] = s;
  }
  return r;
}
inline Mat transpose(const Mat& A) {
  Mat r(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) r(i, j) = A(j, i);
  return r;
}
// outer(x, y) = x y^T with x a column and y a row.
inline Mat outer(const Vec& x, const Vec& y) {
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) r(i, j) = x[i] * y[j];
  return r;
}

inline double det(const Mat& A) {
  switch (A.n) {
    case 1:
      return A(0, 0);
    case 2:
      return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    case 3:
      return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
             A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
             A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
    default:
      assert(false);
      return 0;
  }
}

inline Mat inverse(const Mat& A) {
  double d = det(A);
  if (d == 0.0 || !std::isfinite(d))
    throw std::runtime_error("singular matrix");
  Mat r(A.n);
  switch (A.n) {
    case 1:
      r(0, 0) = 1.0 / d;
      break;
    case 2:
      r(0, 0) = A(1, 1) / d;
      r(0, 1) = -A(0, 1) / d;
      r(1, 0) = -A(1, 0) / d;
      r(1, 1) = A(0, 0) / d;
      break;
    case 3:
      r(0, 0) = (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) / d;
      r(0, 1) = (A(0, 2) * A(2, 1) - A(0, 1) * A(2, 2)) / d;
      r(0, 2) = (A(0, 1) * A(1, 2) - A(0, 2) * A(1, 1)) / d;
      r(1, 0) = (A(1, 2) * A(2, 0) - A(1, 0) * A(2, 2)) / d;
      r(1, 1) = (A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0)) / d;
      r(1, 2) = (A(0, 2) * A(1, 0) - A(0, 0) * A(1, 2)) / d;
      r(2, 0) = (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0)) / d;
      r(2, 1) = (A(0, 1) * A(2, 0) - A(0, 0) * A(2, 1)) / d;
      r(2, 2) = (A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0)) / d;
      break;
  }
  return r;
}

inline Vec solve(const Mat& A, const Vec& b) { return matvec(inverse(A), b); }

// Attempted Cholesky factorization; symmetric part is used.
inline bool is_positive_definite(const Mat& A) {
  Mat L(A.n);
  for (int i = 0; i < A.n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.5 * (A(i, j) + A(j, i));
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0 || !std::isfinite(s)) return false;
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  return true;
}

inline double min_symmetric_eigenvalue(const Mat& A) {
  if (A.n == 1) return A(0, 0);
  if (A.n == 2) {
    double tr = A(0, 0) + A(1, 1);
    double d = det(A);
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - d));
    return tr / 2.0 - disc;
  }
  // Bisection on the characteristic polynomial sign via Cholesky of A - s I.
  double lo = -1e12, hi = 1e12;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    Mat shifted = A;
    for (int i = 0; i < A.n; ++i) shifted(i, i) -= mid;
    if (is_positive_definite(shifted))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// Determinant of a (dim+1) x (dim+1) bordered matrix given as flat row-major
// entries, dim <= 3. Used for the bordered-determinant residual form.
inline double det_up_to_4(const std::array<double, 16>& m, int order) {
  if (order <= 3) {
    Mat A(order);
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j) A(i, j) = m[i * 4 + j];
    return det(A);
  }
  double d = 0;
  for (int c = 0; c < 4; ++c) {
    std::array<double, 16> sub{};
    for (int i = 1; i < 4; ++i) {
      int jj = 0;
      for (int j = 0; j < 4; ++j) {
        if (j == c) continue;
        sub[(i - 1) * 4 + jj] = m[i * 4 + j];
        ++jj;
      }
    }
    double minor = det_up_to_4(sub, 3);
    d += ((c % 2 == 0) ? 1.0 : -1.0) * m[c] * minor;
  }
  return d;
}

}  // namespace polarcvx

#endif  // POLARCVX_LINALG_HPP_
