#ifndef VOLCOL_TESTS_TEST_UTIL_HPP
#define VOLCOL_TESTS_TEST_UTIL_HPP

// Test-only helpers and brute-force oracles. Nothing here calls into the code
// paths it is used to check.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <vector>

#include "volcol/types.hpp"

namespace volcol::testing {

using Mat = Matrix<double>;
using Vec = Vector<double>;

inline Mat random_matrix(Index m, Index n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Mat X(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) X(i, j) = u(rng);
  return X;
}

inline Mat random_psd(Index n, std::mt19937_64& rng) {
  const Mat B = random_matrix(n, n, rng);
  return B.transpose() * B;
}

/// Triple-loop X^T X.
inline Mat naive_gram(const Mat& X) {
  Mat G(X.cols(), X.cols());
  for (Index a = 0; a < X.cols(); ++a)
    for (Index b = 0; b < X.cols(); ++b) {
      double s = 0;
      for (Index i = 0; i < X.rows(); ++i) s += X(i, a) * X(i, b);
      G(a, b) = s;
    }
  return G;
}

/// Visits every subset of {0..n-1} of size r as a bitmask-derived index list.
template <typename Fn>
void each_subset(Index n, Index r, Fn&& fn) {
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    if (__builtin_popcountl(mask) != r) continue;
    std::vector<Index> idx;
    for (Index i = 0; i < n; ++i)
      if (mask & (1ul << i)) idx.push_back(i);
    fn(idx);
  }
}

/// Sum over r-subsets of products.
inline double brute_elem_sym(const Vec& sigma, Index r) {
  double total = 0;
  each_subset(sigma.size(), r, [&](const std::vector<Index>& s) {
    double p = 1;
    for (Index i : s) p *= sigma[i];
    total += p;
  });
  return total;
}

/// Determinant by Laplace expansion along the first row (tiny matrices only).
inline double laplace_det(const Mat& A) {
  const Index n = A.rows();
  if (n == 0) return 1;
  if (n == 1) return A(0, 0);
  double det = 0;
  for (Index j = 0; j < n; ++j) {
    Mat minor(n - 1, n - 1);
    for (Index a = 1; a < n; ++a)
      for (Index b = 0, c = 0; b < n; ++b)
        if (b != j) minor(a - 1, c++) = A(a, b);
    det += ((j % 2) ? -1.0 : 1.0) * A(0, j) * laplace_det(minor);
  }
  return det;
}

/// Sum of r x r principal minors.
inline double principal_minor_sum(const Mat& A, Index r) {
  double total = 0;
  each_subset(A.rows(), r, [&](const std::vector<Index>& s) {
    Mat sub(r, r);
    for (Index a = 0; a < r; ++a)
      for (Index b = 0; b < r; ++b) sub(a, b) = A(s[a], s[b]);
    total += laplace_det(sub);
  });
  return total;
}

/// ||x - A (A^T A)^{-1} A^T x||^2 through the normal equations.
inline double projection_distance(const Mat& A, const Vec& x) {
  const Vec coef = (A.transpose() * A).ldlt().solve(A.transpose() * x);
  return (x - A * coef).squaredNorm();
}

/// ||X - X_(k)||_F^2 from an explicit truncated SVD reconstruction.
inline double svd_rank_k_error(const Mat& X, Index k) {
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec s = svd.singularValues();
  Mat Xk = Mat::Zero(X.rows(), X.cols());
  for (Index i = 0; i < k; ++i) Xk += s[i] * svd.matrixU().col(i) * svd.matrixV().col(i).transpose();
  return (X - Xk).squaredNorm();
}

/// Residual trace through an explicit pseudo-inverse projector.
inline double pinv_residual(const Mat& X, const ColumnSubset& C) {
  Mat XC(X.rows(), C.size());
  for (Index i = 0; i < C.size(); ++i) XC.col(i) = X.col(C[i]);
  if (C.size() == 0) return X.squaredNorm();
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(XC);
  const Mat P = XC * cod.pseudoInverse();
  return (X - P * X).squaredNorm();
}

inline bool rel_close(double a, double b, double rel, double abs_floor = 0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace volcol::testing

#endif  // VOLCOL_TESTS_TEST_UTIL_HPP
