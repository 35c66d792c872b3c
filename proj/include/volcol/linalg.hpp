#ifndef VOLCOL_LINALG_HPP
#define VOLCOL_LINALG_HPP

// Dense real linear algebra used by the selection algorithms: Gram matrices,
// a cyclic Jacobi eigensolver, projections and residual traces.

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "volcol/types.hpp"

namespace volcol {

/// Eigenvalues of a symmetric PSD matrix, sorted non-increasing and clamped
/// at zero.
template <typename Scalar>
class Spectrum {
 public:
  Spectrum() = default;

  explicit Spectrum(Vector<Scalar> values) : values_(std::move(values)) {
    for (Index i = 0; i < values_.size(); ++i) {
      if (values_[i] < Scalar(0)) throw InvalidArgumentError("spectrum entries must be non-negative");
      if (i > 0 && values_[i] > values_[i - 1])
        throw InvalidArgumentError("spectrum must be sorted non-increasing");
    }
  }

  const Vector<Scalar>& values() const { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }
  Scalar max() const { return values_.size() ? values_[0] : Scalar(0); }
  Scalar sum() const { return values_.sum(); }

  /// Sum of the eigenvalues after the k largest.
  Scalar tail_sum(Index k) const {
    if (k >= values_.size()) return Scalar(0);
    return values_.tail(values_.size() - k).sum();
  }

  /// Count of eigenvalues above rel_tol times the largest.
  Index numerical_rank(Scalar rel_tol) const {
    const Scalar cut = rel_tol * max();
    Index rank = 0;
    while (rank < size() && values_[rank] > cut) ++rank;
    return rank;
  }

 private:
  Vector<Scalar> values_;
};

template <typename Scalar>
struct SymEigen {
  Spectrum<Scalar> spectrum;
  Matrix<Scalar> vectors;  // column i pairs with spectrum[i]; empty unless requested
};

namespace tol {
inline constexpr double kSymmetry = 1e-10;      // relative, for sym_eigen input
inline constexpr double kNegativeClamp = 1e-8;  // eigenvalues in [-kNegativeClamp * max, 0) become 0
inline constexpr double kBasisDrop = 1e-10;     // relative to ||X||_F, residual_trace basis
inline constexpr double kDependent = 1e-12;     // Gram determinant / Hadamard bound
inline constexpr double kRank = 1e-12;          // eigenvalue relative to the largest
}  // namespace tol

/// X^T X, exactly symmetric.
template <typename Derived>
Matrix<typename Derived::Scalar> gram(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> G = Matrix<Scalar>::Zero(X.cols(), X.cols());
  G.template selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  G.template triangularView<Eigen::StrictlyUpper>() = G.transpose();
  return G;
}

/// X X^T, exactly symmetric.
template <typename Derived>
Matrix<typename Derived::Scalar> outer_gram(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> W = Matrix<Scalar>::Zero(X.rows(), X.rows());
  W.template selfadjointView<Eigen::Lower>().rankUpdate(X);
  W.template triangularView<Eigen::StrictlyUpper>() = W.transpose();
  return W;
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& A, typename Derived::Scalar rel_tol,
                  typename Derived::Scalar reference = 0) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() != A.cols()) return false;
  if (A.size() == 0) return true;
  const Scalar scale = std::max({A.cwiseAbs().maxCoeff(), reference, std::numeric_limits<Scalar>::min()});
  return (A - A.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

namespace detail {

template <typename Scalar>
SymEigen<Scalar> finish_eigen(Vector<Scalar> values, Matrix<Scalar> vectors, bool want_vectors,
                              Scalar reference = 0) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] > values[b]; });

  Vector<Scalar> sorted(n);
  Matrix<Scalar> sorted_vectors;
  if (want_vectors) sorted_vectors.resize(vectors.rows(), n);
  for (Index i = 0; i < n; ++i) {
    sorted[i] = values[order[static_cast<std::size_t>(i)]];
    if (want_vectors) sorted_vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
  }

  const Scalar top = n ? std::max(sorted[0], reference) : reference;
  for (Index i = 0; i < n; ++i) {
    if (sorted[i] < Scalar(0)) {
      if (sorted[i] < -Scalar(tol::kNegativeClamp) * top) throw NotPsdError();
      sorted[i] = Scalar(0);
    }
  }
  return {Spectrum<Scalar>(std::move(sorted)), std::move(sorted_vectors)};
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition of a symmetric PSD matrix.
///
/// Sweeps over all (p, q) pairs applying the rotation that annihilates A(p, q)
/// until the off-diagonal Frobenius mass drops below machine precision relative
/// to ||A||_F. Eigenvalues in [-1e-8 * max, 0) are clamped to zero; anything
/// more negative raises NotPsdError. A positive `reference` raises the scale
/// both tolerances are measured against, for inputs that are themselves
/// roundoff of a larger matrix.
template <typename Derived>
SymEigen<typename Derived::Scalar> sym_eigen(const Eigen::MatrixBase<Derived>& A, bool want_vectors = false,
                                             typename Derived::Scalar reference = 0) {
  using Scalar = typename Derived::Scalar;
  if (!is_symmetric(A, Scalar(tol::kSymmetry), reference)) throw NotSymmetricError();
  const Index n = A.rows();

  Matrix<Scalar> a = A;
  Matrix<Scalar> v;
  if (want_vectors) v = Matrix<Scalar>::Identity(n, n);

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar stop = eps * eps * a.squaredNorm();
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Scalar off = 0;
    for (Index q = 0; q < n; ++q)
      for (Index p = 0; p < q; ++p) off += a(p, q) * a(p, q);
    if (off <= stop) break;

    for (Index q = 1; q < n; ++q) {
      for (Index p = 0; p < q; ++p) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        if (want_vectors) v.applyOnTheRight(p, q, rot);
      }
    }
  }
  return detail::finish_eigen<Scalar>(a.diagonal(), std::move(v), want_vectors, reference);
}

/// Eigenvalues only, routed by size: Jacobi up to kJacobiMaxDim, Householder
/// tridiagonalisation plus implicit QR (Eigen) above it. Same clamping rules.
inline constexpr Index kJacobiMaxDim = 24;

template <typename Derived>
Spectrum<typename Derived::Scalar> spectrum(const Eigen::MatrixBase<Derived>& A,
                                            typename Derived::Scalar reference = 0) {
  using Scalar = typename Derived::Scalar;
  if (A.rows() <= kJacobiMaxDim) return sym_eigen(A, false, reference).spectrum;
  if (!is_symmetric(A, Scalar(tol::kSymmetry), reference)) throw NotSymmetricError();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(A, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
  return detail::finish_eigen<Scalar>(solver.eigenvalues(), Matrix<Scalar>(), false, reference).spectrum;
}

/// Spectrum of X^T X padded with zeros to length n, computed from whichever of
/// X^T X and X X^T is smaller.
template <typename Derived>
Spectrum<typename Derived::Scalar> gram_spectrum(const Eigen::MatrixBase<Derived>& X,
                                                 typename Derived::Scalar reference = 0) {
  using Scalar = typename Derived::Scalar;
  if (X.cols() <= X.rows()) return spectrum(gram(X), reference);
  Spectrum<Scalar> small = spectrum(outer_gram(X), reference);
  Vector<Scalar> padded = Vector<Scalar>::Zero(X.cols());
  padded.head(small.size()) = small.values();
  return Spectrum<Scalar>(std::move(padded));
}

/// ||X - X_(k)||_F^2, the tail eigenvalue sum of X^T X.
template <typename Derived>
typename Derived::Scalar rank_k_error(const Eigen::MatrixBase<Derived>& X, Index k) {
  if (k < 0 || k > std::min(X.rows(), X.cols())) throw InvalidArgumentError("k out of range");
  return gram_spectrum(X).tail_sum(k);
}

/// Orthonormal basis of span(X_C) by modified Gram-Schmidt with one
/// re-orthogonalisation pass. Vectors left with norm below 1e-10 ||X||_F are
/// dropped, so the basis has numerical-rank many columns.
template <typename Derived>
Matrix<typename Derived::Scalar> orthonormal_basis(const Eigen::MatrixBase<Derived>& X, const ColumnSubset& C) {
  using Scalar = typename Derived::Scalar;
  C.check_bounds(X.cols());
  const Scalar drop = Scalar(tol::kBasisDrop) * X.norm();
  Matrix<Scalar> Q(X.rows(), C.size());
  Index rank = 0;
  for (Index j : C) {
    Vector<Scalar> v = X.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < rank; ++i) v -= Q.col(i) * Q.col(i).dot(v);
    const Scalar norm = v.norm();
    if (norm > drop && norm > Scalar(0)) Q.col(rank++) = v / norm;
  }
  return Q.leftCols(rank);
}

/// Tr(X^T X_C^perp X) = ||X - X_C^Pi X||_F^2.
template <typename Derived>
typename Derived::Scalar residual_trace(const Eigen::MatrixBase<Derived>& X, const ColumnSubset& C) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> Q = orthonormal_basis(X, C);
  if (Q.cols() == 0) return X.squaredNorm();
  const Matrix<Scalar> R = X - Q * (Q.transpose() * X);
  return R.squaredNorm();
}

/// Determinant by full-pivot LU.
template <typename Derived>
typename Derived::Scalar pivoted_det(const Eigen::MatrixBase<Derived>& A) {
  if (A.rows() == 0) return typename Derived::Scalar(1);
  return Eigen::FullPivLU<Matrix<typename Derived::Scalar>>(A).determinant();
}

/// ||A^perp x||^2 as det([[A^T A, A^T x], [x^T A, x^T x]]) / det(A^T A).
template <typename DerivedA, typename DerivedX>
typename DerivedA::Scalar squared_distance_det(const Eigen::MatrixBase<DerivedA>& A,
                                               const Eigen::MatrixBase<DerivedX>& x) {
  using Scalar = typename DerivedA::Scalar;
  if (x.size() != A.rows()) throw InvalidArgumentError("dimension mismatch");
  const Index r = A.cols();
  Matrix<Scalar> bordered(r + 1, r + 1);
  bordered.topLeftCorner(r, r) = gram(A);
  bordered.topRightCorner(r, 1) = A.transpose() * x;
  bordered.bottomLeftCorner(1, r) = (A.transpose() * x).transpose();
  bordered(r, r) = x.squaredNorm();

  const Scalar base = pivoted_det(bordered.topLeftCorner(r, r));
  const Scalar hadamard = bordered.topLeftCorner(r, r).diagonal().prod();
  if (!(base > Scalar(tol::kDependent) * hadamard)) throw RankDeficientError("dependent columns");
  return std::max(Scalar(0), pivoted_det(bordered) / base);
}

/// X_j^perp X: removes the direction of column j from every column. A zero
/// column j leaves X unchanged.
template <typename Derived>
Matrix<typename Derived::Scalar> project_out(const Eigen::MatrixBase<Derived>& X, Index j) {
  using Scalar = typename Derived::Scalar;
  if (j < 0 || j >= X.cols()) throw InvalidArgumentError("column index out of range");
  Matrix<Scalar> Y = X;
  const Scalar norm = X.col(j).norm();
  if (norm == Scalar(0)) return Y;
  const Vector<Scalar> z = X.col(j) / norm;
  Y.noalias() -= z * (z.transpose() * X);
  Y.col(j).setZero();
  return Y;
}

/// Symmetric square root: returns X with X^T X = A.
template <typename Derived>
Matrix<typename Derived::Scalar> psd_sqrt(const Eigen::MatrixBase<Derived>& A) {
  const auto eig = sym_eigen(A, true);
  const auto root = eig.spectrum.values().cwiseSqrt();
  return eig.vectors * root.asDiagonal() * eig.vectors.transpose();
}

}  // namespace volcol

#endif  // VOLCOL_LINALG_HPP
