#ifndef VOLCOL_GREEDY_HPP
#define VOLCOL_GREEDY_HPP

// Deterministic column selection by the method of conditional expectations
// over the volume-sampling distribution.

#include <cmath>
#include <limits>
#include <vector>

#include "volcol/linalg.hpp"
#include "volcol/symfunc.hpp"

namespace volcol {

namespace detail {

/// (order + 1) S_{order+1}(sigma) / S_order(sigma): the expected residual trace
/// of volume-sampling `order` more columns from a matrix with Gram spectrum
/// sigma. Order 0 is the trace itself.
template <typename Scalar>
Scalar completion_expectation(const Spectrum<Scalar>& sigma, Index order) {
  if (order == 0) return sigma.sum();
  if (sigma.numerical_rank(Scalar(tol::kRank)) < order) throw RankDeficientError("infeasible completion");
  return Scalar(order + 1) * sym_ratio(sigma.values(), order);
}

template <typename Scalar>
Matrix<Scalar> project_out_all(Matrix<Scalar> Y, const ColumnSubset& T) {
  for (Index j : T) Y = project_out(Y, j);
  return Y;
}

}  // namespace detail

/// E[Tr(X^T X_C^perp X) | T subset of C] under volume sampling of |C| = r.
///
/// With Y = X_T^perp X and t = |T|, det(X_C^T X_C) factors as
/// det(X_T^T X_T) det(Y_S^T Y_S) for C = T + S, and X_C^perp X = Y_S^perp Y,
/// so the conditional law of S is volume sampling of r - t columns of Y and
/// the value is (r - t + 1) S_{r-t+1}(sigma') / S_{r-t}(sigma').
template <typename Derived>
typename Derived::Scalar conditional_expectation(const Eigen::MatrixBase<Derived>& X, const ColumnSubset& T,
                                                 Index r) {
  using Scalar = typename Derived::Scalar;
  require_finite(X);
  T.check_bounds(X.cols());
  if (T.size() > r) throw InvalidArgumentError("|T| exceeds r");
  const Matrix<Scalar> Y = detail::project_out_all<Scalar>(X, T);
  return detail::completion_expectation(gram_spectrum(Y, X.squaredNorm()), r - T.size());
}

enum class CandidateEval {
  OuterUpdate,  // rank-one update of Y Y^T per candidate
  Direct,       // explicit projection and Gram per candidate
};

template <typename Scalar>
struct GreedySelection {
  ColumnSubset chosen;
  // expectations[i] is the conditional expectation after i picks; the first
  // entry is the unconditional volume-sampling expectation.
  std::vector<Scalar> expectations;
};

namespace tol {
inline constexpr double kCandidateNorm = 1e-10;  // relative to ||X||_F
inline constexpr double kTie = 1e-12;            // gap below which candidates tie, relative and on the unit-norm scale
}  // namespace tol

/// Picks r columns one at a time, each minimising the conditional expectation
/// of the final residual trace. Ties go to the smaller index.
template <typename Derived>
GreedySelection<typename Derived::Scalar> greedy_select(const Eigen::MatrixBase<Derived>& X, Index r,
                                                        CandidateEval eval = CandidateEval::OuterUpdate) {
  using Scalar = typename Derived::Scalar;
  require_finite(X);
  if (r < 1 || r > X.cols()) throw InvalidArgumentError("need 1 <= r <= n");
  const Scalar scale = X.stableNorm();
  if (!(scale > Scalar(0))) throw RankDeficientError("rank deficient for r");

  // The objective is homogeneous, so work on X / ||X||_F and rescale.
  Matrix<Scalar> Y = X / scale;
  const Scalar unit = scale * scale;
  const Index n = Y.cols();

  GreedySelection<Scalar> out;
  out.expectations.push_back(unit * detail::completion_expectation(gram_spectrum(Y), r));

  for (Index step = 0; step < r; ++step) {
    const Index remaining = r - step - 1;
    const Matrix<Scalar> W = eval == CandidateEval::OuterUpdate ? outer_gram(Y) : Matrix<Scalar>();

    Index best = -1;
    Scalar best_value = std::numeric_limits<Scalar>::infinity();
    for (Index j = 0; j < n; ++j) {
      if (out.chosen.contains(j)) continue;
      const Scalar norm = Y.col(j).norm();
      if (!(norm > Scalar(tol::kCandidateNorm))) continue;

      Spectrum<Scalar> sigma;
      if (eval == CandidateEval::OuterUpdate) {
        const Vector<Scalar> z = Y.col(j) / norm;
        const Vector<Scalar> w = W * z;
        Matrix<Scalar> Wj = W;
        Wj.noalias() -= z * w.transpose();
        Wj.noalias() -= w * z.transpose();
        Wj.noalias() += (z.dot(w) * z) * z.transpose();
        sigma = spectrum(Matrix<Scalar>((Wj + Wj.transpose()) / Scalar(2)), Scalar(1));
      } else {
        sigma = gram_spectrum(project_out(Y, j), Scalar(1));
      }

      Scalar value;
      try {
        value = detail::completion_expectation(sigma, remaining);
      } catch (const RankDeficientError&) {
        continue;
      }
      const Scalar band = Scalar(tol::kTie) * (std::max(std::abs(best_value), std::abs(value)) + Scalar(1));
      if (best < 0 || value < best_value - band) {
        best = j;
        best_value = value;
      }
    }
    if (best < 0) throw RankDeficientError("rank deficient for r");

    out.chosen = out.chosen.with(best);
    out.expectations.push_back(unit * best_value);
    Y = project_out(Y, best);
  }
  return out;
}

}  // namespace volcol

#endif  // VOLCOL_GREEDY_HPP
