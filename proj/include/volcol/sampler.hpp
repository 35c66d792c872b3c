#ifndef VOLCOL_SAMPLER_HPP
#define VOLCOL_SAMPLER_HPP

// Exact volume sampling: C is drawn with probability det(X_C^T X_C) / S_r(X^T X).
//
// Columns are picked lowest index first. Round i draws the smallest remaining
// index by inverse-CDF binary search over suffix masses S_{r'}(W_l), where
// W_l = Y_[l,n) Y_[l,n)^T is kept in a table of outer products of the working
// matrix Y (previously chosen columns projected out) and r' = r - i + 1.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <unordered_map>
#include <vector>

#include "volcol/linalg.hpp"
#include "volcol/symfunc.hpp"

namespace volcol {

/// Uniform doubles in [0, 1) from mt19937_64: the top 53 bits of each 64-bit
/// output, times 2^-53. The stream is fully determined by the seed.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed = 0) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Table of suffix outer products W_l = X_[l,n) X_[l,n)^T for l = 0..n, with
/// W_n = 0, alongside the working matrix they were built from.
template <typename Scalar>
class SuffixOuterTable {
 public:
  explicit SuffixOuterTable(Matrix<Scalar> X) : x_(std::move(X)) {
    entries_.assign(static_cast<std::size_t>(x_.cols() + 1), Matrix<Scalar>::Zero(x_.rows(), x_.rows()));
    rebuild(0);
  }

  Index rows() const { return x_.rows(); }
  Index cols() const { return x_.cols(); }
  const Matrix<Scalar>& working() const { return x_; }
  const Matrix<Scalar>& entry(Index l) const { return entries_.at(static_cast<std::size_t>(l)); }

  /// Recomputes entries first..n from the working matrix.
  void rebuild(Index first) {
    const Index n = cols();
    entries_[static_cast<std::size_t>(n)].setZero();
    for (Index l = n - 1; l >= first; --l) {
      Matrix<Scalar>& w = entries_[static_cast<std::size_t>(l)];
      w = entries_[static_cast<std::size_t>(l + 1)];
      w.template selfadjointView<Eigen::Lower>().rankUpdate(x_.col(l));
      w.template triangularView<Eigen::StrictlyUpper>() = w.transpose();
    }
  }

  /// Replaces the working matrix by X_l^perp X and every entry from `first` on
  /// by the outer product of its projected suffix, using
  ///   W' = W - z w^T - w z^T + (z^T w) z z^T,   w = W z,  z = X_l / ||X_l||.
  void rank_one_update(Index l, Index first = 0) {
    if (l < 0 || l >= cols()) throw InvalidArgumentError("column index out of range");
    const Scalar norm = x_.col(l).norm();
    if (!(norm > Scalar(0))) throw RankDeficientError("degenerate pivot");
    const Vector<Scalar> z = x_.col(l) / norm;
    for (Index e = first; e <= cols(); ++e) {
      Matrix<Scalar>& W = entries_[static_cast<std::size_t>(e)];
      const Vector<Scalar> w = W * z;
      const Scalar s = z.dot(w);
      W.noalias() -= z * w.transpose();
      W.noalias() -= w * z.transpose();
      W.noalias() += (s * z) * z.transpose();
      W.template triangularView<Eigen::StrictlyUpper>() = W.transpose();
    }
    x_.noalias() -= z * (z.transpose() * x_);
    x_.col(l).setZero();
  }

  /// Max over l of ||W_l - W_{l+1} - X_l X_l^T||_max, relative to ||W_0||_max.
  Scalar telescoping_defect() const {
    Scalar worst = 0;
    const Scalar scale = std::max(entries_.front().cwiseAbs().maxCoeff(), std::numeric_limits<Scalar>::min());
    for (Index l = 0; l < cols(); ++l) {
      const Matrix<Scalar> d = entry(l) - entry(l + 1) - x_.col(l) * x_.col(l).transpose();
      worst = std::max(worst, d.cwiseAbs().maxCoeff() / scale);
    }
    return worst;
  }

 private:
  Matrix<Scalar> x_;
  std::vector<Matrix<Scalar>> entries_;
};

template <typename Derived>
SuffixOuterTable<typename Derived::Scalar> build_table(const Eigen::MatrixBase<Derived>& X) {
  return SuffixOuterTable<typename Derived::Scalar>(X);
}

template <typename Scalar>
SuffixOuterTable<Scalar> table_rank_one_update(SuffixOuterTable<Scalar> table, Index l) {
  table.rank_one_update(l);
  return table;
}

struct SampleRound {
  double draw;             // uniform in [0, 1)
  double log_total_mass;   // log S_{r'}(W_p) of the Frobenius-normalised matrix
  Index index;             // column chosen this round
  double cell_probability; // conditional probability of that column in this round
  double residual;         // threshold left inside the chosen cell, as a fraction of the total
};

struct SampleTrace {
  ColumnSubset chosen;
  std::vector<SampleRound> rounds;
};

struct SampleTimings {
  double build_seconds = 0;
  double search_seconds = 0;
  double update_seconds = 0;
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> frobenius_normalised(const Matrix<Scalar>& X) {
  const Scalar norm = X.stableNorm();
  if (!(norm > Scalar(0))) throw RankDeficientError("rank deficient for r");
  return X / norm;
}

/// Suffix masses of one sampling round, relative to the round's total:
/// f(l) = S_order(W_l) / S_order(W_start), with f(l) = 0 past the last start
/// that leaves room for `order` columns.
template <typename Scalar>
class RoundMasses {
 public:
  RoundMasses(const SuffixOuterTable<Scalar>& table, Index start, Index order)
      : table_(table), start_(start), order_(order) {
    log_total_ = log_mass(start);
  }

  Scalar log_total() const { return log_total_; }
  Index last_start() const { return table_.cols() - order_; }

  Scalar fraction(Index l) {
    if (l == start_) return Scalar(1);
    if (l > last_start()) return Scalar(0);
    return std::exp(log_mass(l) - log_total_);
  }

 private:
  Scalar log_mass(Index l) {
    if (auto it = cache_.find(l); it != cache_.end()) return it->second;
    const Index suffix = table_.cols() - l;
    Scalar value;
    if (suffix < table_.rows()) {
      // Same nonzero spectrum as W_l, on the smaller side.
      value = log_elem_sym(spectrum(gram(table_.working().rightCols(suffix)), Scalar(1)).values(), order_);
    } else {
      value = log_elem_sym(spectrum(table_.entry(l), Scalar(1)).values(), order_);
    }
    cache_.emplace(l, value);
    return value;
  }

  const SuffixOuterTable<Scalar>& table_;
  Index start_;
  Index order_;
  Scalar log_total_;
  std::unordered_map<Index, Scalar> cache_;
};

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Scalar>
void check_sampleable(const Matrix<Scalar>& Xn, Index r) {
  if (r < 1 || r > Xn.cols()) throw InvalidArgumentError("need 1 <= r <= n");
  if (gram_spectrum(Xn).numerical_rank(Scalar(tol::kRank)) < r) throw RankDeficientError("rank deficient for r");
}

}  // namespace detail

/// Draws r columns with probability det(X_C^T X_C) / sum_T det(X_T^T X_T).
///
/// X is scaled to unit Frobenius norm first, which leaves the distribution
/// unchanged. Each round draws a fresh uniform and uses order r' = r - i + 1.
/// The table is rebuilt from the explicitly projected working matrix after
/// every ceil(n/4) rank-one updates.
template <typename Derived>
SampleTrace volume_sample(const Eigen::MatrixBase<Derived>& X, Index r, UniformSource& rng,
                          SampleTimings* timings = nullptr) {
  using Scalar = typename Derived::Scalar;
  using Clock = std::chrono::steady_clock;
  require_finite(X);
  Matrix<Scalar> Xn = detail::frobenius_normalised<Scalar>(X);
  detail::check_sampleable(Xn, r);

  const Index n = Xn.cols();
  const Index refresh_every = (n + 3) / 4;
  Index since_refresh = 0;

  auto t0 = Clock::now();
  SuffixOuterTable<Scalar> table(std::move(Xn));
  if (timings) timings->build_seconds += detail::seconds_since(t0);

  SampleTrace trace;
  std::vector<Index> chosen;
  Index start = 0;
  for (Index round = 0; round < r; ++round) {
    const Index order = r - round;
    t0 = Clock::now();
    detail::RoundMasses<Scalar> masses(table, start, order);
    if (!std::isfinite(masses.log_total())) throw Error("internal invariant violated: zero-mass suffix");

    const double draw = rng.next();
    Scalar t = draw;
    Index lo = start;
    Index hi = masses.last_start();
    while (lo != hi) {
      const Index mid = lo + (hi - lo) / 2;
      const Scalar h = masses.fraction(lo) - masses.fraction(mid + 1);
      if (t > h) {
        t -= h;
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    const Scalar cell = masses.fraction(lo) - masses.fraction(lo + 1);
    trace.rounds.push_back({draw, static_cast<double>(masses.log_total()), lo, static_cast<double>(cell),
                            static_cast<double>(t)});
    chosen.push_back(lo);
    if (timings) timings->search_seconds += detail::seconds_since(t0);

    if (round + 1 < r) {
      t0 = Clock::now();
      table.rank_one_update(lo, lo + 1);
      if (++since_refresh >= refresh_every) {
        table.rebuild(lo + 1);
        since_refresh = 0;
      }
      if (timings) timings->update_seconds += detail::seconds_since(t0);
    }
    start = lo + 1;
  }
  trace.chosen = ColumnSubset(std::move(chosen));
  return trace;
}

/// Probability that volume_sample returns C, obtained by replaying its rounds
/// and multiplying the chosen cells' conditional masses.
template <typename Derived>
typename Derived::Scalar path_probability(const Eigen::MatrixBase<Derived>& X, const ColumnSubset& C) {
  using Scalar = typename Derived::Scalar;
  require_finite(X);
  C.check_bounds(X.cols());
  const Index r = C.size();
  Matrix<Scalar> Xn = detail::frobenius_normalised<Scalar>(X);
  detail::check_sampleable(Xn, r);

  SuffixOuterTable<Scalar> table(std::move(Xn));
  Scalar probability = 1;
  Index start = 0;
  for (Index round = 0; round < r; ++round) {
    const Index l = C[round];
    detail::RoundMasses<Scalar> masses(table, start, r - round);
    if (!std::isfinite(masses.log_total()) || l > masses.last_start()) return Scalar(0);
    const Scalar cell = masses.fraction(l) - masses.fraction(l + 1);
    if (!(cell > Scalar(0))) return Scalar(0);
    probability *= cell;
    if (round + 1 < r) {
      if (!(table.working().col(l).norm() > Scalar(0))) return Scalar(0);
      table.rank_one_update(l, l + 1);
    }
    start = l + 1;
  }
  return probability;
}

/// Pr[min C = j] = ||X_j||^2 S_{r-1}(Gram of X_j^perp X_(j,n)) / S_r(X^T X).
template <typename Derived>
typename Derived::Scalar first_column_marginal(const Eigen::MatrixBase<Derived>& X, Index r, Index j) {
  using Scalar = typename Derived::Scalar;
  require_finite(X);
  if (j < 0 || j >= X.cols()) throw InvalidArgumentError("column index out of range");
  const Matrix<Scalar> Xn = detail::frobenius_normalised<Scalar>(X);
  detail::check_sampleable(Xn, r);

  const Scalar log_total = log_elem_sym(gram_spectrum(Xn).values(), r);
  const Scalar head = Xn.col(j).squaredNorm();
  if (head == Scalar(0)) return Scalar(0);
  if (r == 1) return std::exp(std::log(head) - log_total);

  const Index rest = Xn.cols() - j - 1;
  if (rest < r - 1) return Scalar(0);
  const Matrix<Scalar> Y = project_out(Xn, j).rightCols(rest);
  const Scalar log_rest = log_elem_sym(gram_spectrum(Y, Scalar(1)).values(), r - 1);
  return std::exp(std::log(head) + log_rest - log_total);
}

}  // namespace volcol

#endif  // VOLCOL_SAMPLER_HPP
