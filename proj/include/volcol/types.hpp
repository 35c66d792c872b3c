#ifndef VOLCOL_TYPES_HPP
#define VOLCOL_TYPES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace volcol {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Error hierarchy. The CLI maps each kind onto its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class NotSymmetricError : public Error {
 public:
  NotSymmetricError() : Error("not symmetric") {}
};

class NotPsdError : public Error {
 public:
  NotPsdError() : Error("not PSD") {}
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class OracleCapError : public Error {
 public:
  OracleCapError() : Error("instance too large for oracle") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A strictly increasing list of column indices.
class ColumnSubset {
 public:
  ColumnSubset() = default;

  explicit ColumnSubset(std::vector<Index> indices) : indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] < 0)
        throw InvalidArgumentError("column index must be non-negative");
      if (i > 0 && indices_[i] <= indices_[i - 1])
        throw InvalidArgumentError("column indices must be strictly increasing");
    }
  }

  ColumnSubset(std::initializer_list<Index> indices)
      : ColumnSubset(std::vector<Index>(indices)) {}

  /// Sorts and validates an arbitrary list; duplicates are rejected.
  static ColumnSubset from_unsorted(std::vector<Index> indices) {
    std::sort(indices.begin(), indices.end());
    return ColumnSubset(std::move(indices));
  }

  /// {0, 1, ..., count - 1}
  static ColumnSubset prefix(Index count) {
    std::vector<Index> idx(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = i;
    return ColumnSubset(std::move(idx));
  }

  const std::vector<Index>& indices() const { return indices_; }
  Index size() const { return static_cast<Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  Index operator[](Index i) const { return indices_[static_cast<std::size_t>(i)]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(Index j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
  }

  ColumnSubset with(Index j) const {
    if (contains(j)) throw InvalidArgumentError("column already in subset");
    std::vector<Index> idx = indices_;
    idx.insert(std::upper_bound(idx.begin(), idx.end(), j), j);
    return ColumnSubset(std::move(idx));
  }

  void check_bounds(Index n) const {
    if (!indices_.empty() && indices_.back() >= n)
      throw InvalidArgumentError("column index out of range");
  }

  friend bool operator==(const ColumnSubset&, const ColumnSubset&) = default;
  friend auto operator<=>(const ColumnSubset&, const ColumnSubset&) = default;

 private:
  std::vector<Index> indices_;
};

inline std::string to_string(const ColumnSubset& c) {
  std::string s = "{";
  for (Index i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + "}";
}

/// Columns of X selected by C, in the order of C.
template <typename Derived>
Matrix<typename Derived::Scalar> columns(const Eigen::MatrixBase<Derived>& X, const ColumnSubset& C) {
  C.check_bounds(X.cols());
  Matrix<typename Derived::Scalar> out(X.rows(), C.size());
  for (Index i = 0; i < C.size(); ++i) out.col(i) = X.col(C[i]);
  return out;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& X) {
  if (X.rows() < 1 || X.cols() < 1) throw InvalidArgumentError("matrix must be at least 1x1");
  if (!X.allFinite()) throw InvalidArgumentError("matrix has non-finite entries");
}

}  // namespace volcol

#endif  // VOLCOL_TYPES_HPP
