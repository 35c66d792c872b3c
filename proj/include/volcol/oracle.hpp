#ifndef VOLCOL_ORACLE_HPP
#define VOLCOL_ORACLE_HPP

// Brute-force ground truth by enumerating every r-subset of columns.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "volcol/linalg.hpp"

namespace volcol {

inline constexpr double kDefaultOracleCap = 1e6;

/// Enumeration cap: VOLCOL_ORACLE_CAP if set to a positive number, else 1e6.
inline double default_oracle_cap() {
  if (const char* env = std::getenv("VOLCOL_ORACLE_CAP")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return kDefaultOracleCap;
}

inline double binomial(Index n, Index r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  double c = 1;
  for (Index i = 1; i <= r; ++i) c = c * double(n - r + i) / double(i);
  return std::round(c);
}

/// Calls fn(subset) for every r-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(Index n, Index r, Fn&& fn) {
  if (r < 0 || r > n) return;
  std::vector<Index> idx(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(ColumnSubset(idx));
    Index i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

template <typename Scalar>
struct VolumeDistribution {
  struct Entry {
    ColumnSubset subset;
    Scalar weight;  // det(X_C^T X_C)
    Scalar probability;
  };
  std::vector<Entry> support;  // lexicographic; zero-weight subsets omitted
  Scalar normalizer = 0;       // sum of weights

  Scalar probability(const ColumnSubset& c) const {
    for (const auto& e : support)
      if (e.subset == c) return e.probability;
    return Scalar(0);
  }
};

namespace detail {

inline void check_cap(Index n, Index r, double cap) {
  if (r < 0 || r > n) throw InvalidArgumentError("need 0 <= r <= n");
  if (binomial(n, r) > cap) throw OracleCapError();
}

}  // namespace detail

/// Gram determinants below 1e-14 of their Hadamard bound count as zero.
inline constexpr double kOracleZeroWeight = 1e-14;

template <typename Derived>
VolumeDistribution<typename Derived::Scalar> exact_distribution(const Eigen::MatrixBase<Derived>& X, Index r,
                                                                 double cap = default_oracle_cap()) {
  using Scalar = typename Derived::Scalar;
  require_finite(X);
  detail::check_cap(X.cols(), r, cap);
  const Matrix<Scalar> G = gram(X);

  VolumeDistribution<Scalar> dist;
  for_each_subset(X.cols(), r, [&](const ColumnSubset& c) {
    Matrix<Scalar> sub(r, r);
    for (Index a = 0; a < r; ++a)
      for (Index b = 0; b < r; ++b) sub(a, b) = G(c[a], c[b]);
    const Scalar hadamard = sub.diagonal().prod();
    const Scalar det = pivoted_det(sub);
    if (!(hadamard > Scalar(0)) || !(det > Scalar(kOracleZeroWeight) * hadamard)) return;
    dist.support.push_back({c, det, Scalar(0)});
    dist.normalizer += det;
  });
  if (!(dist.normalizer > Scalar(0))) throw RankDeficientError("rank deficient for r");
  for (auto& e : dist.support) e.probability = e.weight / dist.normalizer;
  return dist;
}

/// E[Tr(X^T X_C^perp X)] under volume sampling, by enumeration.
template <typename Derived>
typename Derived::Scalar exact_expected_trace(const Eigen::MatrixBase<Derived>& X, Index r,
                                              double cap = default_oracle_cap()) {
  using Scalar = typename Derived::Scalar;
  const auto dist = exact_distribution(X, r, cap);
  Scalar total = 0;
  for (const auto& e : dist.support) total += e.probability * residual_trace(X, e.subset);
  return total;
}

/// argmin and min of the residual trace over all r-subsets; the
/// lexicographically first minimiser wins ties.
template <typename Derived>
std::pair<ColumnSubset, typename Derived::Scalar> best_subset(const Eigen::MatrixBase<Derived>& X, Index r,
                                                             double cap = default_oracle_cap()) {
  using Scalar = typename Derived::Scalar;
  require_finite(X);
  detail::check_cap(X.cols(), r, cap);
  ColumnSubset best;
  Scalar best_value = std::numeric_limits<Scalar>::infinity();
  for_each_subset(X.cols(), r, [&](const ColumnSubset& c) {
    const Scalar v = residual_trace(X, c);
    if (v < best_value) {
      best_value = v;
      best = c;
    }
  });
  return {best, best_value};
}

}  // namespace volcol

#endif  // VOLCOL_ORACLE_HPP
