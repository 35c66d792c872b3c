#ifndef VOLCOL_SYMFUNC_HPP
#define VOLCOL_SYMFUNC_HPP

// Elementary symmetric polynomials S_r of spectra and of PSD matrices, the
// ratio S_{r+1}/S_r, and majorization helpers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "volcol/linalg.hpp"

namespace volcol {

namespace detail {

template <typename Derived>
void require_nonnegative(const Eigen::MatrixBase<Derived>& sigma) {
  if (sigma.size() && !(sigma.minCoeff() >= 0)) throw InvalidArgumentError("entries must be non-negative");
}

}  // namespace detail

/// S_0 .. S_rmax of sigma by the one-pass recurrence e_j += sigma_i e_{j-1}.
template <typename Derived>
Vector<typename Derived::Scalar> elem_sym_all(const Eigen::MatrixBase<Derived>& sigma, Index rmax) {
  using Scalar = typename Derived::Scalar;
  if (rmax < 0 || rmax > sigma.size()) throw InvalidArgumentError("order exceeds vector length");
  detail::require_nonnegative(sigma);
  Vector<Scalar> e = Vector<Scalar>::Zero(rmax + 1);
  e[0] = Scalar(1);
  for (Index i = 0; i < sigma.size(); ++i) {
    const Index top = std::min(rmax, i + 1);
    for (Index j = top; j >= 1; --j) e[j] += sigma[i] * e[j - 1];
  }
  return e;
}

template <typename Derived>
typename Derived::Scalar elem_sym(const Eigen::MatrixBase<Derived>& sigma, Index r) {
  return elem_sym_all(sigma, r)[r];
}

/// log S_r(sigma), evaluated with log-sum-exp so that no intermediate over- or
/// underflows. Returns -inf when S_r(sigma) = 0.
template <typename Derived>
typename Derived::Scalar log_elem_sym(const Eigen::MatrixBase<Derived>& sigma, Index r) {
  using Scalar = typename Derived::Scalar;
  if (r < 0 || r > sigma.size()) throw InvalidArgumentError("order exceeds vector length");
  detail::require_nonnegative(sigma);
  constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> le(static_cast<std::size_t>(r + 1), kNegInf);
  le[0] = Scalar(0);
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] == Scalar(0)) continue;
    const Scalar ls = std::log(sigma[i]);
    const Index top = std::min(r, i + 1);
    for (Index j = top; j >= 1; --j) {
      const Scalar add = le[static_cast<std::size_t>(j - 1)] + ls;
      Scalar& cur = le[static_cast<std::size_t>(j)];
      if (add == kNegInf) continue;
      if (cur == kNegInf) {
        cur = add;
      } else {
        const Scalar hi = std::max(cur, add);
        const Scalar lo = std::min(cur, add);
        cur = hi + std::log1p(std::exp(lo - hi));
      }
    }
  }
  return le[static_cast<std::size_t>(r)];
}

/// S_r(A) through the eigenvalues of A.
template <typename Derived>
typename Derived::Scalar elem_sym_matrix(const Eigen::MatrixBase<Derived>& A, Index r) {
  if (r < 0 || r > A.rows()) throw InvalidArgumentError("order exceeds matrix dimension");
  return elem_sym(sym_eigen(A).spectrum.values(), r);
}

/// S_{r+1}(sigma) / S_r(sigma). The vector is normalised to unit sum first and
/// the result rescaled, which is exact by degree-1 homogeneity. S_{r+1} is 0
/// when r + 1 exceeds the length.
template <typename Derived>
typename Derived::Scalar sym_ratio(const Eigen::MatrixBase<Derived>& sigma, Index r) {
  using Scalar = typename Derived::Scalar;
  if (r < 0 || r > sigma.size()) throw InvalidArgumentError("order exceeds vector length");
  detail::require_nonnegative(sigma);
  const Scalar total = sigma.sum();
  if (r == 0) return total;
  if (!(total > Scalar(0))) throw RankDeficientError("rank too low");
  const Vector<Scalar> rho = sigma / total;
  const Index top = std::min(r + 1, rho.size());
  const Vector<Scalar> e = elem_sym_all(rho, top);
  if (!(e[r] > Scalar(0))) throw RankDeficientError("rank too low");
  const Scalar next = (r + 1 <= rho.size()) ? e[r + 1] : Scalar(0);
  return total * (next / e[r]);
}

/// (sum of sigma sorted descending after the k largest) / (r + 1 - k).
template <typename Derived>
typename Derived::Scalar lemma31_bound(const Eigen::MatrixBase<Derived>& sigma, Index k, Index r) {
  using Scalar = typename Derived::Scalar;
  if (k < 1 || k > r || r > sigma.size() - 1) throw InvalidArgumentError("need 1 <= k <= r <= n - 1");
  detail::require_nonnegative(sigma);
  std::vector<Scalar> sorted(sigma.begin(), sigma.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  Scalar tail = 0;
  for (std::size_t i = static_cast<std::size_t>(k); i < sorted.size(); ++i) tail += sorted[i];
  return tail / Scalar(r + 1 - k);
}

/// a majorizes b: sorted-descending prefix sums of a dominate those of b
/// (1e-12 absolute slack) and the totals agree (1e-12 relative).
template <typename DerivedA, typename DerivedB>
bool majorizes(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != b.size()) throw InvalidArgumentError("length mismatch");
  std::vector<Scalar> as(a.begin(), a.end()), bs(b.begin(), b.end());
  std::sort(as.begin(), as.end(), std::greater<Scalar>());
  std::sort(bs.begin(), bs.end(), std::greater<Scalar>());
  Scalar pa = 0, pb = 0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    pa += as[i];
    pb += bs[i];
    if (pa < pb - Scalar(1e-12)) return false;
  }
  const Scalar scale = std::max({std::abs(pa), std::abs(pb), std::numeric_limits<Scalar>::min()});
  return std::abs(pa - pb) <= Scalar(1e-12) * scale;
}

template <typename Scalar>
struct MajorizationPair {
  Vector<Scalar> a;  // a majorizes b
  Vector<Scalar> b;
};

/// Moves fraction * v[from] onto v[to]; with v[to] >= v[from] this spreads the
/// vector out, so the result majorizes the input.
template <typename Scalar>
void reverse_robin_hood(Vector<Scalar>& v, Index to, Index from, Scalar fraction) {
  if (to == from) return;
  if (v[to] < v[from]) std::swap(to, from);
  const Scalar amount = fraction * v[from];
  v[from] -= amount;
  v[to] += amount;
}

/// Random b >= 0, then `transfers` random reverse Robin Hood moves produce a.
template <typename Scalar = double, typename Rng>
MajorizationPair<Scalar> random_majorization_pair(Index n, Rng& rng, Index transfers) {
  if (n < 2) throw InvalidArgumentError("need n >= 2");
  std::uniform_real_distribution<Scalar> unit(Scalar(0), Scalar(1));
  std::uniform_int_distribution<Index> pick(0, n - 1);
  Vector<Scalar> b(n);
  for (Index i = 0; i < n; ++i) b[i] = unit(rng) < Scalar(0.15) ? Scalar(0) : unit(rng);
  Vector<Scalar> a = b;
  for (Index t = 0; t < transfers; ++t) {
    const Index i = pick(rng);
    const Index j = pick(rng);
    reverse_robin_hood(a, i, j, unit(rng));
  }
  return {std::move(a), std::move(b)};
}

}  // namespace volcol

#endif  // VOLCOL_SYMFUNC_HPP
