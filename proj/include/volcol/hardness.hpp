#ifndef VOLCOL_HARDNESS_HPP
#define VOLCOL_HARDNESS_HPP

// Lower-bound instances: X with X^T X = I_k (x) (delta I + J), where every
// column subset is equally uninformative within a block.

#include "volcol/linalg.hpp"

namespace volcol {

template <typename Scalar = double>
struct HardInstanceSpec {
  Index blocks = 1;      // k
  Index block_size = 2;  // n0
  Scalar delta = Scalar(1e-3);

  Index n() const { return blocks * block_size; }

  void validate() const {
    if (blocks < 1) throw InvalidArgumentError("need at least one block");
    if (block_size < 2) throw InvalidArgumentError("block size must be at least 2");
    if (!(delta > Scalar(0)) || !std::isfinite(delta)) throw InvalidArgumentError("delta must be positive");
  }
};

/// delta I + J of size m.
template <typename Scalar = double>
Matrix<Scalar> make_M(Index m, Scalar delta) {
  if (m < 1) throw InvalidArgumentError("need m >= 1");
  if (!(delta > Scalar(0))) throw InvalidArgumentError("delta must be positive");
  Matrix<Scalar> M = Matrix<Scalar>::Ones(m, m);
  M.diagonal().array() += delta;
  return M;
}

/// Block-diagonal Gram with `blocks` copies of make_M(block_size, delta).
template <typename Scalar>
Matrix<Scalar> make_block_gram(const HardInstanceSpec<Scalar>& spec) {
  spec.validate();
  const Index n0 = spec.block_size;
  Matrix<Scalar> G = Matrix<Scalar>::Zero(spec.n(), spec.n());
  const Matrix<Scalar> M = make_M<Scalar>(n0, spec.delta);
  for (Index b = 0; b < spec.blocks; ++b) G.block(b * n0, b * n0, n0, n0) = M;
  return G;
}

/// n x n matrix whose Gram is the block instance; the square root is taken
/// block by block.
template <typename Scalar>
Matrix<Scalar> make_block_instance(const HardInstanceSpec<Scalar>& spec) {
  spec.validate();
  const Index n0 = spec.block_size;
  const Matrix<Scalar> root = psd_sqrt(make_M<Scalar>(n0, spec.delta));
  Matrix<Scalar> X = Matrix<Scalar>::Zero(spec.n(), spec.n());
  for (Index b = 0; b < spec.blocks; ++b) X.block(b * n0, b * n0, n0, n0) = root;
  return X;
}

/// Residual trace of any r columns when X^T X = delta I + J of size n:
/// (n - r) delta (1 + 1 / (r + delta)).
template <typename Scalar>
Scalar predicted_single_block_residual(Index n, Index r, Scalar delta) {
  if (r < 0 || r >= n) throw InvalidArgumentError("need 0 <= r < n");
  if (!(delta > Scalar(0))) throw InvalidArgumentError("delta must be positive");
  return Scalar(n - r) * delta * (Scalar(1) + Scalar(1) / (Scalar(r) + delta));
}

/// Jensen lower bound on residual / rank-k error over all r-subsets of the
/// block instance: (n - r)/(n - k) (1 + 1/(delta + r/k)).
template <typename Scalar>
Scalar predicted_block_ratio(const HardInstanceSpec<Scalar>& spec, Index r) {
  spec.validate();
  const Index n = spec.n();
  const Index k = spec.blocks;
  if (r < k || r > n - 1) throw InvalidArgumentError("need k <= r <= n - 1");
  return Scalar(n - r) / Scalar(n - k) * (Scalar(1) + Scalar(1) / (spec.delta + Scalar(r) / Scalar(k)));
}

}  // namespace volcol

#endif  // VOLCOL_HARDNESS_HPP
