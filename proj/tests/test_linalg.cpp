#include <gtest/gtest.h>

#include "test_util.hpp"
#include "volcol/hardness.hpp"
#include "volcol/linalg.hpp"

using namespace volcol;
using namespace volcol::testing;

TEST(Gram, IdentityAndSingleColumn) {
  EXPECT_TRUE(gram(Mat::Identity(2, 2)).isApprox(Mat::Identity(2, 2)));
  Mat x(2, 1);
  x << 3, 4;
  const Mat G = gram(x);
  ASSERT_EQ(G.rows(), 1);
  EXPECT_DOUBLE_EQ(G(0, 0), 25.0);
}

TEST(Gram, MatchesNaiveLoopAndIsSymmetric) {
  std::mt19937_64 rng(11);
  const Mat X = random_matrix(4, 6, rng);
  const Mat G = gram(X);
  EXPECT_LE((G - naive_gram(X)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ((G - G.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((outer_gram(X) - X * X.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SymEigen, KnownSpectra) {
  const auto m = sym_eigen(make_M<double>(3, 0.5)).spectrum;
  ASSERT_EQ(m.size(), 3);
  EXPECT_NEAR(m[0], 3.5, 1e-13);
  EXPECT_NEAR(m[1], 0.5, 1e-13);
  EXPECT_NEAR(m[2], 0.5, 1e-13);

  const auto id = sym_eigen(Mat::Identity(4, 4)).spectrum;
  for (Index i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(id[i], 1.0);

  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 1, 5, 2;
  const auto ds = sym_eigen(d).spectrum;
  EXPECT_DOUBLE_EQ(ds[0], 5.0);
  EXPECT_DOUBLE_EQ(ds[1], 2.0);
  EXPECT_DOUBLE_EQ(ds[2], 1.0);
}

TEST(SymEigen, RejectsNonSymmetric) {
  Mat A(2, 2);
  A << 1, 2, 0, 1;
  EXPECT_THROW(sym_eigen(A), NotSymmetricError);
  try {
    sym_eigen(A);
  } catch (const NotSymmetricError& e) {
    EXPECT_STREQ(e.what(), "not symmetric");
  }
}

TEST(SymEigen, RejectsClearlyIndefinite) {
  Mat A = Mat::Identity(3, 3);
  A(2, 2) = -1;
  EXPECT_THROW(sym_eigen(A), NotPsdError);
}

TEST(SymEigen, ClampsRoundoffNegatives) {
  // Rank-2 Gram of 3 columns: the zero eigenvalue comes out as +-eps.
  std::mt19937_64 rng(5);
  const Mat X = random_matrix(2, 3, rng);
  const auto s = sym_eigen(gram(X)).spectrum;
  EXPECT_GE(s[2], 0.0);
  EXPECT_LE(s[2], 1e-14 * s[0]);
}

TEST(SymEigen, ResidualsTraceAndOrderingOnRandomPsd) {
  std::mt19937_64 rng(7);
  for (Index n : {1, 2, 5, 9, 16, 30}) {
    const Mat A = random_psd(n, rng);
    const auto eig = sym_eigen(A, true);
    const Vec& v = eig.spectrum.values();
    for (Index i = 0; i < n; ++i) {
      const Vec res = A * eig.vectors.col(i) - v[i] * eig.vectors.col(i);
      EXPECT_LE(res.norm(), 1e-8 * A.norm()) << "n=" << n << " i=" << i;
      if (i > 0) EXPECT_GE(v[i - 1], v[i]);
    }
    EXPECT_TRUE(rel_close(v.sum(), A.trace(), 1e-10));
    EXPECT_LE((eig.vectors.transpose() * eig.vectors - Mat::Identity(n, n)).norm(), 1e-10);
  }
}

TEST(SymEigen, JacobiAgreesWithTridiagonalRoute) {
  std::mt19937_64 rng(8);
  for (Index n : {20, 25, 40, 60}) {
    const Mat A = random_psd(n, rng);
    const Vec jac = sym_eigen(A).spectrum.values();
    const Vec fast = spectrum(A).values();
    EXPECT_LE((jac - fast).cwiseAbs().maxCoeff(), 1e-10 * jac[0]) << "n=" << n;
  }
}

TEST(RankKError, BlockInstanceAndIdentity) {
  HardInstanceSpec<double> spec{2, 3, 0.5};
  const Mat X = make_block_instance(spec);
  EXPECT_TRUE(rel_close(rank_k_error(X, 2), (6 - 2) * 0.5, 1e-8));
  EXPECT_NEAR(rank_k_error(Mat::Identity(4, 4), 4), 0.0, 1e-15);
  EXPECT_TRUE(rel_close(rank_k_error(Mat::Identity(4, 4), 0), 4.0, 1e-14));
}

TEST(RankKError, MatchesTruncatedSvd) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat X = random_matrix(5, 7, rng);
    for (Index k = 0; k <= 5; ++k)
      EXPECT_TRUE(rel_close(rank_k_error(X, k), svd_rank_k_error(X, k), 1e-9, 1e-12 * X.squaredNorm()))
          << "k=" << k;
  }
}

TEST(RankKError, EqualsTailOfGramSpectrum) {
  std::mt19937_64 rng(14);
  const Mat X = random_matrix(4, 6, rng);
  const Vec s = sym_eigen(gram(X)).spectrum.values();
  for (Index k = 0; k <= 4; ++k) EXPECT_NEAR(rank_k_error(X, k), s.tail(6 - k).sum(), 1e-12);
}

TEST(RankKError, RejectsOutOfRangeK) {
  EXPECT_THROW(rank_k_error(Mat::Identity(2, 3), 3), InvalidArgumentError);
  EXPECT_THROW(rank_k_error(Mat::Identity(2, 3), -1), InvalidArgumentError);
}

TEST(ResidualTrace, IdentityColumns) {
  for (Index r = 0; r <= 5; ++r) EXPECT_NEAR(residual_trace(Mat::Identity(5, 5), ColumnSubset::prefix(r)), 5.0 - r, 1e-14);
}

TEST(ResidualTrace, SingleBlockHardInstance) {
  const double delta = 0.5;
  const Mat X = make_block_instance(HardInstanceSpec<double>{1, 6, delta});
  for (Index r = 1; r <= 5; ++r) {
    const double expected = (6.0 - r) * delta * (1 + 1 / (r + delta));
    EXPECT_TRUE(rel_close(residual_trace(X, ColumnSubset::prefix(r)), expected, 1e-10)) << "r=" << r;
  }
}

TEST(ResidualTrace, MatchesDeterminantRatioSum) {
  std::mt19937_64 rng(21);
  const Mat X = random_matrix(4, 6, rng);
  const ColumnSubset C{0, 2};
  const Mat A = columns(X, C);
  double total = 0;
  for (Index u = 0; u < 6; ++u)
    if (!C.contains(u)) total += squared_distance_det(A, X.col(u));
  EXPECT_TRUE(rel_close(residual_trace(X, C), total, 1e-10));
}

TEST(ResidualTrace, RankDeficientSubsetAndFullSpan) {
  std::mt19937_64 rng(22);
  Mat X = random_matrix(3, 5, rng);
  X.col(1) = 2.0 * X.col(0);
  // Duplicate direction contributes nothing extra.
  EXPECT_TRUE(rel_close(residual_trace(X, ColumnSubset{0, 1}), residual_trace(X, ColumnSubset{0}), 1e-10));
  // Three generic columns span R^3.
  EXPECT_LE(residual_trace(X, ColumnSubset{0, 2, 3}), 1e-24 * X.squaredNorm() + 1e-28);
  EXPECT_TRUE(rel_close(residual_trace(X, ColumnSubset{}), X.squaredNorm(), 1e-15));
}

TEST(ResidualTrace, PythagorasAndMonotonicity) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Index m = 2 + trial % 5, n = 3 + trial % 6;
    const Mat X = random_matrix(m, n, rng);
    std::vector<Index> idx;
    for (Index j = 0; j < n; ++j)
      if (rng() % 2) idx.push_back(j);
    const ColumnSubset C(idx);
    const double res = residual_trace(X, C);
    const double proj = X.squaredNorm() - pinv_residual(X, C);
    EXPECT_TRUE(rel_close(res + proj, X.squaredNorm(), 1e-8));
    EXPECT_TRUE(rel_close(res, pinv_residual(X, C), 1e-8, 1e-12 * X.squaredNorm()));
    for (Index j = 0; j < n; ++j) {
      if (C.contains(j)) continue;
      EXPECT_LE(residual_trace(X, C.with(j)), res + 1e-10 * X.squaredNorm());
    }
  }
}

TEST(SquaredDistanceDet, AxisAndSpanCases) {
  Mat e1(2, 1);
  e1 << 1, 0;
  Vec x(2);
  x << 3, 4;
  EXPECT_NEAR(squared_distance_det(e1, x), 16.0, 1e-12);

  std::mt19937_64 rng(30);
  const Mat A = random_matrix(4, 2, rng);
  const Vec in_span = A * Vec::Ones(2);
  EXPECT_NEAR(squared_distance_det(A, in_span), 0.0, 1e-12 * in_span.squaredNorm());
}

TEST(SquaredDistanceDet, MatchesNormalEquations) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat A = random_matrix(5, 2, rng);
    const Mat x = random_matrix(5, 1, rng);
    EXPECT_TRUE(rel_close(squared_distance_det(A, x.col(0)), projection_distance(A, x.col(0)), 1e-8));
  }
}

TEST(SquaredDistanceDet, RejectsDependentColumns) {
  Mat A(3, 2);
  A << 1, 2, 1, 2, 0, 0;
  Vec x = Vec::Ones(3);
  EXPECT_THROW(squared_distance_det(A, x), RankDeficientError);
}

TEST(ProjectOut, IdentityAndIdempotence) {
  const Mat Y = project_out(Mat::Identity(3, 3), 0);
  EXPECT_EQ(Y.col(0).norm(), 0.0);
  EXPECT_TRUE(Y.rightCols(2).isApprox(Mat::Identity(3, 3).rightCols(2)));

  std::mt19937_64 rng(40);
  const Mat X = random_matrix(4, 6, rng);
  const Mat once = project_out(X, 2);
  EXPECT_EQ(project_out(once, 2), once);
  EXPECT_LE((X.col(2).transpose() * once).cwiseAbs().maxCoeff(), 1e-10 * X.norm() * X.col(2).norm());
}

TEST(ProjectOut, ZeroColumnLeavesMatrixUnchanged) {
  std::mt19937_64 rng(41);
  Mat X = random_matrix(3, 4, rng);
  X.col(1).setZero();
  EXPECT_EQ(project_out(X, 1), X);
}

TEST(ProjectOut, ConsistentWithResidualTrace) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat X = random_matrix(4, 6, rng);
    const Index j = trial % 6;
    EXPECT_TRUE(rel_close(residual_trace(X, ColumnSubset{j}), project_out(X, j).squaredNorm(), 1e-12));
  }
}

TEST(PsdSqrt, DiagonalIdentityAndM) {
  EXPECT_TRUE(psd_sqrt(Mat::Identity(3, 3)).isApprox(Mat::Identity(3, 3)));
  Mat d = Mat::Zero(2, 2);
  d.diagonal() << 4, 9;
  const Mat r = psd_sqrt(d);
  EXPECT_NEAR(r(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-14);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-14);

  const Mat M = make_M<double>(3, 0.5);
  const Mat X = psd_sqrt(M);
  EXPECT_LE((X.transpose() * X - M).norm(), 1e-8 * M.norm());
  const Vec sv = Eigen::JacobiSVD<Mat>(X).singularValues();
  EXPECT_NEAR(sv[0], std::sqrt(3.5), 1e-12);
  EXPECT_NEAR(sv[1], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(sv[2], std::sqrt(0.5), 1e-12);
}

TEST(PsdSqrt, RejectsIndefinite) {
  Mat A(2, 2);
  A << 1, 2, 2, 1;  // eigenvalues 3, -1
  EXPECT_THROW(psd_sqrt(A), NotPsdError);
}

TEST(ColumnSubsetType, ValidatesOrdering) {
  EXPECT_THROW(ColumnSubset({2, 1}), InvalidArgumentError);
  EXPECT_THROW(ColumnSubset({1, 1}), InvalidArgumentError);
  EXPECT_THROW(ColumnSubset({-1}), InvalidArgumentError);
  const ColumnSubset c = ColumnSubset::from_unsorted({4, 0, 2});
  EXPECT_EQ(c, (ColumnSubset{0, 2, 4}));
  EXPECT_EQ(c.with(3), (ColumnSubset{0, 2, 3, 4}));
  EXPECT_THROW(c.with(2), InvalidArgumentError);
  EXPECT_THROW(c.check_bounds(4), InvalidArgumentError);
}

TEST(ColumnSubsetType, ExtractionPreservesOrder) {
  std::mt19937_64 rng(50);
  const Mat X = random_matrix(3, 5, rng);
  const Mat XC = columns(X, ColumnSubset{1, 3, 4});
  EXPECT_EQ(XC.col(0), X.col(1));
  EXPECT_EQ(XC.col(1), X.col(3));
  EXPECT_EQ(XC.col(2), X.col(4));
}
