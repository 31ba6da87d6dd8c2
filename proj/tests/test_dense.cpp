#include <gtest/gtest.h>

#include <cmath>

#include "ortho/dense.hpp"
#include "ortho/errors.hpp"
#include "ortho/testgen.hpp"
#include "test_util.hpp"

namespace ortho {
namespace {

using test::kU;

TEST(HouseholderQR, IdentityIsFixed) {
  const auto qr = householder_qr(Matrix<double>::identity(3), true);
  EXPECT_LT(test::max_diff(qr.q, Matrix<double>::identity(3)), 1e-15);
  EXPECT_LT(test::max_diff(qr.r, Matrix<double>::identity(3)), 1e-15);
}

TEST(HouseholderQR, PythagoreanColumn) {
  const auto qr = householder_qr(Matrix<double>{{3}, {4}}, true);
  EXPECT_NEAR(qr.r(0, 0), 5.0, 1e-15);
  EXPECT_NEAR(qr.q(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(qr.q(1, 0), 0.8, 1e-15);
}

TEST(HouseholderQR, RejectsWideInput) { EXPECT_THROW(householder_qr(Matrix<double>(2, 3)), DimensionError); }

template <class T>
void check_qr(Index m, Index n, std::uint64_t seed, bool nonneg) {
  const Matrix<T> a = test::gaussian<T>(m, n, seed);
  const QRPair<T> qr = householder_qr(a, nonneg);
  const double bound = 100.0 * static_cast<double>(n) * kU;
  EXPECT_LT(test::oracle_defect(qr.q), bound);
  EXPECT_LT(test::oracle_norm2(a - matmul(qr.q, qr.r)), bound * test::oracle_norm2(a));
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) EXPECT_EQ(qr.r(i, j), T(0));
  if (nonneg)
    for (Index j = 0; j < n; ++j) {
      EXPECT_GE(real_part(qr.r(j, j)), 0.0);
      if constexpr (is_complex_v<T>) EXPECT_EQ(qr.r(j, j).imag(), 0.0);
    }

  // R agrees with Eigen's Householder QR up to the row phases
  Eigen::HouseholderQR<test::EMat<T>> ref(test::to_eigen(a));
  const test::EMat<T> rref = ref.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const double d1 = std::abs(qr.r(i, i)), d2 = std::abs(rref(i, i));
    EXPECT_NEAR(d1, d2, 1e-12 * d2);
    const T ph = (qr.r(i, i) / d1) / (rref(i, i) / d2);
    for (Index j = i; j < n; ++j) EXPECT_NEAR(std::abs(qr.r(i, j) - ph * rref(i, j)), 0.0, 1e-12 * std::sqrt(m));
  }
}

TEST(HouseholderQR, RandomRealMatchesOracle) { check_qr<double>(50, 10, 3, false); }
TEST(HouseholderQR, RandomRealNonnegDiag) { check_qr<double>(120, 40, 4, true); }
TEST(HouseholderQR, RandomComplexMatchesOracle) { check_qr<cplx>(60, 20, 5, false); }
TEST(HouseholderQR, RandomComplexNonnegDiag) { check_qr<cplx>(80, 30, 6, true); }

TEST(HouseholderQR, ZeroColumnGivesOrthonormalQ) {
  Matrix<double> a = test::gaussian<double>(10, 3, 9);
  for (Index i = 0; i < 10; ++i) a(i, 1) = 0.0;
  const auto qr = householder_qr(a);
  EXPECT_LT(test::oracle_defect(qr.q), 1e-14);
  EXPECT_LT(test::oracle_norm2(a - matmul(qr.q, qr.r)), 1e-14 * test::oracle_norm2(a));
}

TEST(Cholesky, ScaledIdentity) {
  const auto l = cholesky(Matrix<double>::identity(2) * 4.0);
  EXPECT_LT(test::max_diff(l, Matrix<double>::identity(2) * 2.0), 1e-15);
}

TEST(Cholesky, TwoByTwoByHand) {
  const auto l = cholesky(Matrix<double>{{2, 1}, {1, 2}});
  EXPECT_NEAR(l(0, 0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(l(1, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(l(1, 1), std::sqrt(1.5), 1e-15);
  EXPECT_EQ(l(0, 1), 0.0);
}

TEST(Cholesky, IndefiniteThrowsWithStep) {
  try {
    cholesky(Matrix<double>{{1, 2}, {2, 1}});
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(Cholesky, NonHermitianRejected) {
  EXPECT_THROW(cholesky(Matrix<double>{{2, 1}, {0, 2}}), PreconditionError);
}

TEST(Cholesky, ReconstructsSpdUpToKappa1e8) {
  for (double kappa : {1e2, 1e5, 1e8}) {
    const Matrix<double> b = gen_spd(60, kappa, 12);
    const Matrix<double> l = cholesky(b);
    EXPECT_LT(test::oracle_norm2(b - matmul(l, adjoint(l))), 100.0 * 60 * kU * test::oracle_norm2(b));
    const Eigen::LLT<test::EMat<double>> ref(test::to_eigen(b));
    EXPECT_LT((test::to_eigen(l) - test::EMat<double>(ref.matrixL())).norm(), 1e-6 * test::to_eigen(l).norm());
  }
}

TEST(Cholesky, ComplexHermitian) {
  const Matrix<cplx> g = test::gaussian<cplx>(30, 10, 13);
  const Matrix<cplx> a = matmul_ah(g, g);
  const Matrix<cplx> l = cholesky(a);
  for (Index i = 0; i < 10; ++i) EXPECT_EQ(l(i, i).imag(), 0.0);
  EXPECT_LT(test::oracle_norm2(a - matmul(l, adjoint(l))), 1e-13 * test::oracle_norm2(a));
}

TEST(Polar, Identity) {
  const auto pp = polar(Matrix<double>::identity(4));
  EXPECT_LT(test::max_diff(pp.unitary, Matrix<double>::identity(4)), 1e-15);
  EXPECT_LT(test::max_diff(pp.hermitian, Matrix<double>::identity(4)), 1e-15);
}

TEST(Polar, DiagonalSignSplit) {
  const auto pp = polar(Matrix<double>{{2, 0}, {0, -3}});
  EXPECT_LT(test::max_diff(pp.unitary, Matrix<double>{{1, 0}, {0, -1}}), 1e-15);
  EXPECT_LT(test::max_diff(pp.hermitian, Matrix<double>{{2, 0}, {0, 3}}), 1e-15);
}

template <class T>
void check_polar(Index n, std::uint64_t seed) {
  const Matrix<T> a = test::gaussian<T>(n, n, seed);
  const auto pp = polar(a);
  const double na = test::oracle_norm2(a);
  EXPECT_LT(test::oracle_norm2(a - matmul(pp.unitary, pp.hermitian)), 1e-13 * na);
  EXPECT_LT(test::oracle_defect(pp.unitary), 1e-13);
  Eigen::SelfAdjointEigenSolver<test::EMat<T>> es(test::to_eigen(pp.hermitian));
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-13 * na);
  EXPECT_LT(test::max_diff(pp.hermitian, adjoint(pp.hermitian)), 1e-14 * na);
}

TEST(Polar, RandomReal) { check_polar<double>(20, 14); }
TEST(Polar, RandomComplex) { check_polar<cplx>(15, 15); }

TEST(Cond2, Diagonal) { EXPECT_NEAR(cond2(Matrix<double>{{10, 0}, {0, 1}}), 10.0, 1e-13); }

TEST(Cond2, OrthonormalColumns) {
  EXPECT_NEAR(cond2(gen_random_orthonormal<double>(30, 5, 16)), 1.0, 1e-12);
}

TEST(Cond2, AdversarialUpperTriangle) {
  const double c = cond2(adversarial_u(100, 0.1));
  EXPECT_GT(c, 1.1e7 * 0.9);
  EXPECT_LT(c, 1.1e7 * 1.1);
}

TEST(Cond2, ScaleInvariantAndMatchesOracle) {
  const Matrix<double> a = gen_cond_general<double>(40, 8, 1e6, 17);
  const double c = cond2(a);
  EXPECT_NEAR(cond2(a * -37.5), c, 1e-10 * c);
  Eigen::JacobiSVD<test::EMat<double>> svd(test::to_eigen(a));
  const auto& s = svd.singularValues();
  EXPECT_NEAR(c, s(0) / s(s.size() - 1), 1e-8 * c);
  EXPECT_NEAR(c, 1e6, 1e-6 * 1e6);
}

TEST(Cond2, SingularIsInfinite) { EXPECT_TRUE(std::isinf(cond2(Matrix<double>{{1, 1}, {1, 1}}))); }

TEST(TriSolve, IdentityReturnsRhs) {
  const Matrix<double> b = test::gaussian<double>(4, 3, 18);
  EXPECT_EQ(tri_solve(Matrix<double>::identity(4), b, Uplo::Upper), b);
}

TEST(TriSolve, TwoByTwoByHand) {
  const Matrix<double> x = tri_solve(Matrix<double>{{2, 1}, {0, 1}}, Matrix<double>{{3}, {1}}, Uplo::Upper);
  EXPECT_NEAR(x(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(x(1, 0), 1.0, 1e-15);
}

TEST(TriSolve, ZeroDiagonalThrows) {
  EXPECT_THROW(tri_solve(Matrix<double>{{1, 1}, {0, 0}}, Matrix<double>{{1}, {1}}, Uplo::Upper), SingularError);
}

// unit-magnitude diagonal, all four op/side combinations, both triangles, against Eigen
template <class T>
void check_tri(Uplo uplo) {
  const Index k = 20;
  Matrix<T> t = test::gaussian<T>(k, k, 19);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < k; ++i)
      if ((uplo == Uplo::Upper && i > j) || (uplo == Uplo::Lower && i < j)) t(i, j) = T(0);
    t(j, j) = phase(t(j, j));
    for (Index i = 0; i < k; ++i)
      if (i != j) t(i, j) *= 0.1;
  }
  const Matrix<T> bl = test::gaussian<T>(k, 6, 20);
  const Matrix<T> br = test::gaussian<T>(6, k, 21);
  const test::EMat<T> te = test::to_eigen(t);
  for (Op op : {Op::None, Op::ConjTrans}) {
    const test::EMat<T> opt = op == Op::None ? te : test::EMat<T>(te.adjoint());
    const Matrix<T> xl = tri_solve(t, bl, uplo, op, Side::Left);
    EXPECT_LT((opt * test::to_eigen(xl) - test::to_eigen(bl)).norm(), 1e-13 * test::to_eigen(bl).norm());
    const Matrix<T> xr = tri_solve(t, br, uplo, op, Side::Right);
    EXPECT_LT((test::to_eigen(xr) * opt - test::to_eigen(br)).norm(), 1e-13 * test::to_eigen(br).norm());
  }
}

TEST(TriSolve, RandomUpperReal) { check_tri<double>(Uplo::Upper); }
TEST(TriSolve, RandomLowerReal) { check_tri<double>(Uplo::Lower); }
TEST(TriSolve, RandomUpperComplex) { check_tri<cplx>(Uplo::Upper); }
TEST(TriSolve, RandomLowerComplex) { check_tri<cplx>(Uplo::Lower); }

TEST(TriSolve, UnitDiagonalIgnoresStoredDiagonal) {
  const Matrix<double> t{{7, 0}, {3, -9}};
  const Matrix<double> x = tri_solve(t, Matrix<double>{{1}, {5}}, Uplo::Lower, Op::None, Side::Left, Diag::Unit);
  EXPECT_DOUBLE_EQ(x(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(x(1, 0), 2.0);
}

TEST(LuPartial, SolvesAndReconstructs) {
  const Matrix<double> a = test::gaussian<double>(25, 25, 22);
  const auto lu = lu_partial(a);
  EXPECT_LT(test::oracle_norm2(a - lu.reconstruct()), 1e-13 * test::oracle_norm2(a));
  const Matrix<double> b = test::gaussian<double>(25, 3, 23);
  const Eigen::PartialPivLU<test::EMat<double>> ref(test::to_eigen(a));
  EXPECT_LT((test::to_eigen(lu.solve(b)) - ref.solve(test::to_eigen(b))).norm(), 1e-10);
  EXPECT_LT((test::to_eigen(lu.solve_adjoint(b)) - test::EMat<double>(test::to_eigen(a).transpose()).partialPivLu().solve(
                                                       test::to_eigen(b)))
                .norm(),
            1e-10);
}

TEST(ShiftedCholeskyQR, WellConditionedIsOrthonormal) {
  const Matrix<double> a = gen_cond_general<double>(200, 10, 1e6, 24);
  const auto qr = shifted_cholesky_qr(a);
  EXPECT_LT(test::oracle_defect(qr.q), 1e-14);
  EXPECT_LT(test::oracle_norm2(a - matmul(qr.q, qr.r)), 1e-14 * test::oracle_norm2(a));
}

TEST(ShiftedCholeskyQR, ZeroBlockThrows) {
  EXPECT_THROW(shifted_cholesky_qr(Matrix<double>(10, 3)), NotPositiveDefinite);
}

TEST(Norms, Norm2MatchesOracle) {
  const Matrix<cplx> a = test::gaussian<cplx>(30, 12, 25);
  EXPECT_NEAR(norm2(a), test::oracle_norm2(a), 1e-12 * norm2(a));
  EXPECT_NEAR(orthonormality_defect(gen_random_orthonormal<cplx>(30, 12, 26)), 0.0, 1e-14);
}

}  // namespace
}  // namespace ortho
