#include <gtest/gtest.h>

#include <cmath>

#include "ortho/b_inner.hpp"
#include "ortho/errors.hpp"
#include "ortho/metrics.hpp"
#include "ortho/testgen.hpp"
#include "test_util.hpp"

namespace ortho {
namespace {

const SeedChoice kAll[] = {SeedChoice::DiagonalMLU, SeedChoice::QRSeed, SeedChoice::PolarSeed};

// ||X^H B X - I||_2 with B applied densely through Eigen
double oracle_b_defect(const Matrix<double>& x, const Matrix<double>& b) {
  const auto xe = test::to_eigen(x);
  const test::EMat<double> g = xe.transpose() * test::to_eigen(b) * xe - test::EMat<double>::Identity(x.cols(), x.cols());
  Eigen::SelfAdjointEigenSolver<test::EMat<double>> es(g);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// B-orthonormal n x k: Q L^{-T} with Q^T B Q = L L^T
Matrix<double> b_orthonormal(const InnerProduct<double>& ip, Index n, Index k, std::uint64_t seed) {
  const Matrix<double> q = gen_random_orthonormal<double>(n, k, seed);
  const Matrix<double> l = cholesky(ip.gram(q, q));
  Matrix<double> x = tri_solve(l, q, Uplo::Lower, Op::ConjTrans, Side::Right);
  // one more pass removes the rounding left by the first
  const Matrix<double> l2 = cholesky(ip.gram(x, x));
  return tri_solve(l2, x, Uplo::Lower, Op::ConjTrans, Side::Right);
}

TwoStageOptions with(SeedChoice c) {
  TwoStageOptions o;
  o.choice = c;
  return o;
}

TEST(InnerProduct, EuclideanGramIsPlainProduct) {
  const InnerProduct<double> ip;
  const Matrix<double> x = test::gaussian<double>(9, 3, 1), y = test::gaussian<double>(9, 2, 2);
  EXPECT_EQ(ip.dim(), 0);
  EXPECT_FALSE(ip.is_weighted());
  EXPECT_LT(test::max_diff(ip.gram(x, y), matmul_ah(y, x)), 1e-15);
}

TEST(InnerProduct, WeightedValidatesInput) {
  EXPECT_THROW(InnerProduct<double>::weighted(Matrix<double>{{1, 2}, {2, 1}}), NotPositiveDefinite);
  EXPECT_THROW(InnerProduct<double>::weighted(Matrix<double>{{1, 0.5}, {0, 1}}), PreconditionError);
  const auto ip = InnerProduct<double>::weighted(Matrix<double>{{4, 0}, {0, 9}});
  EXPECT_NEAR(ip.norm(Matrix<double>{{1}, {1}}), std::sqrt(13.0), 1e-15);
}

TEST(InitialBasis, IdentityGivesCanonicalVectors) {
  const auto ip = InnerProduct<double>::weighted(Matrix<double>::identity(6));
  EXPECT_LT(test::max_diff(initial_b_basis(ip, 3), Matrix<double>::identity(6, 3)), 1e-15);
  EXPECT_EQ(initial_b_basis(InnerProduct<double>(), 3, 6), Matrix<double>::identity(6, 3));
}

TEST(InitialBasis, DiagonalB) {
  Matrix<double> b(4, 4);
  const double d[] = {4, 9, 16, 25};
  for (Index i = 0; i < 4; ++i) b(i, i) = d[i];
  const Matrix<double> u = initial_b_basis(InnerProduct<double>::weighted(b), 4);
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(u(i, i), 1.0 / std::sqrt(d[i]), 1e-15);
}

TEST(InitialBasis, RandomSpd) {
  const Matrix<double> b = gen_spd(300, 1e5, 3);
  const Matrix<double> u = initial_b_basis(InnerProduct<double>::weighted(b), 30);
  EXPECT_LE(oracle_b_defect(u, b), 1e-11);
  for (Index j = 0; j < 30; ++j)
    for (Index i = 30; i < 300; ++i) EXPECT_EQ(u(i, j), 0.0);
}

TEST(BReflector, EuclideanCollapse) {
  const Matrix<double> v = gen_random_orthonormal<double>(50, 6, 4);
  const InnerProduct<double> ip;
  for (SeedChoice c : kAll) {
    const auto hb = b_build_reflector(v, Matrix<double>::identity(50, 6), ip, c);
    const auto he = build_reflector(v, c);
    EXPECT_LT(test::max_diff(hb.w(), he.w()), 1e-14);
    EXPECT_LT(test::max_diff(hb.p(), he.p()), 1e-14);
    const Matrix<double> x = test::gaussian<double>(50, 3, 5);
    EXPECT_LT(test::max_diff(hb.apply(x), he.apply(x)), 1e-13);
  }
}

TEST(BReflector, SelfMappingWhenVEqualsU0) {
  const auto ip = InnerProduct<double>::weighted(gen_spd(80, 1e3, 6));
  const Matrix<double> u0 = initial_b_basis(ip, 5);
  const auto h = b_build_reflector(u0, u0, ip, SeedChoice::QRSeed);
  const Matrix<double> t = h.t();
  EXPECT_LT(cond2(t), 10.0);
  const Matrix<double> wbw = ip.gram(h.w(), h.w());
  for (Index j = 0; j < 5; ++j) EXPECT_NEAR(wbw(j, j), 2.0 * t(j, j), 1e-12);
  EXPECT_LT(test::oracle_norm2(ip.factor_apply(h.apply(h.x()) - u0)), 1e-12);
}

// Mapping H X = Y, B-isometry ||H^H B H - B|| against ||B W T^{-H}||^2 ||X^H B X - Y^H B Y||
// for a slightly perturbed Y, and the H^{-1} round trip for an exactly B-orthonormal Y
TEST(BReflector, PropertiesOnSeededInstances) {
  ReflectorOptions ro;
  ro.allow_nonorthonormal = true;
  for (std::uint64_t s = 1; s <= 100; ++s) {
    const Index n = 40 + static_cast<Index>(s % 4) * 20, k0 = 2 + static_cast<Index>(s % 7);
    const double kappa_b = std::pow(10.0, static_cast<double>(s % 6));
    const Matrix<double> b = gen_spd(n, kappa_b, 700 + s);
    const auto ip = InnerProduct<double>::weighted(b);
    const Matrix<double> v = b_orthonormal(ip, n, k0, 800 + s);
    const Matrix<double> u0 = initial_b_basis(ip, k0);
    const double sk = std::sqrt(static_cast<double>(k0));

    const auto h0 = b_build_reflector(v, u0, ip, kAll[s % 3]);
    const Matrix<double> x = test::gaussian<double>(n, 3, 900 + s);
    const Matrix<double> back = h0.apply(h0.apply(x), true);
    EXPECT_LE(test::oracle_norm2(back - x),
              1e-12 * std::sqrt(kappa_b) * h0.diagnostics().kappa_t * test::oracle_norm2(x)) << s;

    const Matrix<double> y = v + test::gaussian<double>(n, k0, 1100 + s) * (1e-8 / std::sqrt(n * kappa_b));
    const auto h = b_build_reflector(y, u0, ip, kAll[s % 3], ro);
    const auto diag = h.diagnostics();
    EXPECT_LE(test::oracle_norm2(ip.factor_apply(h.apply(h.x()) - y)), 1e-12 * sk) << s;
    const Matrix<double> hi = h.apply(Matrix<double>::identity(n));
    const Matrix<double> iso = matmul_ah(hi, matmul(b, hi)) - b;
    const double delta = test::oracle_norm2(ip.gram(h.x(), h.x()) - ip.gram(y, y));
    EXPECT_LE(test::oracle_norm2(iso), 11.0 * diag.bwt_inv_adj_norm * diag.bwt_inv_adj_norm * delta) << s;
  }
}

TEST(BHouseholderQR, EuclideanMatchesHouseholderUpToPhases) {
  const Matrix<double> a = test::gaussian<double>(60, 8, 10);
  const auto bq = b_householder_qr(a, Matrix<double>::identity(60, 8), InnerProduct<double>());
  const auto hq = householder_qr(a);
  for (Index j = 0; j < 8; ++j) {
    const double sg = (bq.r(j, j) >= 0) == (hq.r(j, j) >= 0) ? 1.0 : -1.0;
    for (Index i = 0; i < 60; ++i) EXPECT_NEAR(bq.q(i, j), sg * hq.q(i, j), 1e-13);
  }
}

TEST(BHouseholderQR, FixedPointColumn) {
  const auto ip = InnerProduct<double>::weighted(gen_spd(30, 100, 11));
  const Matrix<double> u = initial_b_basis(ip, 3);
  const Matrix<double> a = u.left_cols(1) * 2.5;
  const auto qr = b_householder_qr(a, u, ip);
  EXPECT_NEAR(std::abs(qr.r(0, 0)), 2.5, 1e-13);
  EXPECT_LT(test::max_diff(qr.q * qr.r(0, 0), a), 1e-13);
}

TEST(BHouseholderQR, ReorthogonalizationKeepsBOrthonormality) {
  const Matrix<double> b = gen_spd(300, 1e5, 12);
  const auto ip = InnerProduct<double>::weighted(b);
  const Matrix<double> a = test::gaussian<double>(300, 20, 13);
  const Matrix<double> u = initial_b_basis(ip, 20);
  const auto on = b_householder_qr(a, u, ip, true);
  EXPECT_LE(oracle_b_defect(on.q, b), 1e-11);
  EXPECT_LE(test::oracle_norm2(a - matmul(on.q, on.r)), 1e-11 * std::sqrt(1e5) * test::oracle_norm2(a));
  const auto off = b_householder_qr(a, u, ip, false);
  RecordProperty("defect_without_reorth", std::to_string(oracle_b_defect(off.q, b)));
}

TEST(BHouseholderQR, NonFiniteInputBreaksDown) {
  Matrix<double> a = test::gaussian<double>(10, 2, 14);
  a(3, 1) = std::nan("");
  EXPECT_THROW(b_householder_qr(a, Matrix<double>::identity(10, 2), InnerProduct<double>()), BreakdownError);
}

TEST(BTwoStage, EuclideanCollapseMatchesTwoStage) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const VAPair<double> pr = gen_sweep_pair<double>(100, 8, 6, std::pow(10.0, 2.0 * s), 20 + s);
    for (SeedChoice c : kAll) {
      const auto e = two_stage_qr(pr.v, pr.a, with(c));
      const auto bres = b_two_stage_qr(pr.v, pr.a, Matrix<double>::identity(100, 14), InnerProduct<double>(), with(c));
      EXPECT_NEAR(loss_of_orthogonality(pr.v, bres.q), loss_of_orthogonality(pr.v, e.q), 1e-13);
      EXPECT_NEAR(relative_residual(pr.a, pr.v, bres.s, bres.q, bres.r),
                  relative_residual(pr.a, pr.v, e.s, e.q, e.r), 1e-13);
    }
  }
}

TEST(BTwoStage, WeightedRandom) {
  const Matrix<double> b = gen_spd(200, 1e5, 30);
  const auto ip = InnerProduct<double>::weighted(b);
  const Matrix<double> v = b_orthonormal(ip, 200, 10, 31);
  const Matrix<double> a = test::gaussian<double>(200, 8, 32);
  for (SeedChoice c : kAll) {
    const auto res = b_two_stage_qr(v, a, initial_b_basis(ip, 18), ip, with(c));
    EXPECT_LE(oracle_b_defect(hcat(v, res.q), b), 1e-12) << to_string(c);
    EXPECT_LE(relative_residual(a, v, res.s, res.q, res.r), 1e-12) << to_string(c);
  }
}

TEST(BTwoStage, BlockDriverOnSStep) {
  const Matrix<double> a = gen_family(Family::SStep, 1000, 10, 5, 2);
  const Matrix<double> b = gen_spd(1000, 1e5, 33);
  const auto ip = InnerProduct<double>::weighted(b);
  const auto res = b_block_householder_qr(split_blocks(a, 10), ip, with(SeedChoice::QRSeed));
  EXPECT_LE(loss_of_orthogonality(Matrix<double>(1000, 0), res.q, ip), 1e-12);
  EXPECT_LE(relative_residual(a, Matrix<double>(1000, 0), Matrix<double>(0, 50), res.q, res.r), 1e-12);
}

}  // namespace
}  // namespace ortho
