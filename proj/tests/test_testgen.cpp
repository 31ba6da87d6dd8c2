#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ortho/errors.hpp"
#include "ortho/gen_householder.hpp"
#include "ortho/testgen.hpp"
#include "test_util.hpp"

namespace ortho {
namespace {

// singular values through the Gram eigenvalues, descending
std::vector<double> oracle_singular_values(const Matrix<double>& m) {
  Eigen::JacobiSVD<test::EMat<double>> svd(test::to_eigen(m));
  const auto s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

TEST(Rng, KnownSplitMix64Stream) {
  // reference values of SplitMix64 from seed 0
  Rng r(0);
  EXPECT_EQ(r.next_u64(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.next_u64(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(r.next_u64(), 0x06c45d188009454fULL);
}

TEST(Rng, UniformRangeAndNormalMoments) {
  Rng r(1);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Testgen, Deterministic) {
  EXPECT_EQ(gen_random_orthonormal<double>(30, 4, 9), gen_random_orthonormal<double>(30, 4, 9));
  EXPECT_NE(gen_random_orthonormal<double>(30, 4, 9), gen_random_orthonormal<double>(30, 4, 10));
  EXPECT_EQ(gen_family(Family::StewartExtreme, 100, 4, 3, 2), gen_family(Family::StewartExtreme, 100, 4, 3, 2));
  EXPECT_EQ(gen_sweep_pair<cplx>(40, 3, 3, 1e5, 1).a, gen_sweep_pair<cplx>(40, 3, 3, 1e5, 1).a);
  EXPECT_EQ(gen_mlu_adversarial(5, 0.1, 20, 3).v, gen_mlu_adversarial(5, 0.1, 20, 3).v);
}

TEST(Testgen, RandomOrthonormal) {
  EXPECT_LE(test::oracle_defect(gen_random_orthonormal<double>(200, 30, 1)), 1e-14);
  EXPECT_LE(test::oracle_defect(gen_random_orthonormal<cplx>(100, 20, 1)), 1e-14);
  EXPECT_THROW(gen_random_orthonormal<double>(3, 4, 1), DimensionError);
}

TEST(Testgen, Fixture) {
  const auto f = fixture_badbcg();
  EXPECT_EQ(f.v.rows(), 4);
  EXPECT_EQ(f.a.cols(), 2);
  EXPECT_LE(test::oracle_defect(f.v), 1e-16 * 4);
  EXPECT_EQ(f.a(2, 0), 1e-30);
  EXPECT_EQ(f.a(3, 1), 1e-30);
}

TEST(Testgen, Logspace) {
  const auto v = logspace(0, 3, 4);
  ASSERT_EQ(v.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(v[i], std::pow(10.0, i), 1e-12 * std::pow(10.0, i));
  EXPECT_EQ(logspace(2, 5, 1), std::vector<double>{100.0});
  EXPECT_TRUE(logspace(0, 1, 0).empty());
}

TEST(Testgen, SpdEigenvalues) {
  const Matrix<double> b = gen_spd(60, 1e6, 4);
  EXPECT_EQ(b, adjoint(b));
  Eigen::SelfAdjointEigenSolver<test::EMat<double>> es(test::to_eigen(b));
  const auto ev = es.eigenvalues();
  const auto want = logspace(0, 6, 60);
  for (int i = 0; i < 60; ++i) EXPECT_NEAR(ev(i) / want[i], 1.0, 1e-9) << i;
  EXPECT_THROW(gen_spd(5, 0.5, 1), ParameterError);
}

TEST(Testgen, CondGeneralSingularValues) {
  const Matrix<double> a = gen_cond_general<double>(100, 10, 1e8, 5);
  const auto s = oracle_singular_values(a);
  const auto want = logspace(0, -8, 10);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(s[i] / want[i], 1.0, 1e-6) << i;
  EXPECT_NEAR(cond2(gen_cond_general<cplx>(50, 6, 1e4, 5)), 1e4, 1e-6 * 1e4);
}

TEST(Testgen, SweepPairConditioning) {
  for (double kappa : {1.0, 1e4, 1e10}) {
    const auto pr = gen_sweep_pair<double>(200, 10, 10, kappa, 6);
    EXPECT_LE(test::oracle_defect(pr.v), 1e-14);
    const auto s = oracle_singular_values(hcat(pr.v, pr.a));
    const double k = s.front() / s.back();
    EXPECT_GE(k, kappa / 4) << kappa;
    EXPECT_LE(k, kappa * 4 + 2) << kappa;
  }
}

TEST(Testgen, AdversarialUMatchesRecipe) {
  const Matrix<double> u = adversarial_u(4, 0.1);
  EXPECT_DOUBLE_EQ(u(0, 0), 1.0 + 0.1 / 2.0);
  EXPECT_DOUBLE_EQ(u(0, 3), -0.5);
  EXPECT_DOUBLE_EQ(u(3, 3), 1.1);
  EXPECT_EQ(u(2, 1), 0.0);
}

// random strictly bounded R, then the modified LU of the generated V must return D + R
TEST(Testgen, MluFromRRoundTrip) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    Rng rng(s);
    const Index k = 1 + static_cast<Index>(rng.next_u64() % 20);
    Matrix<double> r(k, k);
    for (Index i = 0; i < k; ++i) {
      for (Index j = i; j < k; ++j) r(i, j) = rng.normal();
      double nrm = 0;
      for (Index j = i; j < k; ++j) nrm += r(i, j) * r(i, j);
      const double scale = (0.2 + 0.7 * rng.uniform()) / std::sqrt(nrm);
      for (Index j = i; j < k; ++j) r(i, j) *= scale;
    }
    const AdversarialPair pr = gen_mlu_from_r(r, 3 * k, 100 + s);
    EXPECT_LE(test::oracle_defect(pr.v), 1e-13) << s;
    const auto m = modified_lu(pr.v.top_rows(k));
    EXPECT_LE(test::max_diff(m.u, pr.target_u), 1e-10) << s;
    for (Index i = 0; i < k; ++i) {
      EXPECT_NEAR(std::abs(pr.target_u(i, i) - r(i, i)), 1.0, 1e-15) << s;
    }
  }
}

TEST(Testgen, MluFromRRejectsBadInput) {
  EXPECT_THROW(gen_mlu_from_r(Matrix<double>{{1.0}}, 4, 1), ConstructionError);
  EXPECT_THROW(gen_mlu_from_r(Matrix<double>{{0.5}}, 1, 1), ParameterError);
  EXPECT_THROW(gen_mlu_from_r(Matrix<double>(2, 3), 10, 1), ParameterError);
}

TEST(Testgen, PrescribedKappaT) {
  for (double kappa : {1e2, 1e6, 1e10}) {
    const PrescribedPair pr = gen_prescribed_kappa_t(300, 20, kappa, 7);
    EXPECT_LE(test::oracle_defect(pr.v), 1e-13);
    EXPECT_LE(test::oracle_defect(pr.p), 1e-13);
    const Matrix<double> t = Matrix<double>::identity(20) - matmul_ah(pr.v.top_rows(20), pr.p);
    const auto s = oracle_singular_values(t);
    const double k = s.front() / s.back();
    EXPECT_GE(k, kappa / 1.5) << kappa;
    EXPECT_LE(k, kappa * 1.5) << kappa;
  }
  EXPECT_THROW(gen_prescribed_kappa_t(100, 10, 0.5, 1), ParameterError);
  EXPECT_THROW(gen_prescribed_kappa_t(15, 10, 10, 1), ParameterError);
}

TEST(Testgen, SStepIsIllConditioned) {
  const Matrix<double> a = gen_family(Family::SStep, 1000, 10, 5, 1);
  for (Index j = 0; j < a.cols(); ++j) EXPECT_NEAR(test::oracle_norm2(a.middle_cols(j, 1)), 1.0, 1e-14);
  const auto s = oracle_singular_values(a);
  EXPECT_GE(s.front() / s.back(), 1e12);
}

TEST(Testgen, StewartOddBlocksNearlyInPreviousRange) {
  const Index n = 200, k = 4;
  const Matrix<double> a = gen_family(Family::StewartExtreme, n, 4, k, 2);
  for (Index b = 1; b < 4; b += 2) {
    const Matrix<double> q = householder_qr(a.middle_cols((b - 1) * k, k)).q;
    const Matrix<double> nxt = householder_qr(a.middle_cols(b * k, k)).q;
    // sine of the largest principal angle between consecutive blocks
    const Matrix<double> rest = nxt - matmul(q, matmul_ah(q, nxt));
    EXPECT_LT(test::oracle_norm2(rest), 1e-10) << b;
  }
}

TEST(Testgen, FamilyNamesAndErrors) {
  EXPECT_EQ(parse_family("sstep"), Family::SStep);
  EXPECT_EQ(parse_family(to_string(Family::StewartExtreme)), Family::StewartExtreme);
  EXPECT_THROW(parse_family("hilbert"), ParameterError);
  EXPECT_THROW(gen_family(Family::SStep, 10, 4, 3, 1), ParameterError);
  EXPECT_THROW(gen_sweep_pair<double>(10, 6, 6, 10, 1), DimensionError);
  EXPECT_THROW(gen_sweep_pair<double>(10, 2, 2, 0.1, 1), ParameterError);
}

}  // namespace
}  // namespace ortho
