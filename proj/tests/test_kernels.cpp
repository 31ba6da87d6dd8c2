#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ortho/dense.hpp"
#include "ortho/errors.hpp"
#include "ortho/kernels.hpp"
#include "test_util.hpp"

namespace ortho {
namespace {

using kernels::Index;

bool have_avx2() { return kernels::avx2::compiled() && kernels::detected_isa() == kernels::Isa::Avx2; }

std::vector<double> rand_vec(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

// |a - b| against sum |terms| * k * u: both sides are rounded sums of the same products
double tol(double scale, Index k) { return 4.0 * static_cast<double>(k + 2) * test::kU * scale + 1e-300; }

TEST(Kernels, DotScalarMatchesAvx2) {
  if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
  for (Index n : {0, 1, 3, 4, 7, 8, 15, 16, 17, 33, 1000, 1023}) {
    const auto x = rand_vec(static_cast<std::size_t>(n), 1 + n);
    const auto y = rand_vec(static_cast<std::size_t>(n), 100 + n);
    double scale = 0;
    for (Index i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]);
    EXPECT_NEAR(kernels::scalar::dot(n, x.data(), y.data()), kernels::avx2::dot(n, x.data(), y.data()), tol(scale, n))
        << "n=" << n;
  }
}

TEST(Kernels, AxpyScalarMatchesAvx2) {
  if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
  for (Index n : {0, 1, 5, 8, 13, 64, 999}) {
    const auto x = rand_vec(static_cast<std::size_t>(n), 7 + n);
    auto y1 = rand_vec(static_cast<std::size_t>(n), 70 + n);
    auto y2 = y1;
    kernels::scalar::axpy(n, -0.37, x.data(), y1.data());
    kernels::avx2::axpy(n, -0.37, x.data(), y2.data());
    for (Index i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], tol(std::abs(y1[i]) + std::abs(0.37 * x[i]), 1));
  }
}

struct GemmShape {
  Index m, n, k;
};

class GemmEquivalence : public ::testing::TestWithParam<GemmShape> {};

TEST_P(GemmEquivalence, NnAndHnAgree) {
  if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
  const auto [m, n, k] = GetParam();
  const Index lda = m + 3, ldb = k + 2, ldc = m + 1;
  const auto a = rand_vec(static_cast<std::size_t>(lda * k + 1), 11);
  const auto b = rand_vec(static_cast<std::size_t>(ldb * n + 1), 12);
  const auto c0 = rand_vec(static_cast<std::size_t>(ldc * n + 1), 13);
  auto c1 = c0, c2 = c0;
  kernels::scalar::gemm_nn<double>(m, n, k, 0.8, a.data(), lda, b.data(), ldb, -0.5, c1.data(), ldc);
  kernels::avx2::gemm_nn(m, n, k, 0.8, a.data(), lda, b.data(), ldb, -0.5, c2.data(), ldc);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      double scale = 0.5 * std::abs(c0[i + j * ldc]);
      for (Index l = 0; l < k; ++l) scale += 0.8 * std::abs(a[i + l * lda] * b[l + j * ldb]);
      ASSERT_NEAR(c1[i + j * ldc], c2[i + j * ldc], tol(scale, k)) << i << "," << j;
    }
  // untouched padding rows stay untouched
  for (Index j = 0; j < n; ++j) EXPECT_EQ(c2[m + j * ldc], c0[m + j * ldc]);

  // A stored k x m for the adjoint kernel
  const Index lda2 = k + 1;
  const auto at = rand_vec(static_cast<std::size_t>(lda2 * m + 1), 14);
  auto d1 = c0, d2 = c0;
  kernels::scalar::gemm_hn<double>(m, n, k, 1.3, at.data(), lda2, b.data(), ldb, 0.0, d1.data(), ldc);
  kernels::avx2::gemm_hn(m, n, k, 1.3, at.data(), lda2, b.data(), ldb, 0.0, d2.data(), ldc);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      double scale = 0;
      for (Index l = 0; l < k; ++l) scale += 1.3 * std::abs(at[l + i * lda2] * b[l + j * ldb]);
      ASSERT_NEAR(d1[i + j * ldc], d2[i + j * ldc], tol(scale, k)) << i << "," << j;
    }
}

INSTANTIATE_TEST_SUITE_P(Shapes, GemmEquivalence,
                         ::testing::Values(GemmShape{1, 1, 1}, GemmShape{4, 4, 4}, GemmShape{5, 3, 7},
                                           GemmShape{17, 9, 33}, GemmShape{64, 64, 64}, GemmShape{101, 13, 250},
                                           GemmShape{3, 40, 1000}, GemmShape{8, 1, 0}));

TEST(Kernels, BetaZeroIgnoresNanInOutput) {
  std::vector<double> a{1, 2}, b{3, 4}, c{std::nan("")};
  kernels::scalar::gemm_hn<double>(1, 1, 2, 1.0, a.data(), 2, b.data(), 2, 0.0, c.data(), 1);
  EXPECT_DOUBLE_EQ(c[0], 11.0);
  if (have_avx2()) {
    c[0] = std::nan("");
    kernels::avx2::gemm_hn(1, 1, 2, 1.0, a.data(), 2, b.data(), 2, 0.0, c.data(), 1);
    EXPECT_DOUBLE_EQ(c[0], 11.0);
  }
}

TEST(Kernels, ComplexDotConjugatesFirstArgument) {
  const std::vector<cplx> x{{1, 2}, {0, -1}};
  const std::vector<cplx> y{{3, 1}, {2, 2}};
  // conj(1+2i)(3+i) + conj(-i)(2+2i) = (5 - 5i) + (-2 + 2i)
  const cplx d = kernels::dot<cplx>(2, x.data(), y.data());
  EXPECT_DOUBLE_EQ(d.real(), 3.0);
  EXPECT_DOUBLE_EQ(d.imag(), -3.0);
}

TEST(Kernels, DispatchSwitchGivesSameFactorization) {
  if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
  const Matrix<double> a = test::gaussian<double>(300, 40, 5);
  const kernels::Isa before = kernels::active_isa();
  kernels::set_isa(kernels::Isa::Scalar);
  const QRPair<double> s = householder_qr(a);
  kernels::set_isa(kernels::Isa::Avx2);
  const QRPair<double> v = householder_qr(a);
  kernels::set_isa(before);
  EXPECT_LT(test::max_diff(s.q, v.q), 1e-12);
  EXPECT_LT(test::max_diff(s.r, v.r), 1e-12 * norm_fro(a));
}

TEST(Kernels, IsaNames) {
  EXPECT_EQ(kernels::isa_name(kernels::Isa::Scalar), "scalar");
  EXPECT_EQ(kernels::isa_name(kernels::Isa::Avx2), "avx2");
  if (!have_avx2()) EXPECT_THROW(kernels::set_isa(kernels::Isa::Avx2), PreconditionError);
}

}  // namespace
}  // namespace ortho
