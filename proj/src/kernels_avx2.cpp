// AVX2 + FMA kernels for real double. Built with -mavx2 -mfma; only reached
// through the runtime dispatcher after a CPU feature check.

#include "ortho/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace ortho::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

inline void store_c(double* out, double beta, double alpha, double s) {
  *out = (beta == 0.0 ? 0.0 : beta * *out) + alpha * s;
}

}  // namespace

bool compiled() { return true; }

double dot(Index n, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  Index i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(Index n, double alpha, const double* x, double* y) {
  const __m256d a = _mm256_set1_pd(alpha);
  Index i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Each output entry is a dot product of two long columns. Blocks of 2 columns
// of A against 4 columns of B keep 8 accumulators live.
void gemm_hn(Index m, Index n, Index k, double alpha, const double* a, Index lda, const double* b, Index ldb,
             double beta, double* c, Index ldc) {
  Index j = 0;
  for (; j + 4 <= n; j += 4) {
    const double* b0 = b + (j + 0) * ldb;
    const double* b1 = b + (j + 1) * ldb;
    const double* b2 = b + (j + 2) * ldb;
    const double* b3 = b + (j + 3) * ldb;
    Index i = 0;
    for (; i + 2 <= m; i += 2) {
      const double* a0 = a + i * lda;
      const double* a1 = a + (i + 1) * lda;
      __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd(), c02 = _mm256_setzero_pd(),
              c03 = _mm256_setzero_pd();
      __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd(), c12 = _mm256_setzero_pd(),
              c13 = _mm256_setzero_pd();
      Index l = 0;
      for (; l + 4 <= k; l += 4) {
        const __m256d x0 = _mm256_loadu_pd(a0 + l);
        const __m256d x1 = _mm256_loadu_pd(a1 + l);
        __m256d y = _mm256_loadu_pd(b0 + l);
        c00 = _mm256_fmadd_pd(x0, y, c00);
        c10 = _mm256_fmadd_pd(x1, y, c10);
        y = _mm256_loadu_pd(b1 + l);
        c01 = _mm256_fmadd_pd(x0, y, c01);
        c11 = _mm256_fmadd_pd(x1, y, c11);
        y = _mm256_loadu_pd(b2 + l);
        c02 = _mm256_fmadd_pd(x0, y, c02);
        c12 = _mm256_fmadd_pd(x1, y, c12);
        y = _mm256_loadu_pd(b3 + l);
        c03 = _mm256_fmadd_pd(x0, y, c03);
        c13 = _mm256_fmadd_pd(x1, y, c13);
      }
      double s00 = hsum(c00), s01 = hsum(c01), s02 = hsum(c02), s03 = hsum(c03);
      double s10 = hsum(c10), s11 = hsum(c11), s12 = hsum(c12), s13 = hsum(c13);
      for (; l < k; ++l) {
        s00 += a0[l] * b0[l];
        s01 += a0[l] * b1[l];
        s02 += a0[l] * b2[l];
        s03 += a0[l] * b3[l];
        s10 += a1[l] * b0[l];
        s11 += a1[l] * b1[l];
        s12 += a1[l] * b2[l];
        s13 += a1[l] * b3[l];
      }
      store_c(c + i + (j + 0) * ldc, beta, alpha, s00);
      store_c(c + i + (j + 1) * ldc, beta, alpha, s01);
      store_c(c + i + (j + 2) * ldc, beta, alpha, s02);
      store_c(c + i + (j + 3) * ldc, beta, alpha, s03);
      store_c(c + i + 1 + (j + 0) * ldc, beta, alpha, s10);
      store_c(c + i + 1 + (j + 1) * ldc, beta, alpha, s11);
      store_c(c + i + 1 + (j + 2) * ldc, beta, alpha, s12);
      store_c(c + i + 1 + (j + 3) * ldc, beta, alpha, s13);
    }
    for (; i < m; ++i) {
      const double* a0 = a + i * lda;
      __m256d c0 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd(), c2 = _mm256_setzero_pd(),
              c3 = _mm256_setzero_pd();
      Index l = 0;
      for (; l + 4 <= k; l += 4) {
        const __m256d x0 = _mm256_loadu_pd(a0 + l);
        c0 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b0 + l), c0);
        c1 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b1 + l), c1);
        c2 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b2 + l), c2);
        c3 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b3 + l), c3);
      }
      double s0 = hsum(c0), s1 = hsum(c1), s2 = hsum(c2), s3 = hsum(c3);
      for (; l < k; ++l) {
        s0 += a0[l] * b0[l];
        s1 += a0[l] * b1[l];
        s2 += a0[l] * b2[l];
        s3 += a0[l] * b3[l];
      }
      store_c(c + i + (j + 0) * ldc, beta, alpha, s0);
      store_c(c + i + (j + 1) * ldc, beta, alpha, s1);
      store_c(c + i + (j + 2) * ldc, beta, alpha, s2);
      store_c(c + i + (j + 3) * ldc, beta, alpha, s3);
    }
  }
  for (; j < n; ++j) {
    const double* bj = b + j * ldb;
    for (Index i = 0; i < m; ++i) store_c(c + i + j * ldc, beta, alpha, dot(k, a + i * lda, bj));
  }
}

// Register tile of 8 rows x 4 columns of C, streamed over all k columns of A.
void gemm_nn(Index m, Index n, Index k, double alpha, const double* a, Index lda, const double* b, Index ldb,
             double beta, double* c, Index ldc) {
  for (Index j = 0; j < n; ++j) {
    double* cj = c + j * ldc;
    if (beta == 0.0) {
      for (Index i = 0; i < m; ++i) cj[i] = 0.0;
    } else if (beta != 1.0) {
      for (Index i = 0; i < m; ++i) cj[i] *= beta;
    }
  }
  Index j = 0;
  for (; j + 4 <= n; j += 4) {
    double* c0 = c + (j + 0) * ldc;
    double* c1 = c + (j + 1) * ldc;
    double* c2 = c + (j + 2) * ldc;
    double* c3 = c + (j + 3) * ldc;
    const double* bj0 = b + (j + 0) * ldb;
    const double* bj1 = b + (j + 1) * ldb;
    const double* bj2 = b + (j + 2) * ldb;
    const double* bj3 = b + (j + 3) * ldb;
    Index i = 0;
    for (; i + 8 <= m; i += 8) {
      __m256d r00 = _mm256_loadu_pd(c0 + i), r01 = _mm256_loadu_pd(c0 + i + 4);
      __m256d r10 = _mm256_loadu_pd(c1 + i), r11 = _mm256_loadu_pd(c1 + i + 4);
      __m256d r20 = _mm256_loadu_pd(c2 + i), r21 = _mm256_loadu_pd(c2 + i + 4);
      __m256d r30 = _mm256_loadu_pd(c3 + i), r31 = _mm256_loadu_pd(c3 + i + 4);
      for (Index l = 0; l < k; ++l) {
        const double* al = a + l * lda + i;
        const __m256d x0 = _mm256_loadu_pd(al);
        const __m256d x1 = _mm256_loadu_pd(al + 4);
        __m256d s = _mm256_set1_pd(alpha * bj0[l]);
        r00 = _mm256_fmadd_pd(x0, s, r00);
        r01 = _mm256_fmadd_pd(x1, s, r01);
        s = _mm256_set1_pd(alpha * bj1[l]);
        r10 = _mm256_fmadd_pd(x0, s, r10);
        r11 = _mm256_fmadd_pd(x1, s, r11);
        s = _mm256_set1_pd(alpha * bj2[l]);
        r20 = _mm256_fmadd_pd(x0, s, r20);
        r21 = _mm256_fmadd_pd(x1, s, r21);
        s = _mm256_set1_pd(alpha * bj3[l]);
        r30 = _mm256_fmadd_pd(x0, s, r30);
        r31 = _mm256_fmadd_pd(x1, s, r31);
      }
      _mm256_storeu_pd(c0 + i, r00);
      _mm256_storeu_pd(c0 + i + 4, r01);
      _mm256_storeu_pd(c1 + i, r10);
      _mm256_storeu_pd(c1 + i + 4, r11);
      _mm256_storeu_pd(c2 + i, r20);
      _mm256_storeu_pd(c2 + i + 4, r21);
      _mm256_storeu_pd(c3 + i, r30);
      _mm256_storeu_pd(c3 + i + 4, r31);
    }
    for (; i < m; ++i) {
      double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
      for (Index l = 0; l < k; ++l) {
        const double x = a[l * lda + i];
        s0 += x * bj0[l];
        s1 += x * bj1[l];
        s2 += x * bj2[l];
        s3 += x * bj3[l];
      }
      c0[i] += alpha * s0;
      c1[i] += alpha * s1;
      c2[i] += alpha * s2;
      c3[i] += alpha * s3;
    }
  }
  for (; j < n; ++j) {
    double* cj = c + j * ldc;
    for (Index l = 0; l < k; ++l) {
      const double s = alpha * b[l + j * ldb];
      if (s != 0.0) axpy(m, s, a + l * lda, cj);
    }
  }
}

}  // namespace ortho::kernels::avx2

#else

#include "ortho/errors.hpp"

namespace ortho::kernels::avx2 {
bool compiled() { return false; }
double dot(Index, const double*, const double*) { throw PreconditionError("AVX2 kernels not compiled"); }
void axpy(Index, double, const double*, double*) { throw PreconditionError("AVX2 kernels not compiled"); }
void gemm_hn(Index, Index, Index, double, const double*, Index, const double*, Index, double, double*, Index) {
  throw PreconditionError("AVX2 kernels not compiled");
}
void gemm_nn(Index, Index, Index, double, const double*, Index, const double*, Index, double, double*, Index) {
  throw PreconditionError("AVX2 kernels not compiled");
}
}  // namespace ortho::kernels::avx2

#endif
