#include <complex>

#include "ortho/kernels.hpp"

namespace ortho::kernels::scalar {

namespace {
template <class T>
T cj(const T& x) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return std::conj(x);
  } else {
    return x;
  }
}

template <class T>
void scale_c(Index m, Index n, T beta, T* c, Index ldc) {
  for (Index j = 0; j < n; ++j) {
    T* cj_ = c + j * ldc;
    if (beta == T(0)) {
      for (Index i = 0; i < m; ++i) cj_[i] = T(0);
    } else if (beta != T(1)) {
      for (Index i = 0; i < m; ++i) cj_[i] *= beta;
    }
  }
}
}  // namespace

template <class T>
void gemm_hn(Index m, Index n, Index k, T alpha, const T* a, Index lda, const T* b, Index ldb, T beta, T* c,
             Index ldc) {
  for (Index j = 0; j < n; ++j) {
    const T* bj = b + j * ldb;
    for (Index i = 0; i < m; ++i) {
      const T* ai = a + i * lda;
      T s(0);
      for (Index l = 0; l < k; ++l) s += cj(ai[l]) * bj[l];
      T& out = c[i + j * ldc];
      out = (beta == T(0) ? T(0) : beta * out) + alpha * s;
    }
  }
}

template <class T>
void gemm_nn(Index m, Index n, Index k, T alpha, const T* a, Index lda, const T* b, Index ldb, T beta, T* c,
             Index ldc) {
  scale_c(m, n, beta, c, ldc);
  for (Index j = 0; j < n; ++j) {
    T* cj_ = c + j * ldc;
    for (Index l = 0; l < k; ++l) {
      const T s = alpha * b[l + j * ldb];
      if (s == T(0)) continue;
      const T* al = a + l * lda;
      for (Index i = 0; i < m; ++i) cj_[i] += s * al[i];
    }
  }
}

template <class T>
T dot(Index n, const T* x, const T* y) {
  T s(0);
  for (Index i = 0; i < n; ++i) s += cj(x[i]) * y[i];
  return s;
}

template <class T>
void axpy(Index n, T alpha, const T* x, T* y) {
  for (Index i = 0; i < n; ++i) y[i] += alpha * x[i];
}

#define ORTHO_INSTANTIATE(T)                                                                              \
  template void gemm_hn<T>(Index, Index, Index, T, const T*, Index, const T*, Index, T, T*, Index);       \
  template void gemm_nn<T>(Index, Index, Index, T, const T*, Index, const T*, Index, T, T*, Index);       \
  template T dot<T>(Index, const T*, const T*);                                                           \
  template void axpy<T>(Index, T, const T*, T*);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(std::complex<double>)
#undef ORTHO_INSTANTIATE

}  // namespace ortho::kernels::scalar
