#pragma once

// Inner-loop kernels on raw column-major storage.
//
// Every kernel has a portable scalar reference implementation. For real double
// data an AVX2+FMA implementation is compiled into a separate translation unit
// and chosen at runtime when the CPU supports it. Complex data always takes the
// scalar path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace ortho::kernels {

using Index = std::ptrdiff_t;

enum class Isa { Scalar, Avx2 };

/// Best instruction set available on this machine (and compiled in).
Isa detected_isa();
/// Instruction set currently used by the dispatching kernels.
Isa active_isa();
/// Force a kernel family. Requesting Avx2 on a machine without it throws ortho::PreconditionError.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

// C (m x n) = alpha * A^H * B + beta * C, with A stored k x m and B stored k x n.
template <class T>
void gemm_hn(Index m, Index n, Index k, T alpha, const T* a, Index lda, const T* b, Index ldb, T beta, T* c,
             Index ldc);

// C (m x n) = alpha * A * B + beta * C, with A stored m x k and B stored k x n.
template <class T>
void gemm_nn(Index m, Index n, Index k, T alpha, const T* a, Index lda, const T* b, Index ldb, T beta, T* c,
             Index ldc);

// sum_i conj(x_i) * y_i
template <class T>
T dot(Index n, const T* x, const T* y);

// y += alpha * x
template <class T>
void axpy(Index n, T alpha, const T* x, T* y);

// Direct entry points for equivalence testing. The avx2 namespace is only
// callable when detected_isa() == Isa::Avx2.
namespace scalar {
template <class T>
void gemm_hn(Index m, Index n, Index k, T alpha, const T* a, Index lda, const T* b, Index ldb, T beta, T* c,
             Index ldc);
template <class T>
void gemm_nn(Index m, Index n, Index k, T alpha, const T* a, Index lda, const T* b, Index ldb, T beta, T* c,
             Index ldc);
template <class T>
T dot(Index n, const T* x, const T* y);
template <class T>
void axpy(Index n, T alpha, const T* x, T* y);
}  // namespace scalar

namespace avx2 {
bool compiled();
void gemm_hn(Index m, Index n, Index k, double alpha, const double* a, Index lda, const double* b, Index ldb,
             double beta, double* c, Index ldc);
void gemm_nn(Index m, Index n, Index k, double alpha, const double* a, Index lda, const double* b, Index ldb,
             double beta, double* c, Index ldc);
double dot(Index n, const double* x, const double* y);
void axpy(Index n, double alpha, const double* x, double* y);
}  // namespace avx2

}  // namespace ortho::kernels
