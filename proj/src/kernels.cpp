#include "ortho/kernels.hpp"

#include <atomic>
#include <complex>
#include <cstdlib>
#include <string>

#include "ortho/errors.hpp"

namespace ortho::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const Isa best = detected_isa();
  // ORTHO_ISA=scalar pins the reference kernels, e.g. for bisecting a numerical difference.
  if (const char* env = std::getenv("ORTHO_ISA"); env != nullptr && std::string(env) == "scalar") return Isa::Scalar;
  return best;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() {
  static const Isa isa = (avx2::compiled() && cpu_has_avx2()) ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) throw PreconditionError("AVX2 kernels unavailable on this CPU");
  active().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

template <>
void gemm_hn<double>(Index m, Index n, Index k, double alpha, const double* a, Index lda, const double* b, Index ldb,
                     double beta, double* c, Index ldc) {
  if (active_isa() == Isa::Avx2) return avx2::gemm_hn(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
  scalar::gemm_hn(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

template <>
void gemm_nn<double>(Index m, Index n, Index k, double alpha, const double* a, Index lda, const double* b, Index ldb,
                     double beta, double* c, Index ldc) {
  if (active_isa() == Isa::Avx2) return avx2::gemm_nn(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
  scalar::gemm_nn(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

template <>
double dot<double>(Index n, const double* x, const double* y) {
  if (active_isa() == Isa::Avx2) return avx2::dot(n, x, y);
  return scalar::dot(n, x, y);
}

template <>
void axpy<double>(Index n, double alpha, const double* x, double* y) {
  if (active_isa() == Isa::Avx2) return avx2::axpy(n, alpha, x, y);
  scalar::axpy(n, alpha, x, y);
}

using cd = std::complex<double>;

template <>
void gemm_hn<cd>(Index m, Index n, Index k, cd alpha, const cd* a, Index lda, const cd* b, Index ldb, cd beta, cd* c,
                 Index ldc) {
  scalar::gemm_hn(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

template <>
void gemm_nn<cd>(Index m, Index n, Index k, cd alpha, const cd* a, Index lda, const cd* b, Index ldb, cd beta, cd* c,
                 Index ldc) {
  scalar::gemm_nn(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

template <>
cd dot<cd>(Index n, const cd* x, const cd* y) {
  return scalar::dot(n, x, y);
}

template <>
void axpy<cd>(Index n, cd alpha, const cd* x, cd* y) {
  scalar::axpy(n, alpha, x, y);
}

}  // namespace ortho::kernels
