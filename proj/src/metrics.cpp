#include "ortho/metrics.hpp"

#include <cmath>
#include <limits>

#include "ortho/dense.hpp"

namespace ortho {

template <class T>
double loss_of_orthogonality(const Matrix<T>& v, const Matrix<T>& q, const InnerProduct<T>& ip) {
  const Matrix<T> vq = v.cols() == 0 ? q : hcat(v, q);
  if (vq.cols() == 0) return 0.0;
  return orthonormality_defect(ip.factor_apply(vq));
}

template <class T>
double cross_orthogonality(const Matrix<T>& v, const Matrix<T>& q, const InnerProduct<T>& ip) {
  if (v.cols() == 0 || q.cols() == 0) return 0.0;
  if (v.rows() != q.rows()) throw DimensionError("cross_orthogonality: row mismatch");
  return norm_fro(ip.gram(q, v));
}

template <class T>
double relative_residual(const Matrix<T>& a, const Matrix<T>& v, const Matrix<T>& s, const Matrix<T>& q,
                         const Matrix<T>& r) {
  if (q.rows() != a.rows() || r.cols() != a.cols() || q.cols() != r.rows())
    throw DimensionError("relative_residual: Q/R shape mismatch");
  Matrix<T> res = a;
  gemm(res, T(-1), q, r, T(1));
  if (v.cols() > 0) {
    if (v.rows() != a.rows() || s.rows() != v.cols() || s.cols() != a.cols())
      throw DimensionError("relative_residual: V/S shape mismatch");
    gemm(res, T(-1), v, s, T(1));
  }
  const double na = norm2(a);
  const double nr = norm2(res);
  if (na == 0.0) return nr == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return nr / na;
}

#define ORTHO_INSTANTIATE(T)                                                                                   \
  template double loss_of_orthogonality<T>(const Matrix<T>&, const Matrix<T>&, const InnerProduct<T>&);        \
  template double cross_orthogonality<T>(const Matrix<T>&, const Matrix<T>&, const InnerProduct<T>&);          \
  template double relative_residual<T>(const Matrix<T>&, const Matrix<T>&, const Matrix<T>&, const Matrix<T>&, \
                                       const Matrix<T>&);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(cplx)
#undef ORTHO_INSTANTIATE

}  // namespace ortho
