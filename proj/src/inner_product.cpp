#include "ortho/inner_product.hpp"

namespace ortho {

template <class T>
InnerProduct<T> InnerProduct<T>::weighted(Matrix<T> b) {
  if (b.rows() != b.cols()) throw DimensionError("InnerProduct: B must be square");
  Matrix<T> l = cholesky(b);
  // store the symmetrized B so B and L L^H describe the same matrix
  Matrix<T> bs = b;
  for (Index j = 0; j < b.cols(); ++j)
    for (Index i = 0; i < b.rows(); ++i) bs(i, j) = (b(i, j) + conj(b(j, i))) * 0.5;
  InnerProduct ip;
  ip.state_ = std::make_shared<const State>(State{std::move(bs), std::move(l)});
  return ip;
}

template <class T>
const Matrix<T>& InnerProduct<T>::b() const {
  if (!state_) throw PreconditionError("InnerProduct: Euclidean product has no explicit B");
  return state_->b;
}

template <class T>
const Matrix<T>& InnerProduct<T>::chol() const {
  if (!state_) throw PreconditionError("InnerProduct: Euclidean product has no Cholesky factor");
  return state_->l;
}

template <class T>
void InnerProduct<T>::check_rows(const Matrix<T>& x) const {
  if (state_ && x.rows() != state_->b.rows()) throw DimensionError("InnerProduct: row dimension mismatch");
}

template <class T>
Matrix<T> InnerProduct<T>::apply_b(const Matrix<T>& x) const {
  check_rows(x);
  return state_ ? matmul(state_->b, x) : x;
}

template <class T>
Matrix<T> InnerProduct<T>::gram(const Matrix<T>& x, const Matrix<T>& y) const {
  return matmul_ah(y, apply_b(x));
}

template <class T>
Matrix<T> InnerProduct<T>::factor_apply(const Matrix<T>& x) const {
  check_rows(x);
  return state_ ? matmul_ah(state_->l, x) : x;
}

template <class T>
double InnerProduct<T>::norm(const Matrix<T>& x) const {
  if (x.cols() != 1) throw DimensionError("InnerProduct::norm expects a single column");
  const Matrix<T> y = factor_apply(x);
  return nrm2(y.rows(), y.data());
}

template class InnerProduct<double>;
template class InnerProduct<cplx>;

}  // namespace ortho
