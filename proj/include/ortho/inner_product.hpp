#pragma once

// <x, y>_B = y^H B x for Hermitian positive definite B, or the plain Euclidean
// product. The Cholesky factor of B is computed once and shared by copies.

#include <memory>

#include "ortho/dense.hpp"
#include "ortho/matrix.hpp"

namespace ortho {

template <class T>
class InnerProduct {
 public:
  enum class Kind { Euclidean, Weighted };

  InnerProduct() = default;
  static InnerProduct euclidean() { return InnerProduct(); }
  /// Throws PreconditionError if b is not Hermitian, NotPositiveDefinite if it is indefinite.
  static InnerProduct weighted(Matrix<T> b);

  Kind kind() const { return state_ ? Kind::Weighted : Kind::Euclidean; }
  bool is_weighted() const { return state_ != nullptr; }
  /// Dimension of B; 0 for the Euclidean product (any dimension).
  Index dim() const { return state_ ? state_->b.rows() : 0; }
  const Matrix<T>& b() const;
  /// Lower-triangular L with B = L L^H.
  const Matrix<T>& chol() const;

  /// B x (x itself when Euclidean).
  Matrix<T> apply_b(const Matrix<T>& x) const;
  /// y^H B x.
  Matrix<T> gram(const Matrix<T>& x, const Matrix<T>& y) const;
  /// L^H x, so that x^H B y = (L^H x)^H (L^H y).
  Matrix<T> factor_apply(const Matrix<T>& x) const;
  /// sqrt(x^H B x) for a single column x.
  double norm(const Matrix<T>& x) const;

 private:
  struct State {
    Matrix<T> b;
    Matrix<T> l;
  };
  std::shared_ptr<const State> state_;

  void check_rows(const Matrix<T>& x) const;
};

}  // namespace ortho
