#pragma once

#include <Eigen/Dense>

#include "ortho/matrix.hpp"
#include "ortho/testgen.hpp"

namespace ortho::test {

inline constexpr double kU = 1.1102230246251565e-16;

template <class T>
using EMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
EMat<T> to_eigen(const Matrix<T>& m) {
  return Eigen::Map<const EMat<T>>(m.data(), m.rows(), m.cols());
}

template <class T>
Matrix<T> from_eigen(const EMat<T>& e) {
  Matrix<T> m(e.rows(), e.cols());
  Eigen::Map<EMat<T>>(m.data(), m.rows(), m.cols()) = e;
  return m;
}

// Spectral norm from the eigenvalues of the Gram matrix, independent of the library's SVD path.
template <class T>
double oracle_norm2(const Matrix<T>& m) {
  if (m.empty()) return 0.0;
  const EMat<T> e = to_eigen(m);
  const EMat<T> g = e.cols() <= e.rows() ? EMat<T>(e.adjoint() * e) : EMat<T>(e * e.adjoint());
  Eigen::SelfAdjointEigenSolver<EMat<T>> es(g);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

template <class T>
double oracle_defect(const Matrix<T>& q) {
  const EMat<T> e = to_eigen(q);
  const EMat<T> g = e.adjoint() * e - EMat<T>::Identity(e.cols(), e.cols());
  Eigen::SelfAdjointEigenSolver<EMat<T>> es(g);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

template <class T>
double max_diff(const Matrix<T>& a, const Matrix<T>& b) {
  return (to_eigen(a) - to_eigen(b)).cwiseAbs().maxCoeff();
}

template <class T>
Matrix<T> gaussian(Index r, Index c, std::uint64_t seed) {
  Rng rng(seed);
  return random_gaussian<T>(rng, r, c);
}

}  // namespace ortho::test
