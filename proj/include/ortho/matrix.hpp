#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "ortho/errors.hpp"

namespace ortho {

using Index = std::ptrdiff_t;
using cplx = std::complex<double>;

enum class Field { Real, Complex };

template <class T>
inline constexpr bool is_complex_v = false;
template <class R>
inline constexpr bool is_complex_v<std::complex<R>> = true;

template <class T>
constexpr Field field_of() {
  return is_complex_v<T> ? Field::Complex : Field::Real;
}

inline constexpr double unit_roundoff = 0x1p-53;

template <class T>
constexpr T conj(const T& x) {
  if constexpr (is_complex_v<T>) {
    return std::conj(x);
  } else {
    return x;
  }
}

inline double real_part(double x) { return x; }
inline double real_part(const cplx& x) { return x.real(); }

/// x / |x|, with phase(0) = 1.
template <class T>
T phase(const T& x) {
  const double a = std::abs(x);
  if (a == 0.0) return T(1);
  return x / a;
}

/// Dense column-major matrix over double or complex<double>.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(checked_size(rows, cols), T(0)) {}

  /// Row-wise literal, convenient for small fixtures: Matrix<double>{{1, 2}, {3, 4}}.
  Matrix(std::initializer_list<std::initializer_list<T>> rows_list) {
    rows_ = static_cast<Index>(rows_list.size());
    cols_ = rows_ == 0 ? 0 : static_cast<Index>(rows_list.begin()->size());
    data_.assign(checked_size(rows_, cols_), T(0));
    Index i = 0;
    for (const auto& row : rows_list) {
      if (static_cast<Index>(row.size()) != cols_) throw DimensionError("ragged matrix literal");
      Index j = 0;
      for (const T& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static Matrix zeros(Index rows, Index cols) { return Matrix(rows, cols); }
  static Matrix identity(Index n) { return identity(n, n); }
  static Matrix identity(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < std::min(rows, cols); ++i) m(i, i) = T(1);
    return m;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return rows_ * cols_; }
  bool empty() const { return size() == 0; }

  T& operator()(Index i, Index j) { return data_[static_cast<std::size_t>(i + j * rows_)]; }
  const T& operator()(Index i, Index j) const { return data_[static_cast<std::size_t>(i + j * rows_)]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T* col(Index j) { return data_.data() + j * rows_; }
  const T* col(Index j) const { return data_.data() + j * rows_; }
  std::span<T> col_span(Index j) { return {col(j), static_cast<std::size_t>(rows_)}; }
  std::span<const T> col_span(Index j) const { return {col(j), static_cast<std::size_t>(rows_)}; }

  Matrix block(Index r0, Index c0, Index nr, Index nc) const {
    check_block(r0, c0, nr, nc);
    Matrix out(nr, nc);
    for (Index j = 0; j < nc; ++j) std::copy_n(col(c0 + j) + r0, nr, out.col(j));
    return out;
  }
  Matrix top_rows(Index nr) const { return block(0, 0, nr, cols_); }
  Matrix bottom_rows(Index nr) const { return block(rows_ - nr, 0, nr, cols_); }
  Matrix left_cols(Index nc) const { return block(0, 0, rows_, nc); }
  Matrix middle_cols(Index c0, Index nc) const { return block(0, c0, rows_, nc); }

  void set_block(Index r0, Index c0, const Matrix& src) {
    check_block(r0, c0, src.rows(), src.cols());
    for (Index j = 0; j < src.cols(); ++j) std::copy_n(src.col(j), src.rows(), col(c0 + j) + r0);
  }

  void fill(const T& v) { std::fill(data_.begin(), data_.end(), v); }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= T(-1); }

  bool operator==(const Matrix& o) const = default;

 private:
  static std::size_t checked_size(Index r, Index c) {
    if (r < 0 || c < 0) throw DimensionError("negative matrix dimension");
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(c);
  }
  void check_block(Index r0, Index c0, Index nr, Index nc) const {
    if (r0 < 0 || c0 < 0 || nr < 0 || nc < 0 || r0 + nr > rows_ || c0 + nc > cols_)
      throw DimensionError("block out of range");
  }
  void check_same(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("shape mismatch in elementwise op");
  }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> adjoint(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) out(j, i) = conj(a(i, j));
  return out;
}

template <class T>
Matrix<T> hcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.empty() && a.rows() == 0) return b;
  if (a.rows() != b.rows()) throw DimensionError("hcat: row mismatch");
  Matrix<T> out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

template <class T>
Matrix<T> vcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols()) throw DimensionError("vcat: column mismatch");
  Matrix<T> out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

template <class T>
Matrix<cplx> to_complex(const Matrix<T>& a) {
  Matrix<cplx> out(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) out(i, j) = cplx(a(i, j));
  return out;
}

template <class T>
double norm_fro(const Matrix<T>& a) {
  double scale = 0.0;
  for (Index i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a.data()[i]));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double v = std::abs(a.data()[i]) / scale;
    sum += v * v;
  }
  return scale * std::sqrt(sum);
}

template <class T>
double max_abs(const Matrix<T>& a) {
  double m = 0.0;
  for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

template <class T>
bool all_finite(const Matrix<T>& a) {
  for (Index i = 0; i < a.size(); ++i) {
    if constexpr (is_complex_v<T>) {
      if (!std::isfinite(a.data()[i].real()) || !std::isfinite(a.data()[i].imag())) return false;
    } else {
      if (!std::isfinite(a.data()[i])) return false;
    }
  }
  return true;
}

/// Zero everything strictly below the diagonal.
template <class T>
void zero_lower(Matrix<T>& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = j + 1; i < a.rows(); ++i) a(i, j) = T(0);
}

}  // namespace ortho
