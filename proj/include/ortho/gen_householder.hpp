#pragma once

// Generalized Householder transformations H = I - W T^{-1} W^H B that map the
// seed block X onto an orthonormal (or B-orthonormal) block Y = V, with
// W = X - Y. H is applied from its factors and never formed densely.

#include <optional>
#include <string_view>
#include <variant>

#include "ortho/dense.hpp"
#include "ortho/matrix.hpp"

namespace ortho {

/// How the unitary seed P (and with it T) is chosen.
enum class SeedChoice {
  DiagonalMLU,  ///< diagonal +-1 signs picked on the fly by the modified LU
  QRSeed,       ///< P = -Q1 from Z = Q1 R1, T = I + R1^H lower triangular
  PolarSeed,    ///< P = -Q2 from Z = Q2 M, T = I + M Hermitian positive definite
  Explicit,     ///< caller supplies P; T = I - Z^H P factored with pivoted LU
};

std::string_view to_string(SeedChoice c);
/// Accepts "mlu", "qr", "polar", "explicit" (and the enum spellings).
SeedChoice parse_seed_choice(std::string_view s);

/// 1 if Re(mu) >= 0, otherwise -1.
template <class T>
double sign_re(const T& mu) {
  return real_part(mu) >= 0.0 ? 1.0 : -1.0;
}

template <class T>
struct MLUResult {
  Matrix<T> p_diag;  ///< diagonal, entries +-1
  Matrix<T> l;       ///< unit lower triangular
  Matrix<T> u;       ///< upper triangular, |u(i,i)| >= 1
};

/// Pivot-free LU of P - Z where each P(i,i) = -sign(Re Z'(i,i)) is chosen from
/// the current Schur complement Z'. Requires ||z||_2 <= 1 + norm_tol, otherwise
/// throws NormBoundError.
template <class T>
MLUResult<T> modified_lu(const Matrix<T>& z, double norm_tol = 1e-8);

/// Factored T, one representation per seed choice. T is never inverted explicitly.
template <class T>
class TSolver {
 public:
  struct Mlu {
    Matrix<T> l, u, p_diag;  // T = (L U)^H P
  };
  struct LowerTriangular {
    Matrix<T> t;
  };
  struct Cholesky {
    Matrix<T> l;  // T = L L^H
  };
  struct Pivoted {
    PivotedLU<T> lu;
  };

  TSolver() = default;
  explicit TSolver(Mlu f) : rep_(std::move(f)) {}
  explicit TSolver(LowerTriangular f) : rep_(std::move(f)) {}
  explicit TSolver(Cholesky f) : rep_(std::move(f)) {}
  explicit TSolver(Pivoted f) : rep_(std::move(f)) {}

  Index size() const;
  Matrix<T> solve(const Matrix<T>& y) const;          ///< T^{-1} y
  Matrix<T> solve_adjoint(const Matrix<T>& y) const;  ///< T^{-H} y
  Matrix<T> reconstruct() const;

  template <class F>
  const F* get_if() const {
    return std::get_if<F>(&rep_);
  }

 private:
  std::variant<LowerTriangular, Mlu, Cholesky, Pivoted> rep_;
};

/// Unitary seed P and the factored T = I - Z^H P for a k0 x k0 matrix Z
/// (Z = V_top in the Euclidean case, Z = U0^H B V in the B-weighted case).
template <class T>
struct Seed {
  Matrix<T> p;
  TSolver<T> t;
};

/// Throws SingularTError when T cannot be factored (Explicit seeds only, in practice).
template <class T>
Seed<T> make_seed(const Matrix<T>& z, SeedChoice choice, const Matrix<T>* explicit_p = nullptr);

struct ReflectorDiagnostics {
  double kappa_t = 1.0;           ///< cond2(T)
  double wt_inv_norm = 0.0;       ///< ||W T^{-1}||_2
  double wt_inv_adj_norm = 0.0;   ///< ||W T^{-H}||_2
  double bwt_inv_adj_norm = 0.0;  ///< ||B W T^{-H}||_2 (equals wt_inv_adj_norm when unweighted)
};

struct ReflectorOptions {
  bool check_orthonormality = true;
  /// Construct even when ||V^H V - I||_2 exceeds the 1e-8 threshold.
  bool allow_nonorthonormal = false;
};

inline constexpr double kOrthonormalityThreshold = 1e-8;

template <class T>
class GenHouseholder {
 public:
  GenHouseholder() = default;
  /// bw is B*W for a weighted reflector, or empty for the Euclidean one.
  GenHouseholder(Matrix<T> w, Matrix<T> bw, Matrix<T> x, Seed<T> seed, SeedChoice choice);

  Index n() const { return w_.rows(); }
  Index k0() const { return w_.cols(); }
  SeedChoice choice() const { return choice_; }
  bool weighted() const { return weighted_; }
  const Matrix<T>& w() const { return w_; }
  const Matrix<T>& bw() const { return weighted_ ? bw_ : w_; }
  const Matrix<T>& x() const { return x_; }
  const Matrix<T>& p() const { return seed_.p; }
  const TSolver<T>& t_solver() const { return seed_.t; }
  Matrix<T> t() const { return seed_.t.reconstruct(); }

  /// Forward: (I - W T^{-1} W^H B) x.
  /// Reverse: (I - W T^{-H} W^H B) x, which is H^H in the Euclidean case and H^{-1} in the B-weighted case.
  Matrix<T> apply(const Matrix<T>& x, bool reverse = false) const;

  ReflectorDiagnostics diagnostics() const;

 private:
  Matrix<T> w_;
  Matrix<T> bw_;
  Matrix<T> x_;
  Seed<T> seed_;
  SeedChoice choice_ = SeedChoice::QRSeed;
  bool weighted_ = false;
};

/// Reflector with X = [P; 0] and Y = v. Throws OrthonormalityError, DimensionError, SingularTError.
template <class T>
GenHouseholder<T> build_reflector(const Matrix<T>& v, SeedChoice choice, const ReflectorOptions& opts = {},
                                  const Matrix<T>* explicit_p = nullptr);

template <class T>
Matrix<T> apply_reflector(const GenHouseholder<T>& h, const Matrix<T>& x, bool adjoint) {
  return h.apply(x, adjoint);
}

template <class T>
ReflectorDiagnostics reflector_diagnostics(const GenHouseholder<T>& h) {
  return h.diagnostics();
}

}  // namespace ortho
