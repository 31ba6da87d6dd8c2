#include "ortho/gen_householder.hpp"

#include <cmath>
#include <string>

namespace ortho {

std::string_view to_string(SeedChoice c) {
  switch (c) {
    case SeedChoice::DiagonalMLU:
      return "mlu";
    case SeedChoice::QRSeed:
      return "qr";
    case SeedChoice::PolarSeed:
      return "polar";
    case SeedChoice::Explicit:
      return "explicit";
  }
  return "?";
}

SeedChoice parse_seed_choice(std::string_view s) {
  if (s == "mlu" || s == "DiagonalMLU") return SeedChoice::DiagonalMLU;
  if (s == "qr" || s == "QRSeed") return SeedChoice::QRSeed;
  if (s == "polar" || s == "PolarSeed") return SeedChoice::PolarSeed;
  if (s == "explicit" || s == "Explicit") return SeedChoice::Explicit;
  throw ParameterError("unknown seed choice '" + std::string(s) + "'");
}

template <class T>
MLUResult<T> modified_lu(const Matrix<T>& z, double norm_tol) {
  const Index k = z.rows();
  if (z.cols() != k) throw DimensionError("modified_lu: z must be square");
  if (k > 0 && norm2(z) > 1.0 + norm_tol) throw NormBoundError("modified_lu: ||z||_2 exceeds 1");

  MLUResult<T> f{Matrix<T>::identity(k), Matrix<T>::identity(k), Matrix<T>(k, k)};
  Matrix<T> s = z;  // running Schur complement
  for (Index i = 0; i < k; ++i) {
    const T pii = T(-sign_re(s(i, i)));
    f.p_diag(i, i) = pii;
    const T uii = pii - s(i, i);
    f.u(i, i) = uii;
    for (Index j = i + 1; j < k; ++j) f.u(i, j) = -s(i, j);
    for (Index r = i + 1; r < k; ++r) f.l(r, i) = -s(r, i) / uii;
    for (Index j = i + 1; j < k; ++j) {
      const T uij = f.u(i, j);
      for (Index r = i + 1; r < k; ++r) s(r, j) += f.l(r, i) * uij;
    }
  }
  return f;
}

// ---- TSolver ----------------------------------------------------------------

namespace {
template <class T>
Matrix<T> scale_rows_by_diag(const Matrix<T>& d, const Matrix<T>& y, bool conjugate) {
  Matrix<T> out = y;
  for (Index c = 0; c < y.cols(); ++c)
    for (Index i = 0; i < y.rows(); ++i) out(i, c) *= conjugate ? conj(d(i, i)) : d(i, i);
  return out;
}
}  // namespace

template <class T>
Index TSolver<T>::size() const {
  return std::visit(
      [](const auto& f) -> Index {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Mlu>) return f.u.rows();
        if constexpr (std::is_same_v<F, LowerTriangular>) return f.t.rows();
        if constexpr (std::is_same_v<F, Cholesky>) return f.l.rows();
        if constexpr (std::is_same_v<F, Pivoted>) return f.lu.lu.rows();
      },
      rep_);
}

template <class T>
Matrix<T> TSolver<T>::solve(const Matrix<T>& y) const {
  return std::visit(
      [&](const auto& f) -> Matrix<T> {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Mlu>) {
          // T^{-1} = P^H L^{-H} U^{-H}
          Matrix<T> a = tri_solve(f.u, y, Uplo::Upper, Op::ConjTrans);
          Matrix<T> b = tri_solve(f.l, a, Uplo::Lower, Op::ConjTrans, Side::Left, Diag::Unit);
          return scale_rows_by_diag(f.p_diag, b, true);
        } else if constexpr (std::is_same_v<F, LowerTriangular>) {
          return tri_solve(f.t, y, Uplo::Lower);
        } else if constexpr (std::is_same_v<F, Cholesky>) {
          return tri_solve(f.l, tri_solve(f.l, y, Uplo::Lower), Uplo::Lower, Op::ConjTrans);
        } else {
          return f.lu.solve(y);
        }
      },
      rep_);
}

template <class T>
Matrix<T> TSolver<T>::solve_adjoint(const Matrix<T>& y) const {
  return std::visit(
      [&](const auto& f) -> Matrix<T> {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Mlu>) {
          // T^{-H} = U^{-1} L^{-1} P
          Matrix<T> a = scale_rows_by_diag(f.p_diag, y, false);
          Matrix<T> b = tri_solve(f.l, a, Uplo::Lower, Op::None, Side::Left, Diag::Unit);
          return tri_solve(f.u, b, Uplo::Upper);
        } else if constexpr (std::is_same_v<F, LowerTriangular>) {
          return tri_solve(f.t, y, Uplo::Lower, Op::ConjTrans);
        } else if constexpr (std::is_same_v<F, Cholesky>) {
          return tri_solve(f.l, tri_solve(f.l, y, Uplo::Lower), Uplo::Lower, Op::ConjTrans);
        } else {
          return f.lu.solve_adjoint(y);
        }
      },
      rep_);
}

template <class T>
Matrix<T> TSolver<T>::reconstruct() const {
  return std::visit(
      [&](const auto& f) -> Matrix<T> {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Mlu>) {
          return matmul(adjoint(matmul(f.l, f.u)), f.p_diag);
        } else if constexpr (std::is_same_v<F, LowerTriangular>) {
          return f.t;
        } else if constexpr (std::is_same_v<F, Cholesky>) {
          return matmul(f.l, adjoint(f.l));
        } else {
          return f.lu.reconstruct();
        }
      },
      rep_);
}

// ---- seeds --------------------------------------------------------------------

template <class T>
Seed<T> make_seed(const Matrix<T>& z, SeedChoice choice, const Matrix<T>* explicit_p) {
  const Index k = z.rows();
  if (z.cols() != k) throw DimensionError("make_seed: z must be square");
  switch (choice) {
    case SeedChoice::DiagonalMLU: {
      MLUResult<T> f = modified_lu(z);
      Matrix<T> p = f.p_diag;
      return {std::move(p), TSolver<T>(typename TSolver<T>::Mlu{std::move(f.l), std::move(f.u), std::move(f.p_diag)})};
    }
    case SeedChoice::QRSeed: {
      QRPair<T> qr = householder_qr(z, /*nonneg_diag=*/true);
      Matrix<T> t = adjoint(qr.r);
      for (Index i = 0; i < k; ++i) t(i, i) += T(1);
      return {-qr.q, TSolver<T>(typename TSolver<T>::LowerTriangular{std::move(t)})};
    }
    case SeedChoice::PolarSeed: {
      PolarPair<T> pp = polar(z);
      Matrix<T> t = pp.hermitian;
      for (Index i = 0; i < k; ++i) t(i, i) += T(1);
      try {
        return {-pp.unitary, TSolver<T>(typename TSolver<T>::Cholesky{cholesky(t)})};
      } catch (const NotPositiveDefinite& e) {
        throw SingularTError(std::string("polar seed: I + M not positive definite: ") + e.what());
      }
    }
    case SeedChoice::Explicit: {
      if (explicit_p == nullptr) throw ParameterError("explicit seed requires P");
      if (explicit_p->rows() != k || explicit_p->cols() != k) throw DimensionError("explicit seed: P shape");
      if (k > 0 && orthonormality_defect(*explicit_p) > kOrthonormalityThreshold)
        throw PreconditionError("explicit seed: P is not unitary");
      Matrix<T> t = Matrix<T>::identity(k);
      gemm_ah(t, T(-1), z, *explicit_p, T(1));
      try {
        return {*explicit_p, TSolver<T>(typename TSolver<T>::Pivoted{lu_partial(t)})};
      } catch (const SingularError& e) {
        throw SingularTError(std::string("explicit seed: T is singular: ") + e.what());
      }
    }
  }
  throw ParameterError("make_seed: unknown choice");
}

// ---- GenHouseholder -------------------------------------------------------------

template <class T>
GenHouseholder<T>::GenHouseholder(Matrix<T> w, Matrix<T> bw, Matrix<T> x, Seed<T> seed, SeedChoice choice)
    : w_(std::move(w)), bw_(std::move(bw)), x_(std::move(x)), seed_(std::move(seed)), choice_(choice) {
  weighted_ = !(bw_.rows() == 0 && bw_.cols() == 0);
  if (weighted_ && (bw_.rows() != w_.rows() || bw_.cols() != w_.cols()))
    throw DimensionError("GenHouseholder: B*W shape mismatch");
  if (seed_.t.size() != w_.cols()) throw DimensionError("GenHouseholder: T size mismatch");
}

template <class T>
Matrix<T> GenHouseholder<T>::apply(const Matrix<T>& x, bool reverse) const {
  if (x.rows() != n()) throw DimensionError("apply_reflector: row dimension mismatch");
  if (k0() == 0 || x.cols() == 0) return x;
  const Matrix<T> coeff = matmul_ah(bw(), x);
  const Matrix<T> solved = reverse ? seed_.t.solve_adjoint(coeff) : seed_.t.solve(coeff);
  Matrix<T> out = x;
  gemm(out, T(-1), w_, solved, T(1));
  return out;
}

template <class T>
ReflectorDiagnostics GenHouseholder<T>::diagnostics() const {
  ReflectorDiagnostics d;
  if (k0() == 0) return d;
  d.kappa_t = cond2(t());
  // W T^{-1} = (T^{-H} W^H)^H and W T^{-H} = (T^{-1} W^H)^H
  const Matrix<T> wh = adjoint(w_);
  d.wt_inv_norm = norm2(seed_.t.solve_adjoint(wh));
  d.wt_inv_adj_norm = norm2(seed_.t.solve(wh));
  d.bwt_inv_adj_norm = weighted_ ? norm2(seed_.t.solve(adjoint(bw_))) : d.wt_inv_adj_norm;
  return d;
}

template <class T>
GenHouseholder<T> build_reflector(const Matrix<T>& v, SeedChoice choice, const ReflectorOptions& opts,
                                  const Matrix<T>* explicit_p) {
  const Index n = v.rows();
  const Index k0 = v.cols();
  if (k0 > n) throw DimensionError("build_reflector: k0 > n");
  if (opts.check_orthonormality && k0 > 0 && !opts.allow_nonorthonormal) {
    const double defect = orthonormality_defect(v);
    if (!(defect <= kOrthonormalityThreshold))
      throw OrthonormalityError("build_reflector: ||V^H V - I||_2 = " + std::to_string(defect));
  }
  Seed<T> seed = make_seed(v.top_rows(k0), choice, explicit_p);
  Matrix<T> x(n, k0);
  x.set_block(0, 0, seed.p);
  Matrix<T> w = x - v;
  return GenHouseholder<T>(std::move(w), Matrix<T>(), std::move(x), std::move(seed), choice);
}

#define ORTHO_INSTANTIATE(T)                                                                       \
  template MLUResult<T> modified_lu<T>(const Matrix<T>&, double);                                  \
  template class TSolver<T>;                                                                       \
  template Seed<T> make_seed<T>(const Matrix<T>&, SeedChoice, const Matrix<T>*);                   \
  template class GenHouseholder<T>;                                                                \
  template GenHouseholder<T> build_reflector<T>(const Matrix<T>&, SeedChoice, const ReflectorOptions&, \
                                                const Matrix<T>*);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(cplx)
#undef ORTHO_INSTANTIATE

}  // namespace ortho
