#include "ortho/b_inner.hpp"

#include <cmath>
#include <string>

#include "ortho/kernels.hpp"

namespace ortho {

template <class T>
double b_orthonormality_defect(const Matrix<T>& x, const InnerProduct<T>& ip) {
  if (x.cols() == 0) return 0.0;
  return orthonormality_defect(ip.factor_apply(x));
}

template <class T>
Matrix<T> initial_b_basis(const InnerProduct<T>& ip, Index m, Index n) {
  if (!ip.is_weighted()) {
    if (n < 0) throw ParameterError("initial_b_basis: n required for the Euclidean product");
    if (m > n) throw DimensionError("initial_b_basis: m > n");
    return Matrix<T>::identity(n, m);
  }
  const Index dim = ip.dim();
  if (n >= 0 && n != dim) throw DimensionError("initial_b_basis: n differs from dim(B)");
  if (m > dim) throw DimensionError("initial_b_basis: m > n");
  // the leading m x m block of L is the Cholesky factor of B's leading principal submatrix
  const Matrix<T> lm = ip.chol().block(0, 0, m, m);
  Matrix<T> u(dim, m);
  u.set_block(0, 0, tri_solve(lm, Matrix<T>::identity(m), Uplo::Lower, Op::ConjTrans));
  return u;
}

template <class T>
BGenHouseholder<T> b_build_reflector(const Matrix<T>& v, const Matrix<T>& u0, const InnerProduct<T>& ip,
                                     SeedChoice choice, const ReflectorOptions& opts, const Matrix<T>* explicit_p) {
  const Index n = v.rows();
  const Index k0 = v.cols();
  if (u0.rows() != n || u0.cols() != k0) throw DimensionError("b_build_reflector: u0 shape differs from v");
  if (k0 > n) throw DimensionError("b_build_reflector: k0 > n");
  if (opts.check_orthonormality && !opts.allow_nonorthonormal && k0 > 0) {
    const double dv = b_orthonormality_defect(v, ip);
    if (!(dv <= kBOrthonormalityThreshold))
      throw OrthonormalityError("b_build_reflector: V is not B-orthonormal (defect " + std::to_string(dv) + ")");
    const double du = b_orthonormality_defect(u0, ip);
    if (!(du <= kBOrthonormalityThreshold))
      throw OrthonormalityError("b_build_reflector: U0 is not B-orthonormal (defect " + std::to_string(du) + ")");
  }
  const Matrix<T> bu0 = ip.apply_b(u0);
  Seed<T> seed = make_seed(matmul_ah(bu0, v), choice, explicit_p);  // Z = U0^H B V
  Matrix<T> x = matmul(u0, seed.p);
  Matrix<T> w = x - v;
  Matrix<T> bw = ip.is_weighted() ? ip.apply_b(w) : Matrix<T>();
  return BGenHouseholder<T>(std::move(w), std::move(bw), std::move(x), std::move(seed), choice);
}

namespace {

// x -= basis * (bbasis^H x) for a single column x
template <class T>
void project_out(const Matrix<T>& basis, const Matrix<T>& bbasis, Index ncols, T* x, Index n) {
  for (Index i = 0; i < ncols; ++i) {
    const T c = kernels::dot(n, bbasis.col(i), x);
    kernels::axpy(n, -c, basis.col(i), x);
  }
}

}  // namespace

template <class T>
QRPair<T> b_householder_qr(const Matrix<T>& a, const Matrix<T>& u_init, const InnerProduct<T>& ip, bool reorth,
                           const Matrix<T>* prefix) {
  const Index n = a.rows();
  const Index k = a.cols();
  if (u_init.rows() != n || u_init.cols() < k) throw DimensionError("b_householder_qr: u_init too small");
  if (prefix && prefix->rows() != n) throw DimensionError("b_householder_qr: prefix row mismatch");
  if (!all_finite(a)) throw BreakdownError("b_householder_qr: non-finite input");

  const Matrix<T> u = u_init.left_cols(k);
  const Matrix<T> bu = ip.apply_b(u);
  const Matrix<T> pre = prefix ? *prefix : Matrix<T>(n, 0);
  const Matrix<T> bpre = ip.apply_b(pre);

  Matrix<T> w(n, k), bw(n, k);
  std::vector<double> beta(static_cast<std::size_t>(k), 0.0);  // 2 / (w^H B w), 0 for the identity reflector
  Matrix<T> r(k, k);

  auto apply_h = [&](Index i, T* x) {
    if (beta[static_cast<std::size_t>(i)] == 0.0) return;
    const T c = kernels::dot(n, bw.col(i), x) * beta[static_cast<std::size_t>(i)];
    kernels::axpy(n, -c, w.col(i), x);
  };

  Matrix<T> y(n, 1);
  for (Index j = 0; j < k; ++j) {
    std::copy(a.col(j), a.col(j) + n, y.data());
    for (Index i = 0; i < j; ++i) apply_h(i, y.data());
    for (Index i = 0; i < j; ++i) {
      const T c = kernels::dot(n, bu.col(i), y.data());
      r(i, j) = c;
      kernels::axpy(n, -c, u.col(i), y.data());
    }
    const double nrm = ip.norm(y);
    if (!std::isfinite(nrm)) throw BreakdownError("b_householder_qr: non-finite B-norm at column " + std::to_string(j));
    const T alpha = -phase(kernels::dot(n, bu.col(j), y.data())) * nrm;
    r(j, j) = alpha;
    if (nrm == 0.0) continue;  // identity reflector

    T* wj = w.col(j);
    std::copy(y.data(), y.data() + n, wj);
    kernels::axpy(n, -alpha, u.col(j), wj);
    if (reorth) {
      project_out(pre, bpre, pre.cols(), wj, n);
      project_out(u, bu, j, wj, n);
    }
    Matrix<T> wcol = w.middle_cols(j, 1);
    const Matrix<T> bwcol = ip.apply_b(wcol);
    bw.set_block(0, j, bwcol);
    const double wbw = real_part(kernels::dot(n, wj, bwcol.data()));
    if (!(wbw > 0.0)) {
      if (!std::isfinite(wbw)) throw BreakdownError("b_householder_qr: non-finite reflector at column " + std::to_string(j));
      continue;
    }
    beta[static_cast<std::size_t>(j)] = 2.0 / wbw;
  }

  // column j of Q is H_0 ... H_j u_j; later reflectors fix u_j
  Matrix<T> q = u;
  for (Index j = 0; j < k; ++j)
    for (Index i = j; i >= 0; --i) apply_h(i, q.col(j));
  return {std::move(q), std::move(r)};
}

template <class T>
TwoStageResult<T> b_two_stage_qr(const Matrix<T>& v, const Matrix<T>& a, const Matrix<T>& u,
                                 const InnerProduct<T>& ip, const TwoStageOptions& opts) {
  const Index n = v.rows();
  const Index k0 = v.cols();
  const Index k = a.cols();
  if (a.rows() != n || u.rows() != n) throw DimensionError("b_two_stage_qr: row counts differ");
  if (k0 + k > n) throw DimensionError("b_two_stage_qr: k0 + k > n");
  if (u.cols() < k0 + k) throw DimensionError("b_two_stage_qr: u needs k0 + k columns");

  auto trailing_qr = [&](const Matrix<T>& x, const Matrix<T>* prefix) -> QRPair<T> {
    if (opts.intra == IntraMethod::Householder) return b_householder_qr(x, u.middle_cols(k0, k), ip, true, prefix);
    try {
      return ip.is_weighted() ? shifted_cholesky_qr(x, &ip.b()) : shifted_cholesky_qr(x);
    } catch (const NotPositiveDefinite& e) {
      throw IntraFailure(std::string("shifted Cholesky-QR failed: ") + e.what());
    }
  };

  TwoStageResult<T> res;
  if (k == 0) {
    res.q = Matrix<T>(n, 0);
    res.r = Matrix<T>(0, 0);
    res.s = Matrix<T>(k0, 0);
    return res;
  }
  if (k0 == 0) {
    QRPair<T> qr = trailing_qr(a, nullptr);
    res.q = std::move(qr.q);
    res.r = std::move(qr.r);
    res.s = Matrix<T>(0, k);
    return res;
  }

  const BGenHouseholder<T> h = b_build_reflector(v, u.left_cols(k0), ip, opts.choice, opts.reflector);
  Matrix<T> ha = h.apply(a, /*reverse=*/true);  // H^{-1} A
  const Matrix<T>& x = h.x();
  res.s = ip.gram(ha, x);  // X^H B (H^{-1} A)
  gemm(ha, T(-1), x, res.s, T(1));
  QRPair<T> qr = trailing_qr(ha, &x);
  res.q = h.apply(qr.q);
  res.r = std::move(qr.r);
  if (opts.diagnostics) res.diagnostics = h.diagnostics();
  return res;
}

template <class T>
BlockQRResult<T> b_block_householder_qr(const std::vector<Matrix<T>>& blocks, const InnerProduct<T>& ip,
                                        const TwoStageOptions& opts) {
  BlockQRResult<T> out;
  if (blocks.empty()) return out;
  const Index n = blocks.front().rows();
  Index total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != n) throw DimensionError("b_block_householder_qr: blocks differ in row count");
    total += b.cols();
    out.block_sizes.push_back(b.cols());
  }
  if (total > n) throw DimensionError("b_block_householder_qr: total columns exceed n");
  const Matrix<T> u = initial_b_basis(ip, total, n);

  out.q = Matrix<T>(n, total);
  out.r = Matrix<T>(total, total);
  Index off = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Index ki = blocks[i].cols();
    TwoStageResult<T> step;
    try {
      step = b_two_stage_qr(out.q.left_cols(off), blocks[i], u.left_cols(off + ki), ip, opts);
    } catch (const IntraFailure& e) {
      throw IntraFailure(std::string(e.what()) + " (block " + std::to_string(i) + ")", static_cast<long>(i));
    }
    out.q.set_block(0, off, step.q);
    if (off > 0) out.r.set_block(0, off, step.s);
    out.r.set_block(off, off, step.r);
    if (step.diagnostics) out.max_kappa_t = std::max(out.max_kappa_t, step.diagnostics->kappa_t);
    off += ki;
  }
  return out;
}

#define ORTHO_INSTANTIATE(T)                                                                                    \
  template double b_orthonormality_defect<T>(const Matrix<T>&, const InnerProduct<T>&);                         \
  template Matrix<T> initial_b_basis<T>(const InnerProduct<T>&, Index, Index);                                  \
  template BGenHouseholder<T> b_build_reflector<T>(const Matrix<T>&, const Matrix<T>&, const InnerProduct<T>&,  \
                                                   SeedChoice, const ReflectorOptions&, const Matrix<T>*);      \
  template QRPair<T> b_householder_qr<T>(const Matrix<T>&, const Matrix<T>&, const InnerProduct<T>&, bool,      \
                                         const Matrix<T>*);                                                     \
  template TwoStageResult<T> b_two_stage_qr<T>(const Matrix<T>&, const Matrix<T>&, const Matrix<T>&,            \
                                               const InnerProduct<T>&, const TwoStageOptions&);                 \
  template BlockQRResult<T> b_block_householder_qr<T>(const std::vector<Matrix<T>>&, const InnerProduct<T>&,    \
                                                      const TwoStageOptions&);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(cplx)
#undef ORTHO_INSTANTIATE

}  // namespace ortho
