#include "ortho/baselines.hpp"

#include "ortho/b_inner.hpp"

namespace ortho {

std::string_view to_string(BaselineScheme s) {
  switch (s) {
    case BaselineScheme::BCGS:
      return "bcgs";
    case BaselineScheme::BCGS2:
      return "bcgs2";
    case BaselineScheme::BMGS:
      return "bmgs";
    case BaselineScheme::BMGS_WY:
      return "bmgs_wy";
    case BaselineScheme::CholQR2Stage:
      return "cholqr2stage";
  }
  return "?";
}

std::string sequence_label(const std::vector<Step>& seq) {
  std::string out;
  for (Step s : seq) out += s == Step::Inter ? 'a' : 'b';
  return out;
}

namespace {

template <class T>
std::vector<Matrix<T>> split_v(const Matrix<T>& v, Index width) {
  std::vector<Matrix<T>> out;
  if (width <= 0 || width >= v.cols()) {
    out.push_back(v);
    return out;
  }
  for (Index c = 0; c < v.cols(); c += width) out.push_back(v.middle_cols(c, std::min(width, v.cols() - c)));
  return out;
}

template <class T>
QRPair<T> intra_step(const Matrix<T>& x, IntraMethod method, const InnerProduct<T>& ip, const Matrix<T>* u_cols,
                     long block) {
  if (!ip.is_weighted()) return intra_qr(x, method, block);
  if (method == IntraMethod::Householder) return b_householder_qr(x, *u_cols, ip, true);
  try {
    return shifted_cholesky_qr(x, &ip.b());
  } catch (const NotPositiveDefinite& e) {
    throw IntraFailure("shifted Cholesky-QR failed at pivot " + std::to_string(e.step()) + " of block " +
                           std::to_string(block),
                       block);
  }
}

}  // namespace

template <class T>
Matrix<T> bmgs_inter(const std::vector<Matrix<T>>& v_blocks, const Matrix<T>& a, bool wy, Matrix<T>* s_out) {
  Matrix<T> v;
  for (const auto& b : v_blocks) {
    if (b.rows() != a.rows()) throw DimensionError("bmgs_inter: block row mismatch");
    v = hcat(v, b);
  }
  if (v.cols() == 0) {
    if (s_out) *s_out = Matrix<T>(0, a.cols());
    return a;
  }
  Matrix<T> x = a;
  Matrix<T> s(v.cols(), a.cols());
  if (!wy) {
    Index off = 0;
    for (const auto& b : v_blocks) {
      const Matrix<T> sj = matmul_ah(b, x);
      gemm(x, T(-1), b, sj, T(1));
      s.set_block(off, 0, sj);
      off += b.cols();
    }
  } else {
    // I + L is unit lower triangular: identity diagonal blocks, V_i^H V_j below them
    const Matrix<T> g = matmul_ah(v, v);
    Matrix<T> il = Matrix<T>::identity(v.cols());
    Index off = 0;
    for (const auto& b : v_blocks) {
      const Index end = off + b.cols();
      for (Index j = off; j < end; ++j)
        for (Index i = end; i < v.cols(); ++i) il(i, j) = g(i, j);
      off = end;
    }
    s = tri_solve(il, matmul_ah(v, x), Uplo::Lower, Op::None, Side::Left, Diag::Unit);
    gemm(x, T(-1), v, s, T(1));
  }
  if (s_out) *s_out = std::move(s);
  return x;
}

template <class T>
TwoStageResult<T> bcgs_two_stage(const Matrix<T>& v, const Matrix<T>& a, const BaselineSpec& spec) {
  if (v.rows() != a.rows()) throw DimensionError("bcgs_two_stage: V and A row counts differ");
  if (v.cols() + a.cols() > a.rows()) throw DimensionError("bcgs_two_stage: k0 + k > n");
  if (spec.scheme == BaselineScheme::CholQR2Stage) return cholqr_two_stage(v, a);

  std::vector<Step> seq = spec.reorth_sequence;
  if (spec.scheme == BaselineScheme::BCGS2) seq = {Step::Inter, Step::Intra, Step::Inter, Step::Intra};
  if (seq.empty() || seq.back() != Step::Intra) throw ParameterError("bcgs_two_stage: sequence must end with Intra");

  const Index k = a.cols();
  const bool bmgs = spec.scheme == BaselineScheme::BMGS || spec.scheme == BaselineScheme::BMGS_WY;
  const std::vector<Matrix<T>> vb = split_v(v, spec.v_block);

  TwoStageResult<T> res;
  res.q = a;
  res.s = Matrix<T>(v.cols(), k);
  res.r = Matrix<T>::identity(k);
  for (Step st : seq) {
    if (st == Step::Inter) {
      Matrix<T> si;
      if (bmgs) {
        res.q = bmgs_inter(vb, res.q, spec.scheme == BaselineScheme::BMGS_WY, &si);
      } else {
        // X - (V S) with the product formed first; folding V S into X term by
        // term rounds differently and can hide the cancellation error
        si = matmul_ah(v, res.q);
        res.q = res.q - matmul(v, si);
      }
      gemm(res.s, T(1), si, res.r, T(1));
    } else {
      QRPair<T> qr = intra_qr(res.q, spec.intra);
      res.q = std::move(qr.q);
      res.r = matmul(qr.r, res.r);
    }
  }
  zero_lower(res.r);
  return res;
}

template <class T>
BlockQRResult<T> bcgs2_block(const std::vector<Matrix<T>>& blocks, IntraMethod intra, const InnerProduct<T>& ip) {
  BlockQRResult<T> out;
  if (blocks.empty()) return out;
  const Index n = blocks.front().rows();
  Index total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != n) throw DimensionError("bcgs2_block: blocks differ in row count");
    total += b.cols();
    out.block_sizes.push_back(b.cols());
  }
  if (total > n) throw DimensionError("bcgs2_block: total columns exceed n");
  const Matrix<T> u = ip.is_weighted() ? initial_b_basis(ip, total, n) : Matrix<T>();

  out.q = Matrix<T>(n, total);
  out.r = Matrix<T>(total, total);
  Index off = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Index ki = blocks[i].cols();
    const long bi = static_cast<long>(i);
    const Matrix<T> ucols = ip.is_weighted() ? u.middle_cols(off, ki) : Matrix<T>();
    const Matrix<T>* up = ip.is_weighted() ? &ucols : nullptr;
    if (off == 0) {
      QRPair<T> qr = intra_step(blocks[i], intra, ip, up, bi);
      out.q.set_block(0, 0, qr.q);
      out.r.set_block(0, 0, qr.r);
      off += ki;
      continue;
    }
    const Matrix<T> v = out.q.left_cols(off);
    Matrix<T> x = blocks[i];
    Matrix<T> s1 = ip.gram(x, v);  // V^H B X
    x = x - matmul(v, s1);
    QRPair<T> qr1 = intra_step(x, intra, ip, up, bi);
    Matrix<T> s2 = ip.gram(qr1.q, v);
    qr1.q = qr1.q - matmul(v, s2);
    QRPair<T> qr2 = intra_step(qr1.q, intra, ip, up, bi);
    // X = V (S1 + S2 R1) + Q2 (R2 R1)
    gemm(s1, T(1), s2, qr1.r, T(1));
    Matrix<T> r = matmul(qr2.r, qr1.r);
    zero_lower(r);
    out.q.set_block(0, off, qr2.q);
    out.r.set_block(0, off, s1);
    out.r.set_block(off, off, r);
    off += ki;
  }
  return out;
}

template <class T>
TwoStageResult<T> cholqr_two_stage(const Matrix<T>& v, const Matrix<T>& a) {
  if (v.rows() != a.rows()) throw DimensionError("cholqr_two_stage: V and A row counts differ");
  TwoStageResult<T> res;
  res.s = matmul_ah(v, a);
  Matrix<T> g = matmul_ah(a, a);
  gemm_ah(g, T(-1), res.s, res.s, T(1));
  res.r = adjoint(cholesky(g));
  Matrix<T> x = a;
  gemm(x, T(-1), v, res.s, T(1));
  res.q = tri_solve(res.r, x, Uplo::Upper, Op::None, Side::Right);
  return res;
}

#define ORTHO_INSTANTIATE(T)                                                                                      \
  template TwoStageResult<T> bcgs_two_stage<T>(const Matrix<T>&, const Matrix<T>&, const BaselineSpec&);          \
  template BlockQRResult<T> bcgs2_block<T>(const std::vector<Matrix<T>>&, IntraMethod, const InnerProduct<T>&);   \
  template Matrix<T> bmgs_inter<T>(const std::vector<Matrix<T>>&, const Matrix<T>&, bool, Matrix<T>*);            \
  template TwoStageResult<T> cholqr_two_stage<T>(const Matrix<T>&, const Matrix<T>&);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(cplx)
#undef ORTHO_INSTANTIATE

}  // namespace ortho
