#include "ortho/two_stage.hpp"

#include <algorithm>
#include <string>

#include "ortho/metrics.hpp"

namespace ortho {

std::string_view to_string(IntraMethod m) { return m == IntraMethod::Householder ? "house" : "cholshift"; }

IntraMethod parse_intra_method(std::string_view s) {
  if (s == "house" || s == "householder" || s == "Householder") return IntraMethod::Householder;
  if (s == "cholshift" || s == "shifted_cholesky" || s == "ShiftedCholesky") return IntraMethod::ShiftedCholesky;
  throw ParameterError("unknown intra method '" + std::string(s) + "'");
}

template <class T>
QRPair<T> intra_qr(const Matrix<T>& x, IntraMethod method, long block) {
  if (method == IntraMethod::Householder) return householder_qr(x);
  try {
    return shifted_cholesky_qr(x);
  } catch (const NotPositiveDefinite& e) {
    throw IntraFailure("shifted Cholesky-QR failed at pivot " + std::to_string(e.step()) +
                           (block >= 0 ? " of block " + std::to_string(block) : std::string()),
                       block);
  }
}

template <class T>
TwoStageResult<T> two_stage_qr(const Matrix<T>& v, const Matrix<T>& a, const TwoStageOptions& opts,
                               const Matrix<T>* explicit_p) {
  const Index n = v.rows();
  const Index k0 = v.cols();
  const Index k = a.cols();
  if (a.rows() != n) throw DimensionError("two_stage_qr: V and A row counts differ");
  if (k0 + k > n) throw DimensionError("two_stage_qr: k0 + k > n");

  TwoStageResult<T> res;
  if (k == 0) {
    res.q = Matrix<T>(n, 0);
    res.r = Matrix<T>(0, 0);
    res.s = Matrix<T>(k0, 0);
    return res;
  }
  if (k0 == 0) {
    QRPair<T> qr = intra_qr(a, opts.intra);
    res.q = std::move(qr.q);
    res.r = std::move(qr.r);
    res.s = Matrix<T>(0, k);
    return res;
  }

  const GenHouseholder<T> h = build_reflector(v, opts.choice, opts.reflector, explicit_p);
  // H^H A is computed once; its top rows give S, its bottom rows feed the intra QR
  const Matrix<T> ha = h.apply(a, /*reverse=*/true);
  res.s = matmul_ah(h.p(), ha.top_rows(k0));
  QRPair<T> qr = intra_qr(ha.bottom_rows(n - k0), opts.intra);
  Matrix<T> padded(n, k);
  padded.set_block(k0, 0, qr.q);
  res.q = h.apply(padded);
  res.r = std::move(qr.r);
  if (opts.diagnostics) res.diagnostics = h.diagnostics();
  return res;
}

template <class T>
std::vector<Matrix<T>> split_blocks(const Matrix<T>& a, Index p) {
  if (p <= 0 || a.cols() % p != 0) throw ParameterError("split_blocks: column count not divisible by p");
  const Index k = a.cols() / p;
  std::vector<Matrix<T>> out;
  out.reserve(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) out.push_back(a.middle_cols(i * k, k));
  return out;
}

template <class T>
BlockQRResult<T> block_householder_qr(const std::vector<Matrix<T>>& blocks, const TwoStageOptions& opts) {
  BlockQRResult<T> out;
  if (blocks.empty()) return out;
  const Index n = blocks.front().rows();
  Index total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != n) throw DimensionError("block_householder_qr: blocks differ in row count");
    total += b.cols();
    out.block_sizes.push_back(b.cols());
  }
  if (total > n) throw DimensionError("block_householder_qr: total columns exceed n");

  out.q = Matrix<T>(n, total);
  out.r = Matrix<T>(total, total);
  QRPair<T> first = intra_qr(blocks[0], opts.intra, 0);
  out.q.set_block(0, 0, first.q);
  out.r.set_block(0, 0, first.r);
  Index off = blocks[0].cols();
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    const Matrix<T> v = out.q.left_cols(off);
    TwoStageResult<T> step;
    try {
      step = two_stage_qr(v, blocks[i], opts);
    } catch (const IntraFailure& e) {
      throw IntraFailure(std::string(e.what()) + " (block " + std::to_string(i) + ")", static_cast<long>(i));
    }
    out.q.set_block(0, off, step.q);
    out.r.set_block(0, off, step.s);
    out.r.set_block(off, off, step.r);
    if (step.diagnostics) out.max_kappa_t = std::max(out.max_kappa_t, step.diagnostics->kappa_t);
    off += blocks[i].cols();
  }
  return out;
}

template <class T>
TwoStageResult<T> reorthogonalized_two_stage(const Matrix<T>& v, const Matrix<T>& a, const TwoStageOptions& opts,
                                             int sweeps) {
  if (sweeps < 1) throw ParameterError("reorthogonalized_two_stage: sweeps must be >= 1");
  TwoStageResult<T> res = two_stage_qr(v, a, opts);
  auto record = [&] {
    res.sweeps.push_back({loss_of_orthogonality(v, res.q), cross_orthogonality(v, res.q),
                          relative_residual(a, v, res.s, res.q, res.r)});
  };
  record();
  for (int sw = 1; sw < sweeps; ++sw) {
    // Q = V S2 + Q2 R2, so A = V (S + S2 R) + Q2 (R2 R)
    TwoStageResult<T> next = two_stage_qr(v, res.q, opts);
    gemm(res.s, T(1), next.s, res.r, T(1));
    res.r = matmul(next.r, res.r);
    res.q = std::move(next.q);
    if (next.diagnostics) res.diagnostics = next.diagnostics;
    record();
  }
  return res;
}

#define ORTHO_INSTANTIATE(T)                                                                                   \
  template QRPair<T> intra_qr<T>(const Matrix<T>&, IntraMethod, long);                                         \
  template TwoStageResult<T> two_stage_qr<T>(const Matrix<T>&, const Matrix<T>&, const TwoStageOptions&,       \
                                             const Matrix<T>*);                                                \
  template std::vector<Matrix<T>> split_blocks<T>(const Matrix<T>&, Index);                                    \
  template BlockQRResult<T> block_householder_qr<T>(const std::vector<Matrix<T>>&, const TwoStageOptions&);    \
  template TwoStageResult<T> reorthogonalized_two_stage<T>(const Matrix<T>&, const Matrix<T>&,                 \
                                                           const TwoStageOptions&, int);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(cplx)
#undef ORTHO_INSTANTIATE

}  // namespace ortho
