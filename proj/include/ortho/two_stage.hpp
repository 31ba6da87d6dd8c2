#pragma once

// Two-stage Householder-QR of [V, A] given orthonormal V, and the sequential
// multi-block driver built on it.

#include <optional>
#include <string_view>
#include <vector>

#include "ortho/dense.hpp"
#include "ortho/gen_householder.hpp"
#include "ortho/matrix.hpp"

namespace ortho {

enum class IntraMethod { Householder, ShiftedCholesky };

std::string_view to_string(IntraMethod m);
/// Accepts "house", "householder", "cholshift", "shifted_cholesky".
IntraMethod parse_intra_method(std::string_view s);

struct SweepMetrics {
  double loss_orth = 0.0;
  double cross_orth = 0.0;
  double rel_residual = 0.0;
};

template <class T>
struct TwoStageResult {
  Matrix<T> q;  ///< n x k
  Matrix<T> r;  ///< k x k upper triangular
  Matrix<T> s;  ///< k0 x k
  std::optional<ReflectorDiagnostics> diagnostics;
  std::vector<SweepMetrics> sweeps;  ///< filled by multi-sweep drivers only
};

struct TwoStageOptions {
  SeedChoice choice = SeedChoice::QRSeed;
  IntraMethod intra = IntraMethod::Householder;
  /// Compute kappa(T) and ||W T^{-1}||_2 (costs an SVD of an k0 x n matrix).
  bool diagnostics = true;
  ReflectorOptions reflector;
};

/// Intra-block QR of x by the selected method. ShiftedCholesky breakdown throws IntraFailure.
template <class T>
QRPair<T> intra_qr(const Matrix<T>& x, IntraMethod method, long block = -1);

/// A = V S + Q R with [V, Q] orthonormal. Throws SingularTError, IntraFailure,
/// OrthonormalityError, DimensionError.
template <class T>
TwoStageResult<T> two_stage_qr(const Matrix<T>& v, const Matrix<T>& a, const TwoStageOptions& opts = {},
                               const Matrix<T>* explicit_p = nullptr);

template <class T>
struct BlockQRResult {
  Matrix<T> q;
  Matrix<T> r;
  std::vector<Index> block_sizes;
  double max_kappa_t = 1.0;  ///< largest kappa(T) over all blocks (1 when diagnostics are off)
};

/// Splits a into p consecutive column blocks of equal width (a.cols() must be divisible by p).
template <class T>
std::vector<Matrix<T>> split_blocks(const Matrix<T>& a, Index p);

/// First block by plain intra QR, every later block by two_stage_qr against
/// all previously computed columns. IntraFailure carries the block index.
template <class T>
BlockQRResult<T> block_householder_qr(const std::vector<Matrix<T>>& blocks, const TwoStageOptions& opts = {});

/// Repeats two_stage_qr against v on the previous Q, folding S and R so the
/// returned triple still factors the original a. Records metrics after every sweep.
template <class T>
TwoStageResult<T> reorthogonalized_two_stage(const Matrix<T>& v, const Matrix<T>& a, const TwoStageOptions& opts,
                                             int sweeps);

}  // namespace ortho
