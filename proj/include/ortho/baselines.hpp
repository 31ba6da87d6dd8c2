#pragma once

// Block Gram-Schmidt competitors: BCGS with arbitrary inter/intra sequences,
// BCGS2, BMGS (plain and WY), and two-stage Cholesky-QR.

#include <string>
#include <string_view>
#include <vector>

#include "ortho/inner_product.hpp"
#include "ortho/two_stage.hpp"

namespace ortho {

enum class BaselineScheme { BCGS, BCGS2, BMGS, BMGS_WY, CholQR2Stage };
enum class Step { Inter, Intra };

std::string_view to_string(BaselineScheme s);
/// Compact label with 'a' for Inter and 'b' for Intra, e.g. "abab".
std::string sequence_label(const std::vector<Step>& seq);

struct BaselineSpec {
  BaselineScheme scheme = BaselineScheme::BCGS;
  IntraMethod intra = IntraMethod::Householder;
  std::vector<Step> reorth_sequence{Step::Inter, Step::Intra};
  /// Column width of the V blocks the BMGS schemes project against one by one; 0 treats V as one block.
  Index v_block = 0;
};

/// Runs spec.reorth_sequence on A. S is accumulated across Inter
/// steps and R composed across Intra steps, so A = V S + Q R holds throughout.
template <class T>
TwoStageResult<T> bcgs_two_stage(const Matrix<T>& v, const Matrix<T>& a, const BaselineSpec& spec);

/// Per block: Inter, Intra, Inter, Intra against all previous columns. The
/// first block gets a single Intra. With a weighted product the Householder
/// intra step is the B-Householder QR onto the matching columns of initial_b_basis.
template <class T>
BlockQRResult<T> bcgs2_block(const std::vector<Matrix<T>>& blocks, IntraMethod intra,
                             const InnerProduct<T>& ip = {});

/// Projects a against the blocks one at a time (plain) or through
/// I - V T V^H with T = (I + L)^{-1}, L the strictly block-lower part of V^H V (wy).
/// If s_out is given it receives S with a = V S + result.
template <class T>
Matrix<T> bmgs_inter(const std::vector<Matrix<T>>& v_blocks, const Matrix<T>& a, bool wy,
                     Matrix<T>* s_out = nullptr);

/// S = V^H A, R^H R = A^H A - S^H S, Q = (A - V S) R^{-1}. Throws NotPositiveDefinite.
template <class T>
TwoStageResult<T> cholqr_two_stage(const Matrix<T>& v, const Matrix<T>& a);

}  // namespace ortho
