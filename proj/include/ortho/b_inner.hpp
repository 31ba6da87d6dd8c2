#pragma once

// Orthogonalization under the B-inner product <x, y>_B = y^H B x.
// H = I - W T^{-1} W^H B maps X = U0 P onto a B-orthonormal V; its inverse is
// I - W T^{-H} W^H B.

#include <vector>

#include "ortho/gen_householder.hpp"
#include "ortho/inner_product.hpp"
#include "ortho/two_stage.hpp"

namespace ortho {

template <class T>
using BGenHouseholder = GenHouseholder<T>;

inline constexpr double kBOrthonormalityThreshold = 1e-6;

/// ||(L^H x)^H (L^H x) - I||_2 with B = L L^H, i.e. the B-orthonormality defect of x.
template <class T>
double b_orthonormality_defect(const Matrix<T>& x, const InnerProduct<T>& ip);

/// U with U^H B U = I_m: the first m canonical vectors transformed by the
/// inverse Cholesky factor of B's leading m x m block. n is only needed for the
/// Euclidean product (where U = [I; 0]).
template <class T>
Matrix<T> initial_b_basis(const InnerProduct<T>& ip, Index m, Index n = -1);

/// Reflector with X = u0 P and Y = v, with P chosen from Z = u0^H B v.
template <class T>
BGenHouseholder<T> b_build_reflector(const Matrix<T>& v, const Matrix<T>& u0, const InnerProduct<T>& ip,
                                     SeedChoice choice, const ReflectorOptions& opts = {},
                                     const Matrix<T>* explicit_p = nullptr);

/// Left-looking Householder QR under the B-inner product. Column j is sent onto
/// u_init(:, j) by a B-reflector I - 2 w w^H B / (w^H B w). With reorth, each w is
/// B-orthogonalized once more against [prefix, u_init(:, 0:j)] before use.
/// A column that is exactly zero after projection gets the identity reflector
/// and a zero diagonal in R; non-finite data throws BreakdownError.
template <class T>
QRPair<T> b_householder_qr(const Matrix<T>& a, const Matrix<T>& u_init, const InnerProduct<T>& ip, bool reorth = true,
                           const Matrix<T>* prefix = nullptr);

/// A = V S + Q R with [V, Q] B-orthonormal; u supplies k0 + k B-orthonormal columns.
template <class T>
TwoStageResult<T> b_two_stage_qr(const Matrix<T>& v, const Matrix<T>& a, const Matrix<T>& u,
                                 const InnerProduct<T>& ip, const TwoStageOptions& opts = {});

/// Multi-block driver: block 1 by b_householder_qr, later blocks by b_two_stage_qr
/// against all previous columns, all sharing the basis from initial_b_basis.
template <class T>
BlockQRResult<T> b_block_householder_qr(const std::vector<Matrix<T>>& blocks, const InnerProduct<T>& ip,
                                        const TwoStageOptions& opts = {});

}  // namespace ortho
