#pragma once

// Stability metrics. All spectral norms are exact (SVD based).

#include "ortho/inner_product.hpp"
#include "ortho/matrix.hpp"

namespace ortho {

/// ||[V,Q]^H B [V,Q] - I||_2, or ||Q^H B Q - I||_2 when v has no columns.
template <class T>
double loss_of_orthogonality(const Matrix<T>& v, const Matrix<T>& q, const InnerProduct<T>& ip = {});

/// ||V^H B Q||_F
template <class T>
double cross_orthogonality(const Matrix<T>& v, const Matrix<T>& q, const InnerProduct<T>& ip = {});

/// ||A - V S - Q R||_2 / ||A||_2; pass empty v and s for ||A - Q R||_2 / ||A||_2.
template <class T>
double relative_residual(const Matrix<T>& a, const Matrix<T>& v, const Matrix<T>& s, const Matrix<T>& q,
                         const Matrix<T>& r);

}  // namespace ortho
