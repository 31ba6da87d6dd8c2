#pragma once

// Seeded generators for every test-matrix family. Identical parameters and
// seed give bit-identical output within this implementation.

#include <cstdint>
#include <string_view>
#include <vector>

#include "ortho/matrix.hpp"

namespace ortho {

/// SplitMix64 stream with a Box-Muller normal transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();

  template <class T>
  T normal_scalar() {
    if constexpr (is_complex_v<T>) {
      const double re = normal();
      return T(re, normal());
    } else {
      return normal();
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Entries drawn independently from N(0, 1) (real and imaginary parts separately for complex).
template <class T>
Matrix<T> random_gaussian(Rng& rng, Index rows, Index cols);

/// n values from 10^lo to 10^hi, evenly spaced in the exponent.
std::vector<double> logspace(double lo, double hi, Index n);

template <class T>
Matrix<T> gen_random_orthonormal(Index n, Index k, std::uint64_t seed);

template <class T>
Matrix<T> random_orthonormal(Rng& rng, Index n, Index k);

template <class T>
struct VAPair {
  Matrix<T> v;
  Matrix<T> a;
};

/// The 4 x 2 pair on which block classical Gram-Schmidt loses all orthogonality.
VAPair<double> fixture_badbcg();

/// Upper triangular k0 x k0 with (i, i) = 1 + alpha / sqrt(m), (i, j > i) = -1 / sqrt(m), m = k0 - i.
Matrix<double> adversarial_u(Index k0, double alpha);

struct AdversarialPair {
  Matrix<double> v;         ///< n x k0 orthonormal
  Matrix<double> target_u;  ///< D + R, the factor the modified LU of v's top block must reproduce
};

/// Orthonormal V (n x k) whose top k x k block drives the modified LU to
/// U = D + R, D = diag(sign(R_ii)). Rows of the upper triangular r must have
/// 2-norm < 1 (ConstructionError otherwise); needs n >= 2k.
AdversarialPair gen_mlu_from_r(const Matrix<double>& r, Index n, std::uint64_t seed);

/// gen_mlu_from_r with r = adversarial_u(k0, alpha) - I.
AdversarialPair gen_mlu_adversarial(Index k0, double alpha, Index n, std::uint64_t seed);

struct PrescribedPair {
  Matrix<double> v;  ///< n x k0 orthonormal
  Matrix<double> p;  ///< k0 x k0 orthogonal seed
};

/// (V, P) with cond2(I - V_top^H P) = kappa. Throws ParameterError if kappa < 1.
PrescribedPair gen_prescribed_kappa_t(Index n, Index k0, double kappa, std::uint64_t seed);

enum class Family { SStep, StewartExtreme };
Family parse_family(std::string_view s);
std::string_view to_string(Family f);

/// n x (p k) block test matrix.
Matrix<double> gen_family(Family f, Index n, Index p, Index k, std::uint64_t seed);

/// Symmetric positive definite with eigenvalues log-spaced on [1, kappa].
Matrix<double> gen_spd(Index n, double kappa, std::uint64_t seed);

/// U diag(logspace(0, log10 kappa)) W^H with random orthonormal U (n x k) and unitary W.
template <class T>
Matrix<T> gen_cond_general(Index n, Index k, double kappa, std::uint64_t seed);

/// Orthonormal V (n x k0) and A = V G + Y S W^H with Y orthogonal to V, S
/// log-spaced on [1/kappa, 1] and ||G||_2 = 1/2, so cond2([V, A]) is about kappa.
template <class T>
VAPair<T> gen_sweep_pair(Index n, Index k0, Index k, double kappa, std::uint64_t seed);

}  // namespace ortho
