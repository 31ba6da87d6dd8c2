#include "ortho/testgen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ortho/dense.hpp"

namespace ortho {

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

double Rng::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

template <class T>
Matrix<T> random_gaussian(Rng& rng, Index rows, Index cols) {
  Matrix<T> m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal_scalar<T>();
  return m;
}

std::vector<double> logspace(double lo, double hi, Index n) {
  std::vector<double> out(static_cast<std::size_t>(std::max<Index>(n, 0)));
  for (Index i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * t);
  }
  return out;
}

template <class T>
Matrix<T> random_orthonormal(Rng& rng, Index n, Index k) {
  if (k > n) throw DimensionError("random_orthonormal: k > n");
  return householder_qr(random_gaussian<T>(rng, n, k), /*nonneg_diag=*/true).q;
}

template <class T>
Matrix<T> gen_random_orthonormal(Index n, Index k, std::uint64_t seed) {
  Rng rng(seed);
  return random_orthonormal<T>(rng, n, k);
}

VAPair<double> fixture_badbcg() {
  const double h = std::sqrt(2.0) / 2.0;
  VAPair<double> p;
  p.v = Matrix<double>{{h, h}, {-h, h}, {0, 0}, {0, 0}};
  p.a = Matrix<double>{{1, 1}, {1, 1}, {1e-30, 0}, {0, 1e-30}};
  return p;
}

Matrix<double> adversarial_u(Index k0, double alpha) {
  Matrix<double> u(k0, k0);
  for (Index i = 0; i < k0; ++i) {
    const double s = std::sqrt(static_cast<double>(k0 - i));
    u(i, i) = 1.0 + alpha / s;
    for (Index j = i + 1; j < k0; ++j) u(i, j) = -1.0 / s;
  }
  return u;
}

namespace {
double sgn(double x) { return x >= 0.0 ? 1.0 : -1.0; }
}  // namespace

AdversarialPair gen_mlu_from_r(const Matrix<double>& r, Index n, std::uint64_t seed) {
  const Index k = r.rows();
  if (r.cols() != k || k == 0) throw ParameterError("gen_mlu_from_r: r must be square and nonempty");
  if (n < 2 * k) throw ParameterError("gen_mlu_from_r: need n >= 2k");
  for (Index i = 0; i < k; ++i) {
    double s = 0.0;
    for (Index j = i; j < k; ++j) s += r(i, j) * r(i, j);
    if (!(std::sqrt(s) < 1.0)) throw ConstructionError("gen_mlu_from_r: row " + std::to_string(i) + " has norm >= 1");
  }
  Rng rng(seed);

  // The Schur complements of the modified LU are the rows -R(i, i:), so the
  // reverse Householder induction prescribes first rows b = -R(i, i:).
  const Index n1 = n - k + 1;
  Matrix<double> v(n1, 1);
  {
    const double b0 = -r(k - 1, k - 1);
    Matrix<double> g = random_gaussian<double>(rng, n1 - 1, 1);
    const double gn = nrm2(g.rows(), g.data());
    const double c = std::sqrt(1.0 - b0 * b0);
    v(0, 0) = b0;
    for (Index i = 1; i < n1; ++i) v(i, 0) = c * g(i - 1, 0) / gn;
  }
  for (Index step = 1; step < k; ++step) {
    const Index row = k - 1 - step;
    const Index m = v.rows();
    const Index j = v.cols();  // == step
    Matrix<double> b(j + 1, 1);
    for (Index c = 0; c <= j; ++c) b(c, 0) = -r(row, row + c);
    const double bn2 = norm_fro(b) * norm_fro(b);

    Matrix<double> vh(m + 1, j + 1);
    vh(0, 0) = -sgn(b(0, 0));
    vh.set_block(1, 1, v);

    // random unit vector with zero first entry, orthogonal to V (two passes)
    Matrix<double> g = random_gaussian<double>(rng, m, 1);
    for (int pass = 0; pass < 2; ++pass) gemm(g, -1.0, v, matmul_ah(v, g), 1.0);
    const double gn = nrm2(g.rows(), g.data());
    if (!(gn > 0.0)) throw ConstructionError("gen_mlu_from_r: degenerate complement vector");
    Matrix<double> x = matmul(vh, b);
    const double c = std::sqrt(std::max(0.0, 1.0 - bn2));
    for (Index i = 0; i < m; ++i) x(i + 1, 0) += c * g(i, 0) / gn;
    // ||x|| = 1 in exact arithmetic; renormalizing keeps H orthogonal so the
    // defect of V does not compound from one step to the next
    x *= 1.0 / nrm2(x.rows(), x.data());

    // H = I - tau w w^T with w = (x - e1) / (x1 - 1) maps x to e1
    const double x1 = x(0, 0);
    const double tau = 1.0 - x1;
    Matrix<double> w = x;
    w(0, 0) -= 1.0;
    w *= 1.0 / (x1 - 1.0);
    Matrix<double> wt_vh = matmul_ah(w, vh);
    gemm(vh, -tau, w, wt_vh, 1.0);
    v = std::move(vh);
  }

  AdversarialPair out;
  out.v = std::move(v);
  out.target_u = r;
  for (Index i = 0; i < k; ++i) out.target_u(i, i) += sgn(r(i, i));
  return out;
}

AdversarialPair gen_mlu_adversarial(Index k0, double alpha, Index n, std::uint64_t seed) {
  Matrix<double> r = adversarial_u(k0, alpha);
  for (Index i = 0; i < k0; ++i) r(i, i) -= 1.0;
  return gen_mlu_from_r(r, n, seed);
}

PrescribedPair gen_prescribed_kappa_t(Index n, Index k0, double kappa, std::uint64_t seed) {
  if (!(kappa >= 1.0)) throw ParameterError("gen_prescribed_kappa_t: kappa must be >= 1");
  if (k0 < 2) throw ParameterError("gen_prescribed_kappa_t: k0 must be >= 2");
  if (n < 2 * k0) throw ParameterError("gen_prescribed_kappa_t: need n >= 2 k0");
  Rng rng(seed);
  const Matrix<double> w1 = random_orthonormal<double>(rng, k0, k0);
  const Matrix<double> w2 = random_orthonormal<double>(rng, k0, k0);
  const Matrix<double> o = random_orthonormal<double>(rng, n - k0, k0);

  // T = W2 (I - Sigma D) W2^H, singular values 1 - sigma_i (d_i = +1) or 1 + sigma_i (d_i = -1)
  std::vector<double> sigma(static_cast<std::size_t>(k0), 0.0), d(static_cast<std::size_t>(k0), -1.0);
  std::vector<double> s(static_cast<std::size_t>(k0), 0.0);
  double smax = 0.0;
  for (Index i = 1; i < k0; ++i) {
    s[static_cast<std::size_t>(i)] = 0.05 + 0.4 * rng.uniform();
    smax = std::max(smax, s[static_cast<std::size_t>(i)]);
  }
  if (kappa >= 1.0 + smax) {
    sigma[0] = 1.0 - (1.0 + smax) / kappa;
    d[0] = 1.0;
    for (Index i = 1; i < k0; ++i) sigma[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)];
  } else {
    // every singular value is 1 + sigma_i in [1, kappa], the largest hitting kappa
    for (Index i = 1; i < k0; ++i)
      sigma[static_cast<std::size_t>(i)] = (kappa - 1.0) * s[static_cast<std::size_t>(i)] / smax;
  }

  Matrix<double> sw2t = adjoint(w2), cw2t = adjoint(w2), dw2t = adjoint(w2);
  for (Index i = 0; i < k0; ++i) {
    const double si = sigma[static_cast<std::size_t>(i)];
    const double ci = std::sqrt(std::max(0.0, 1.0 - si * si));
    for (Index j = 0; j < k0; ++j) {
      sw2t(i, j) *= si;
      cw2t(i, j) *= ci;
      dw2t(i, j) *= d[static_cast<std::size_t>(i)];
    }
  }
  PrescribedPair out;
  out.v = vcat(matmul(w1, sw2t), matmul(o, cw2t));
  out.p = matmul(w1, dw2t);
  return out;
}

Family parse_family(std::string_view s) {
  if (s == "sstep" || s == "s-step") return Family::SStep;
  if (s == "stewart_extreme" || s == "stewart-extreme") return Family::StewartExtreme;
  throw ParameterError("unknown family '" + std::string(s) + "'");
}

std::string_view to_string(Family f) { return f == Family::SStep ? "sstep" : "stewart_extreme"; }

Matrix<double> gen_family(Family f, Index n, Index p, Index k, std::uint64_t seed) {
  if (n <= 0 || p <= 0 || k <= 0 || p * k > n) throw ParameterError("gen_family: need p*k <= n and positive sizes");
  Rng rng(seed);
  Matrix<double> a(n, p * k);
  if (f == Family::SStep) {
    // monomial Krylov basis of diag(logspace(0, 1)) from a random start, columns normalized as they are built
    const std::vector<double> m = logspace(0.0, 1.0, n);
    Matrix<double> x = random_gaussian<double>(rng, n, 1);
    for (Index c = 0; c < p * k; ++c) {
      if (c > 0)
        for (Index i = 0; i < n; ++i) x(i, 0) *= m[static_cast<std::size_t>(i)];
      x *= 1.0 / nrm2(n, x.data());
      a.set_block(0, c, x);
    }
    return a;
  }
  Matrix<double> prev;
  for (Index b = 0; b < p; ++b) {
    Matrix<double> blk;
    if (b % 2 == 0) {
      blk = random_gaussian<double>(rng, n, k);
    } else {
      blk = matmul(prev, random_gaussian<double>(rng, k, k));
      blk += random_gaussian<double>(rng, n, k) * 1e-12;
    }
    a.set_block(0, b * k, blk);
    prev = std::move(blk);
  }
  return a;
}

Matrix<double> gen_spd(Index n, double kappa, std::uint64_t seed) {
  if (!(kappa >= 1.0)) throw ParameterError("gen_spd: kappa must be >= 1");
  Rng rng(seed);
  const Matrix<double> q = random_orthonormal<double>(rng, n, n);
  const std::vector<double> ev = logspace(0.0, std::log10(kappa), n);
  Matrix<double> ql = q;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) ql(i, j) *= ev[static_cast<std::size_t>(j)];
  Matrix<double> b = matmul(ql, adjoint(q));
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) {
      const double s = 0.5 * (b(i, j) + b(j, i));
      b(i, j) = s;
      b(j, i) = s;
    }
  return b;
}

template <class T>
Matrix<T> gen_cond_general(Index n, Index k, double kappa, std::uint64_t seed) {
  if (k > n) throw DimensionError("gen_cond_general: k > n");
  if (!(kappa >= 1.0)) throw ParameterError("gen_cond_general: kappa must be >= 1");
  Rng rng(seed);
  Matrix<T> u = random_orthonormal<T>(rng, n, k);
  const Matrix<T> w = random_orthonormal<T>(rng, k, k);
  const std::vector<double> s = logspace(0.0, -std::log10(kappa), k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < n; ++i) u(i, j) *= s[static_cast<std::size_t>(j)];
  return matmul(u, adjoint(w));
}

template <class T>
VAPair<T> gen_sweep_pair(Index n, Index k0, Index k, double kappa, std::uint64_t seed) {
  if (k0 + k > n) throw DimensionError("gen_sweep_pair: k0 + k > n");
  if (!(kappa >= 1.0)) throw ParameterError("gen_sweep_pair: kappa must be >= 1");
  Rng rng(seed);
  VAPair<T> out;
  out.v = random_orthonormal<T>(rng, n, k0);
  Matrix<T> y = random_gaussian<T>(rng, n, k);
  for (int pass = 0; pass < 2; ++pass) gemm(y, T(-1), out.v, matmul_ah(out.v, y), T(1));
  y = householder_qr(y).q;
  const Matrix<T> w = random_orthonormal<T>(rng, k, k);
  const std::vector<double> s = logspace(0.0, -std::log10(kappa), k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < n; ++i) y(i, j) *= s[static_cast<std::size_t>(j)];
  out.a = matmul(y, adjoint(w));
  // ||G||_2 = 1/2 keeps cond2([V, A]) within a small factor of kappa
  Matrix<T> g = random_gaussian<T>(rng, k0, k);
  g *= T(0.5 / norm2(g));
  gemm(out.a, T(1), out.v, g, T(1));
  return out;
}

#define ORTHO_INSTANTIATE(T)                                                                 \
  template Matrix<T> random_gaussian<T>(Rng&, Index, Index);                                 \
  template Matrix<T> random_orthonormal<T>(Rng&, Index, Index);                              \
  template Matrix<T> gen_random_orthonormal<T>(Index, Index, std::uint64_t);                 \
  template Matrix<T> gen_cond_general<T>(Index, Index, double, std::uint64_t);               \
  template VAPair<T> gen_sweep_pair<T>(Index, Index, Index, double, std::uint64_t);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(cplx)
#undef ORTHO_INSTANTIATE

}  // namespace ortho
