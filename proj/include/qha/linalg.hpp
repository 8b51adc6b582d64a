#pragma once

// Dense complex linear algebra shared by every module: singular values,
// numerical rank and operator norms (dense or Lanczos for large windows).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qha/errors.hpp"

namespace qha {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default tolerance for identities that hold exactly in exact arithmetic.
inline constexpr double kEqualityTol = 1e-10;
/// Default scale-relative threshold for rank and "vanishes" decisions.
inline constexpr double kRankTol = 1e-8;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// exp(2 pi i * num / den), reducing num modulo den first so large phases stay accurate.
inline cd root_of_unity(long long num, long long den) {
  long long r = num % den;
  if (r < 0) r += den;
  const double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

inline long long mod(long long a, long long n) {
  long long r = a % n;
  return r < 0 ? r + n : r;
}

/// Exact entrywise Hermitian test (no tolerance). Used to pick the eigen fast path.
inline bool is_exactly_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (m(i, j) != std::conj(m(j, i))) return false;
  return true;
}

/// Singular values in descending order.
inline RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  RealVector sv;
  if (is_exactly_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    sv = es.eigenvalues().cwiseAbs();
  } else if (std::min(m.rows(), m.cols()) <= 64) {
    Eigen::JacobiSVD<Matrix> svd(m);
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Matrix> svd(m);
    sv = svd.singularValues();
  }
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<>());
  return sv;
}

/// Number of singular values above rel_tol * largest. Zero matrix has rank 0.
inline std::size_t numerical_rank(const RealVector& sv, double rel_tol = kRankTol) {
  if (sv.size() == 0) return 0;
  const double top = sv.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<std::size_t>((sv.array() > rel_tol * top).count());
}

inline std::size_t numerical_rank(const Matrix& m, double rel_tol = kRankTol) {
  return numerical_rank(singular_values(m), rel_tol);
}

/// Largest |eigenvalue| of a Hermitian operator given by its action, via Lanczos
/// with full reorthogonalization. Exact (up to rounding) once steps exceed the rank.
inline double lanczos_extreme(Eigen::Index dim, const std::function<Vector(const Vector&)>& apply,
                              int max_steps = 96) {
  if (dim == 0) return 0.0;
  const int steps = static_cast<int>(std::min<Eigen::Index>(dim, max_steps));
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  Vector q(dim);
  for (Eigen::Index i = 0; i < dim; ++i) q[i] = cd(gauss(rng), gauss(rng));
  q.normalize();

  std::vector<Vector> basis;
  std::vector<double> alpha, beta;
  basis.push_back(q);
  double scale = 0.0;
  for (int k = 0; k < steps; ++k) {
    Vector w = apply(basis.back());
    const double a = std::real(basis.back().dot(w));
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) w -= v * v.dot(w);
    const double b = w.norm();
    scale = std::max({scale, std::abs(a), b});
    if (k + 1 == steps || b <= 1e-13 * std::max(scale, 1e-300)) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Dimension above which operator norms switch from a dense SVD to Lanczos.
inline constexpr Eigen::Index kDenseNormLimit = 160;

/// Operator norm (largest singular value).
inline double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (std::max(m.rows(), m.cols()) <= kDenseNormLimit) return singular_values(m)[0];
  if (is_exactly_hermitian(m))
    return lanczos_extreme(m.rows(), [&m](const Vector& v) -> Vector { return m * v; });
  const double sq = lanczos_extreme(m.cols(), [&m](const Vector& v) -> Vector {
    return m.adjoint() * (m * v);
  });
  return std::sqrt(sq);
}

inline double trace_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : singular_values(m).sum(); }

inline double hs_norm(const Matrix& m) { return m.norm(); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Smallest eigenvalue of the Hermitian part.
inline double min_eigenvalue(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Orthonormal basis (columns) of the column span, dropping directions below the
/// scale-relative threshold.
inline Matrix orthonormal_column_basis(const Matrix& m, double rel_tol = kRankTol) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const RealVector& sv = svd.singularValues();
  const std::size_t r = numerical_rank(sv, rel_tol);
  return svd.matrixU().leftCols(static_cast<Eigen::Index>(r));
}

}  // namespace qha
