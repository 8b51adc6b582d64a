#pragma once

#include <complex>
#include <string>
#include <utility>

#include "qha/errors.hpp"
#include "qha/linalg.hpp"

namespace qha {

/// Operator on C^N. Norms are recomputed on demand from the matrix, so every
/// reader sees the same values.
class HilbertOp {
 public:
  HilbertOp() = default;
  explicit HilbertOp(Matrix m) : m_(std::move(m)) {
    detail::require_same(m_.rows() == m_.cols(), "operator matrix must be square");
    detail::require_same(m_.allFinite(), "operator matrix has non-finite entries");
  }

  static HilbertOp identity(int n) { return HilbertOp(Matrix::Identity(n, n)); }
  static HilbertOp zero(int n) { return HilbertOp(Matrix::Zero(n, n)); }

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  cd trace() const { return m_.trace(); }
  double op_norm() const { return qha::op_norm(m_); }
  double trace_norm() const { return qha::trace_norm(m_); }
  double hs_norm() const { return qha::hs_norm(m_); }

  HilbertOp adjoint() const { return HilbertOp(m_.adjoint()); }

  friend HilbertOp operator*(const HilbertOp& a, const HilbertOp& b) {
    a.check_compatible(b);
    return HilbertOp(a.m_ * b.m_);
  }
  friend HilbertOp operator+(const HilbertOp& a, const HilbertOp& b) {
    a.check_compatible(b);
    return HilbertOp(a.m_ + b.m_);
  }
  friend HilbertOp operator-(const HilbertOp& a, const HilbertOp& b) {
    a.check_compatible(b);
    return HilbertOp(a.m_ - b.m_);
  }
  friend HilbertOp operator*(cd c, const HilbertOp& a) { return HilbertOp(c * a.m_); }

  void check_compatible(const HilbertOp& o) const {
    detail::require_same(dim() == o.dim(), "operator dimensions differ: " + std::to_string(dim()) + " vs " +
                                               std::to_string(o.dim()));
  }

 private:
  Matrix m_;
};

inline double max_abs_diff(const HilbertOp& a, const HilbertOp& b) {
  a.check_compatible(b);
  return max_abs(a.matrix() - b.matrix());
}

/// phi (x) psi : v -> <v, psi> phi, i.e. the matrix phi psi^*.
inline HilbertOp rank_one(const Vector& phi, const Vector& psi) {
  detail::require_same(phi.size() == psi.size(), "rank-one factors differ in length");
  return HilbertOp(phi * psi.adjoint());
}

/// Inner product <u, v> = sum u_i conj(v_i), linear in the first slot.
inline cd inner(const Vector& u, const Vector& v) { return v.dot(u); }

}  // namespace qha
