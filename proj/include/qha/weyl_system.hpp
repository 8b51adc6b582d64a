#pragma once

// Finite phase space Xi = Z_N x Z_N acting on C^N through the Weyl operators
//   U_(a,b) f(t) = w^(b t) f(t - a),   w = exp(2 pi i / N),
// which satisfy U_x U_y = m(x,y) U_(x+y) with m((a,b),(c,d)) = w^(-a d).
// Functions on Xi use the Haar weight 1/N per point.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qha/core_groups.hpp"
#include "qha/errors.hpp"
#include "qha/hilbert_op.hpp"
#include "qha/linalg.hpp"

namespace qha {

struct PhasePoint {
  int a = 0;  // translation
  int b = 0;  // modulation
  bool operator==(const PhasePoint&) const = default;
};

class PhaseSpace {
 public:
  explicit PhaseSpace(int n) : n_(n) { detail::require(n >= 1, "phase space needs N >= 1"); }

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
  double haar_weight() const { return 1.0 / n_; }

  /// Z_N x Z_N with weight 1/N; indices are a * N + b.
  FiniteAbelianGroup function_group() const { return FiniteAbelianGroup({n_, n_}, haar_weight()); }

  PhasePoint point(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(n_)),
            static_cast<int>(index % static_cast<std::size_t>(n_))};
  }
  std::size_t index(PhasePoint x) const {
    const PhasePoint r = reduce(x);
    return static_cast<std::size_t>(r.a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(r.b);
  }

  PhasePoint reduce(PhasePoint x) const {
    return {static_cast<int>(mod(x.a, n_)), static_cast<int>(mod(x.b, n_))};
  }
  PhasePoint add(PhasePoint x, PhasePoint y) const { return reduce({x.a + y.a, x.b + y.b}); }
  PhasePoint negate(PhasePoint x) const { return reduce({-x.a, -x.b}); }

  /// w^k
  cd omega(long long k) const { return root_of_unity(k, n_); }

  /// m((a,b),(c,d)) = w^(-a d)
  cd multiplier(PhasePoint x, PhasePoint y) const { return omega(-static_cast<long long>(x.a) * y.b); }

  /// sigma((a,b),(c,d)) = m(x,y) conj(m(y,x)) = w^(c b - a d)
  cd symplectic(PhasePoint x, PhasePoint y) const {
    return omega(static_cast<long long>(y.a) * x.b - static_cast<long long>(x.a) * y.b);
  }

  bool operator==(const PhaseSpace&) const = default;

 private:
  int n_;
};

inline HilbertOp weyl(const PhaseSpace& ps, PhasePoint x) {
  const int n = ps.n();
  const PhasePoint r = ps.reduce(x);
  Matrix u = Matrix::Zero(n, n);
  for (int t = 0; t < n; ++t) u(t, mod(t - r.a, n)) = ps.omega(static_cast<long long>(r.b) * t);
  return HilbertOp(std::move(u));
}

/// R f(t) = f(-t)
inline HilbertOp parity_op(const PhaseSpace& ps) {
  const int n = ps.n();
  Matrix r = Matrix::Zero(n, n);
  for (int t = 0; t < n; ++t) r(t, mod(-t, n)) = 1.0;
  return HilbertOp(std::move(r));
}

/// alpha_x(A) = U_x A U_x^*, evaluated entrywise:
/// (U_x A U_x^*)_(j,l) = w^(b (j - l)) A_(j-a, l-a).
inline HilbertOp op_translate(const PhaseSpace& ps, const HilbertOp& a, PhasePoint x) {
  detail::require_same(a.dim() == ps.n(), "operator dimension does not match phase space");
  const int n = ps.n();
  const PhasePoint r = ps.reduce(x);
  const Matrix& m = a.matrix();
  Matrix out(n, n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      out(j, l) = ps.omega(static_cast<long long>(r.b) * (j - l)) * m(mod(j - r.a, n), mod(l - r.a, n));
  return HilbertOp(std::move(out));
}

/// beta_-(A) = R A R, i.e. A_(-j,-l).
inline HilbertOp op_parity(const PhaseSpace& ps, const HilbertOp& a) {
  detail::require_same(a.dim() == ps.n(), "operator dimension does not match phase space");
  const int n = ps.n();
  const Matrix& m = a.matrix();
  Matrix out(n, n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) out(j, l) = m(mod(-j, n), mod(-l, n));
  return HilbertOp(std::move(out));
}

/// gamma_xi(B) = U_(-xi/2) B U_(-xi/2). Needs N odd so that 2 is invertible mod N.
inline HilbertOp op_modulate(const PhaseSpace& ps, const HilbertOp& b, PhasePoint xi) {
  detail::require_same(b.dim() == ps.n(), "operator dimension does not match phase space");
  const int n = ps.n();
  detail::require(n % 2 == 1, "operator modulation needs odd N (2 must be invertible mod N), got N = " +
                                  std::to_string(n));
  const int half = (n + 1) / 2;  // inverse of 2 mod N
  const PhasePoint h = ps.reduce({-xi.a * half, -xi.b * half});
  const HilbertOp u = weyl(ps, h);
  return u * b * u;
}

/// F_U(A)(xi) = Tr(A U_xi) as a function on Xi (weight 1/N).
inline GroupFunction fourier_weyl(const PhaseSpace& ps, const HilbertOp& a) {
  detail::require_same(a.dim() == ps.n(), "operator dimension does not match phase space");
  const int n = ps.n();
  const Matrix& m = a.matrix();
  std::vector<cd> out(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const PhasePoint xi = ps.point(k);
    // Tr(A U) = sum_t sum_s A_(s,t) U_(t,s), with U_(t, t-a) = w^(b t).
    cd s = 0.0;
    for (int t = 0; t < n; ++t) s += m(mod(t - xi.a, n), t) * ps.omega(static_cast<long long>(xi.b) * t);
    out[k] = s;
  }
  return GroupFunction(ps.function_group(), std::move(out));
}

/// Inverse of fourier_weyl: A = (1/N) sum_xi F(xi) U_xi^*.
inline HilbertOp inverse_fourier_weyl(const PhaseSpace& ps, const GroupFunction& f) {
  detail::require_same(f.group().same_structure(ps.function_group()), "function is not on this phase space");
  const int n = ps.n();
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (f[k] == cd(0.0)) continue;
    out += f[k] * weyl(ps, ps.point(k)).matrix().adjoint();
  }
  return HilbertOp(out / static_cast<double>(n));
}

struct IdentityResidual {
  std::string name;
  double max_residual = 0.0;
};

/// Exhaustive residuals of the defining identities of the Weyl system:
/// U_x U_y = m(x,y) U_(x+y), R U_x R = U_(-x), the cocycle identity
/// m(x,y) m(x+y,z) = m(x,y+z) m(y,z), U_x U_y = sigma(x,y) U_y U_x,
/// unitarity, and inversion of the Fourier-Weyl transform on matrix units.
inline std::vector<IdentityResidual> weyl_identity_residuals(const PhaseSpace& ps) {
  const std::size_t nn = ps.size();
  const int n = ps.n();
  std::vector<HilbertOp> u;
  u.reserve(nn);
  for (std::size_t k = 0; k < nn; ++k) u.push_back(weyl(ps, ps.point(k)));
  const HilbertOp r = parity_op(ps);
  const Matrix id = Matrix::Identity(n, n);

  double proj = 0.0, comm = 0.0, par = 0.0, unit = 0.0, cocycle = 0.0, inv = 0.0;
  for (std::size_t i = 0; i < nn; ++i) {
    const PhasePoint x = ps.point(i);
    par = std::max(par, max_abs((r * u[i] * r).matrix() - u[ps.index(ps.negate(x))].matrix()));
    unit = std::max(unit, max_abs(u[i].matrix() * u[i].matrix().adjoint() - id));
    for (std::size_t j = 0; j < nn; ++j) {
      const PhasePoint y = ps.point(j);
      const Matrix xy = u[i].matrix() * u[j].matrix();
      proj = std::max(proj, max_abs(xy - ps.multiplier(x, y) * u[ps.index(ps.add(x, y))].matrix()));
      comm = std::max(comm, max_abs(xy - ps.symplectic(x, y) * (u[j].matrix() * u[i].matrix())));
      for (std::size_t l = 0; l < nn; ++l) {
        const PhasePoint z = ps.point(l);
        const cd lhs = ps.multiplier(x, y) * ps.multiplier(ps.add(x, y), z);
        const cd rhs = ps.multiplier(x, ps.add(y, z)) * ps.multiplier(y, z);
        cocycle = std::max(cocycle, std::abs(lhs - rhs));
      }
    }
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      inv = std::max(inv, max_abs(inverse_fourier_weyl(ps, fourier_weyl(ps, HilbertOp(e))).matrix() - e));
    }
  return {{"projective", proj}, {"parity", par},         {"cocycle", cocycle},
          {"commutation", comm}, {"unitarity", unit}, {"fourier_weyl_inversion", inv}};
}

}  // namespace qha
