#pragma once

// Convolutions of quantum harmonic analysis on Xi = Z_N x Z_N:
//   f * A   = (1/N) sum_y f(y) alpha_y(A)                 (operator)
//   A * B(x) = Tr(A alpha_x(beta_-(B)))                    (function)
//   f * g   = (1/N) sum_y f(y) g(x - y)                    (function, core_groups::convolve)
// together with the symplectic Fourier transform
//   F_sigma f(xi) = (1/N) sum_x sigma(xi, x) f(x) = (1/N) sum_x conj(sigma(x, xi)) f(x).
//
// The orientation sigma(xi, x) is the one for which
//   F_U(f * A) = F_sigma(f) F_U(A),   F_sigma(A * B) = F_U(A) F_U(B),
//   F_sigma(f * g) = F_sigma(f) F_sigma(g)
// hold simultaneously. Because sigma is antisymmetric, F_sigma is an involution.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qha/core_groups.hpp"
#include "qha/random.hpp"
#include "qha/weyl_system.hpp"

namespace qha {

inline void check_on_phase_space(const PhaseSpace& ps, const GroupFunction& f) {
  detail::require_same(f.group().same_structure(ps.function_group()),
                       "function is not defined on the phase space Z_" + std::to_string(ps.n()) + " x Z_" +
                           std::to_string(ps.n()));
}

inline HilbertOp conv_fn_op(const PhaseSpace& ps, const GroupFunction& f, const HilbertOp& a) {
  check_on_phase_space(ps, f);
  detail::require_same(a.dim() == ps.n(), "operator dimension does not match phase space");
  const int n = ps.n();
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (f[k] == cd(0.0)) continue;
    out += f[k] * op_translate(ps, a, ps.point(k)).matrix();
  }
  return HilbertOp(out * ps.haar_weight());
}

inline GroupFunction conv_op_op(const PhaseSpace& ps, const HilbertOp& a, const HilbertOp& b) {
  a.check_compatible(b);
  detail::require_same(a.dim() == ps.n(), "operator dimension does not match phase space");
  const HilbertOp rbr = op_parity(ps, b);
  std::vector<cd> out(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Matrix shifted = op_translate(ps, rbr, ps.point(k)).matrix();
    // Tr(A S) without forming the product.
    out[k] = (a.matrix().transpose().cwiseProduct(shifted)).sum();
  }
  return GroupFunction(ps.function_group(), std::move(out));
}

inline GroupFunction symplectic_fourier(const PhaseSpace& ps, const GroupFunction& f) {
  check_on_phase_space(ps, f);
  std::vector<cd> out(ps.size(), 0.0);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const PhasePoint xi = ps.point(k);
    cd s = 0.0;
    for (std::size_t j = 0; j < ps.size(); ++j) s += ps.symplectic(xi, ps.point(j)) * f[j];
    out[k] = ps.haar_weight() * s;
  }
  return GroupFunction(ps.function_group(), std::move(out));
}

/// One inequality of the norm-estimate audit.
struct InequalityAudit {
  std::string name;
  double max_ratio = 0.0;
  std::size_t argmax_sample = 0;
};

struct NormEstimateReport {
  int n = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<InequalityAudit> inequalities;

  double worst_ratio() const {
    double w = 0.0;
    for (const auto& i : inequalities) w = std::max(w, i.max_ratio);
    return w;
  }
  bool all_hold(double tol = kEqualityTol) const { return worst_ratio() <= 1.0 + tol; }
};

struct NormEstimateRatios {
  double fg = 0.0;  // |f*g|_inf / (|f|_1 |g|_inf)
  double fb = 0.0;  // |f*B|_op  / (|f|_1 |B|_op)
  double ag = 0.0;  // |A*g|_op  / (|A|_tr |g|_inf)
  double ab = 0.0;  // |A*B|_inf / (|A|_tr |B|_op)
};

namespace detail {
inline double safe_ratio(double lhs, double rhs) { return rhs > 0.0 ? lhs / rhs : 0.0; }
}  // namespace detail

inline NormEstimateRatios norm_estimate_ratios(const PhaseSpace& ps, const GroupFunction& f, const GroupFunction& g,
                                               const HilbertOp& a, const HilbertOp& b) {
  NormEstimateRatios r;
  r.fg = detail::safe_ratio(convolve(f, g).norm_inf(), f.norm1() * g.norm_inf());
  r.fb = detail::safe_ratio(conv_fn_op(ps, f, b).op_norm(), f.norm1() * b.op_norm());
  r.ag = detail::safe_ratio(conv_fn_op(ps, g, a).op_norm(), a.trace_norm() * g.norm_inf());
  r.ab = detail::safe_ratio(conv_op_op(ps, a, b).norm_inf(), a.trace_norm() * b.op_norm());
  return r;
}

/// Randomized audit of the four bounded-factor convolution estimates. Sample i is
/// drawn from its own stream keyed by (seed, i), so the report does not depend on
/// evaluation order.
inline NormEstimateReport verify_norm_estimates(std::size_t sample_count, int n, std::uint64_t seed) {
  detail::require(sample_count >= 1, "norm-estimate audit needs at least one sample");
  const PhaseSpace ps(n);
  NormEstimateReport rep;
  rep.n = n;
  rep.samples = sample_count;
  rep.seed = seed;
  rep.inequalities = {{"fg_inf<=f_1*g_inf", 0.0, 0},
                      {"fB_op<=f_1*B_op", 0.0, 0},
                      {"Ag_op<=A_tr*g_inf", 0.0, 0},
                      {"AB_inf<=A_tr*B_op", 0.0, 0}};
  for (std::size_t i = 0; i < sample_count; ++i) {
    auto rng = sample_rng(seed, i);
    const auto grp = ps.function_group();
    const GroupFunction f = random_function(grp, rng);
    const GroupFunction g = random_function(grp, rng);
    const HilbertOp a = random_operator(n, rng);
    const HilbertOp b = random_operator(n, rng);
    const NormEstimateRatios r = norm_estimate_ratios(ps, f, g, a, b);
    const double vals[4] = {r.fg, r.fb, r.ag, r.ab};
    for (std::size_t k = 0; k < 4; ++k) {
      if (vals[k] > rep.inequalities[k].max_ratio) {
        rep.inequalities[k].max_ratio = vals[k];
        rep.inequalities[k].argmax_sample = i;
      }
    }
  }
  return rep;
}

}  // namespace qha
