#pragma once

// Regularity predicates and the finite-scale Wiener approximation theorem.
//
// For a set S of functions (or operators) two quantities are compared:
//   * the common zero set of the Fourier (Fourier-Weyl) transforms, and
//   * the rank of the span of all translates.
// On a finite group the translate matrix of S factors as (characters) x
// diag(combined transform magnitude), so its singular values are proportional to
//   |S^(chi)| := sqrt(sum_{g in S} |g^(chi)|^2).
// Both predicates therefore use this combined magnitude with the same
// scale-relative threshold.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qha/core_groups.hpp"
#include "qha/hilbert_op.hpp"
#include "qha/linalg.hpp"
#include "qha/qha_conv.hpp"
#include "qha/random.hpp"
#include "qha/weyl_system.hpp"

namespace qha {

struct RegularityReport {
  double min_abs_transform = 0.0;
  std::vector<std::size_t> zero_set;  // dual (or phase-space) indices
  std::size_t translate_span_rank = 0;
  std::size_t full_rank = 0;  // |G| or N^2
  bool is_regular = false;
  /// rank == full_rank agrees with an empty zero set.
  bool agreement = true;
  std::vector<std::string> warnings;
};

namespace detail {

// Magnitudes within a factor 10 of the threshold are flagged rather than silently classified.
inline void flag_near_threshold(const std::vector<double>& mags, double cut, std::vector<std::string>& warnings) {
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const double m = mags[i];
    if (m > 0.1 * cut && m < 10.0 * cut) {
      warnings.push_back("transform magnitude " + std::to_string(m) + " at index " + std::to_string(i) +
                         " lies within a decade of the zero threshold");
    }
  }
}

inline RegularityReport classify(const std::vector<double>& mags, std::size_t rank, double threshold) {
  RegularityReport rep;
  rep.full_rank = mags.size();
  rep.translate_span_rank = rank;
  const double scale = mags.empty() ? 0.0 : *std::max_element(mags.begin(), mags.end());
  const double cut = threshold * scale;
  rep.min_abs_transform = mags.empty() ? 0.0 : *std::min_element(mags.begin(), mags.end());
  for (std::size_t i = 0; i < mags.size(); ++i)
    if (!(scale > 0.0) || mags[i] <= cut) rep.zero_set.push_back(i);
  rep.is_regular = rep.zero_set.empty();
  rep.agreement = (rank == rep.full_rank) == rep.is_regular;
  if (scale > 0.0) flag_near_threshold(mags, cut, rep.warnings);
  if (!rep.agreement) rep.warnings.push_back("rank and zero-set predicates disagree");
  return rep;
}

inline Matrix translate_matrix(const std::vector<GroupFunction>& set) {
  const auto& g = set.front().group();
  const auto n = static_cast<Eigen::Index>(g.cardinality());
  Matrix m(n, n * static_cast<Eigen::Index>(set.size()));
  Eigen::Index col = 0;
  for (const auto& f : set) {
    for (std::size_t x = 0; x < g.cardinality(); ++x, ++col)
      for (std::size_t y = 0; y < g.cardinality(); ++y)
        m(static_cast<Eigen::Index>(y), col) = f[g.subtract_index(y, x)];
  }
  return m;
}

}  // namespace detail

inline RegularityReport regular_set_fn(const std::vector<GroupFunction>& set, double threshold = kRankTol) {
  detail::require(!set.empty(), "regularity of an empty set is undefined");
  detail::require(threshold > 0.0, "zero threshold must be positive");
  for (const auto& f : set) set.front().check_compatible(f);
  const std::size_t n = set.front().size();
  std::vector<double> mags(n, 0.0);
  for (const auto& f : set) {
    const GroupFunction hat = fourier(f);
    for (std::size_t c = 0; c < n; ++c) mags[c] += std::norm(hat[c]);
  }
  for (double& m : mags) m = std::sqrt(m);
  const std::size_t rank = numerical_rank(detail::translate_matrix(set), threshold);
  return detail::classify(mags, rank, threshold);
}

inline RegularityReport regular_fn(const GroupFunction& g, double threshold = kRankTol) {
  return regular_set_fn({g}, threshold);
}

/// Matrix whose columns are vec(alpha_x(A)) for all A in the set and x in Xi.
inline Matrix translate_span_matrix(const PhaseSpace& ps, const std::vector<HilbertOp>& set) {
  const auto nn = static_cast<Eigen::Index>(ps.size());
  Matrix m(nn, nn * static_cast<Eigen::Index>(set.size()));
  Eigen::Index col = 0;
  for (const auto& a : set)
    for (std::size_t k = 0; k < ps.size(); ++k, ++col)
      m.col(col) = op_translate(ps, a, ps.point(k)).matrix().reshaped();
  return m;
}

inline RegularityReport regular_op_set(const PhaseSpace& ps, const std::vector<HilbertOp>& set,
                                       double threshold = kRankTol) {
  detail::require(!set.empty(), "regularity of an empty operator set is undefined");
  detail::require(threshold > 0.0, "zero threshold must be positive");
  for (const auto& a : set) detail::require_same(a.dim() == ps.n(), "operator dimension does not match phase space");
  std::vector<double> mags(ps.size(), 0.0);
  for (const auto& a : set) {
    const GroupFunction fw = fourier_weyl(ps, a);
    for (std::size_t k = 0; k < ps.size(); ++k) mags[k] += std::norm(fw[k]);
  }
  for (double& m : mags) m = std::sqrt(m);
  const std::size_t rank = numerical_rank(translate_span_matrix(ps, set), threshold);
  return detail::classify(mags, rank, threshold);
}

/// Orthonormal (Hilbert-Schmidt) basis of span{ E * f : E matrix unit, f in d0_basis },
/// the finite counterpart of the operator space corresponding to span(d0_basis).
inline std::vector<HilbertOp> corresponding_space(const PhaseSpace& ps, const std::vector<GroupFunction>& d0_basis,
                                                  double threshold = kRankTol) {
  const int n = ps.n();
  if (d0_basis.empty()) return {};
  const auto nn = static_cast<Eigen::Index>(n) * n;
  Matrix cols(nn, nn * static_cast<Eigen::Index>(d0_basis.size()));
  Eigen::Index col = 0;
  for (const auto& f : d0_basis) {
    check_on_phase_space(ps, f);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i, ++col) {
        Matrix e = Matrix::Zero(n, n);
        e(i, j) = 1.0;
        cols.col(col) = conv_fn_op(ps, f, HilbertOp(std::move(e))).matrix().reshaped();
      }
  }
  // An all-zero input must give the zero space, not noise directions.
  if (max_abs(cols) == 0.0) return {};
  const Matrix q = orthonormal_column_basis(cols, threshold);
  std::vector<HilbertOp> out;
  out.reserve(static_cast<std::size_t>(q.cols()));
  for (Eigen::Index c = 0; c < q.cols(); ++c) out.emplace_back(q.col(c).reshaped(n, n));
  return out;
}

/// Distance of an operator from the span of an orthonormal HS basis.
inline double distance_to_span(const HilbertOp& a, const std::vector<HilbertOp>& basis) {
  Matrix r = a.matrix();
  for (const auto& e : basis) {
    const cd c = (e.matrix().adjoint() * a.matrix()).trace();
    r -= c * e.matrix();
  }
  return r.norm();
}

/// Operators with structured Fourier-Weyl zero sets: I, rank-one projections
/// onto basis vectors and their sum, several Weyl operators, the parity, I + R,
/// and phi (x) phi for a parity-symmetric phi.
inline std::vector<HilbertOp> degenerate_operator_set(const PhaseSpace& ps) {
  const int n = ps.n();
  std::vector<HilbertOp> out;
  out.push_back(HilbertOp::identity(n));
  Matrix diag = Matrix::Zero(n, n);
  for (int t = 0; t < std::min(n, 2); ++t) {
    Vector e = Vector::Zero(n);
    e[t] = 1.0;
    out.push_back(rank_one(e, e));
    diag(t, t) = 1.0;
  }
  out.emplace_back(diag);
  const PhasePoint pts[4] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  for (const auto& x : pts) out.push_back(weyl(ps, x));
  out.push_back(parity_op(ps));
  out.push_back(HilbertOp::identity(n) + parity_op(ps));
  Vector phi(n);
  for (int t = 0; t < n; ++t) phi[t] = 1.0 / (1.0 + std::min(t, n - t));
  out.push_back(rank_one(phi, phi));
  return out;
}

struct RegularityCase {
  std::string name;
  RegularityReport report;
};

/// Random operators (every other one with part of its Fourier-Weyl transform
/// zeroed) plus, optionally, the degenerate set. Sample i uses the stream (seed, i).
inline std::vector<RegularityCase> wiener_audit(int n, std::size_t samples, std::uint64_t seed,
                                                bool include_degenerate = true, double threshold = kRankTol) {
  const PhaseSpace ps(n);
  std::vector<RegularityCase> out;
  for (std::size_t i = 0; i < samples; ++i) {
    auto rng = sample_rng(seed, i);
    HilbertOp a = random_operator(n, rng);
    if (i % 2 == 1) {
      GroupFunction fw = fourier_weyl(ps, a);
      std::uniform_int_distribution<std::size_t> pick(0, ps.size() - 1);
      const std::size_t zeros = 1 + pick(rng) % std::max<std::size_t>(1, ps.size() / 2);
      for (std::size_t z = 0; z < zeros; ++z) fw.values()[pick(rng)] = 0.0;
      a = inverse_fourier_weyl(ps, fw);
    }
    out.push_back({"random:" + std::to_string(i), regular_op_set(ps, {a}, threshold)});
  }
  if (include_degenerate) {
    const auto deg = degenerate_operator_set(ps);
    for (std::size_t j = 0; j < deg.size(); ++j)
      out.push_back({"degenerate:" + std::to_string(j), regular_op_set(ps, {deg[j]}, threshold)});
  }
  return out;
}

}  // namespace qha
