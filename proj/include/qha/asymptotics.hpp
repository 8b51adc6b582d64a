#pragma once

// Truncated models of l^2(Z) and L^2(R): the block-projection operator on Z,
// column/row norm diagnostics, singular-value compactness proxies, the
// box-convolution example on a grid, and convergence probes for shifted
// operators in the norm, strong* and weak* topologies.
//
// Phase space Z x T acts on l^2(Z) by U_(k,theta) f(t) = theta^t f(t - k), so
//   alpha_(k,theta)(A)_(j,l) = theta^(j-l) a_(j-k, l-k).
// theta is sampled on a finite grid of roots of unity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qha/decay_profile.hpp"
#include "qha/errors.hpp"
#include "qha/linalg.hpp"

namespace qha {

struct Provenance {
  std::string builder;
  std::vector<std::pair<std::string, double>> params;
};

/// theta = exp(2 pi i q / Q).
struct ThetaSample {
  long q = 0;
  long period = 1;
  cd power(long long e) const { return root_of_unity(static_cast<long long>(q) * e, period); }
};

inline std::vector<ThetaSample> theta_grid(long points = 16) {
  detail::require(points >= 1, "theta grid needs at least one point");
  std::vector<ThetaSample> g;
  for (long q = 0; q < points; ++q) g.push_back({q, points});
  return g;
}

using EntryFunction = std::function<cd(long, long)>;

/// Compression of an operator on l^2(Z) to the index window {lo..hi}.
class WindowedZOperator {
 public:
  WindowedZOperator(long lo, long hi, Matrix m, Provenance prov = {})
      : lo_(lo), hi_(hi), m_(std::move(m)), prov_(std::move(prov)) {
    detail::require(hi_ >= lo_, "empty index window");
    detail::require_same(m_.rows() == size() && m_.cols() == size(), "matrix does not match the index window");
  }

  static WindowedZOperator from_entries(long lo, long hi, const EntryFunction& entry, Provenance prov = {}) {
    detail::require(hi >= lo, "empty index window");
    const long n = hi - lo + 1;
    Matrix m(n, n);
    for (long c = 0; c < n; ++c)
      for (long r = 0; r < n; ++r) m(r, c) = entry(lo + r, lo + c);
    return WindowedZOperator(lo, hi, std::move(m), std::move(prov));
  }

  long lo() const { return lo_; }
  long hi() const { return hi_; }
  long size() const { return hi_ - lo_ + 1; }
  const Matrix& matrix() const { return m_; }
  const Provenance& provenance() const { return prov_; }

  /// Entry at global indices; zero outside the window.
  cd entry(long j, long k) const {
    if (j < lo_ || j > hi_ || k < lo_ || k > hi_) return 0.0;
    return m_(j - lo_, k - lo_);
  }

  bool same_window(const WindowedZOperator& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

 private:
  long lo_, hi_;
  Matrix m_;
  Provenance prov_;
};

/// Compression of alpha_(k,theta)(A) to {lo..hi}, where A is given by its entries on Z.
inline WindowedZOperator shifted_compression(const EntryFunction& entry, long lo, long hi, long k, ThetaSample theta,
                                             std::string builder = "shifted") {
  return WindowedZOperator::from_entries(
      lo, hi, [&](long j, long l) { return theta.power(j - l) * entry(j - k, l - k); },
      Provenance{std::move(builder), {{"k", static_cast<double>(k)},
                                      {"theta_turns", static_cast<double>(theta.q) / static_cast<double>(theta.period)}}});
}

// ---------------------------------------------------------------------------
// Block-projection operator A = A_0 P: block n (size n, all entries 1/n) on
// consecutive indices starting at 0, nothing on negative indices.

/// Smallest n with n(n+1)/2 > t, i.e. the block containing index t >= 0.
inline long halmos_block_of(long t) {
  long n = static_cast<long>(std::floor((std::sqrt(8.0 * static_cast<double>(t) + 1.0) - 1.0) / 2.0)) + 1;
  while (n * (n - 1) / 2 > t) --n;
  while (n * (n + 1) / 2 <= t) ++n;
  return n;
}

/// First index of block n.
inline long halmos_block_start(long n) { return n * (n - 1) / 2; }

inline cd halmos_entry(long j, long l) {
  if (j < 0 || l < 0) return 0.0;
  const long n = halmos_block_of(j);
  if (halmos_block_of(l) != n) return 0.0;
  return 1.0 / static_cast<double>(n);
}

/// First K blocks on the window {-pad .. K(K+1)/2 - 1}.
inline WindowedZOperator halmos_operator(long blocks, long pad = 0) {
  detail::require(blocks >= 1, "block count must be >= 1, got " + std::to_string(blocks));
  detail::require(pad >= 0, "padding must be nonnegative");
  const long t = blocks * (blocks + 1) / 2;
  return WindowedZOperator::from_entries(-pad, t - 1, halmos_entry,
                                         Provenance{"halmos", {{"blocks", static_cast<double>(blocks)},
                                                               {"pad", static_cast<double>(pad)}}});
}

/// Column norms c_k and row norms r_j, parameterized by global index.
inline std::pair<DecayProfile, DecayProfile> column_row_profiles(const WindowedZOperator& a) {
  const Matrix& m = a.matrix();
  std::vector<double> idx, cols, rows;
  for (long i = 0; i < a.size(); ++i) {
    idx.push_back(static_cast<double>(a.lo() + i));
    cols.push_back(m.col(i).norm());
    rows.push_back(m.row(i).norm());
  }
  return {DecayProfile(idx, cols), DecayProfile(std::move(idx), rows)};
}

struct B0Verdict {
  bool consistent = false;
  double max_outer_column = 0.0;
  double max_outer_row = 0.0;
};

/// Both profiles must be <= tol at every window index with |index| >= margin.
/// The comparison allows the default equality tolerance so that a norm equal to
/// tol in exact arithmetic passes.
inline B0Verdict b0_diagnostic(const WindowedZOperator& a, double tol, long margin) {
  detail::require(margin >= 0 && margin < a.size(), "margin must lie in [0, window size)");
  const auto [cols, rows] = column_row_profiles(a);
  B0Verdict v;
  v.max_outer_column = cols.tail_sup(static_cast<double>(margin));
  v.max_outer_row = rows.tail_sup(static_cast<double>(margin));
  const double cut = tol * (1.0 + kEqualityTol);
  v.consistent = v.max_outer_column <= cut && v.max_outer_row <= cut;
  return v;
}

enum class CountTrend { growing, stabilized, inconclusive };

inline const char* to_string(CountTrend t) {
  switch (t) {
    case CountTrend::growing: return "non-compact-trend";
    case CountTrend::stabilized: return "compact-consistent";
    default: return "inconclusive";
  }
}

struct CompactnessProxy {
  std::vector<long> sizes;
  std::vector<std::size_t> counts;  // singular values >= epsilon
  CountTrend trend = CountTrend::inconclusive;
};

inline std::size_t count_at_least(const RealVector& sv, double eps) {
  return static_cast<std::size_t>((sv.array() >= eps).count());
}

/// Counts singular values >= eps of builder(size) for each size. Strictly
/// increasing counts signal an unbounded trend; equal counts at the last two sizes
/// are compact-consistent.
inline CompactnessProxy compactness_proxy(const std::function<WindowedZOperator(long)>& builder,
                                          const std::vector<long>& sizes, double eps) {
  detail::require(!sizes.empty(), "compactness proxy needs at least one size");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    detail::require(sizes[i] > sizes[i - 1], "sizes must be strictly increasing");
  detail::require(eps > 0.0 && eps < 1.0, "epsilon must lie in (0, 1)");
  CompactnessProxy p;
  p.sizes = sizes;
  for (long s : sizes) p.counts.push_back(count_at_least(singular_values(builder(s).matrix()), eps));
  if (p.counts.size() >= 2) {
    bool increasing = true;
    for (std::size_t i = 1; i < p.counts.size(); ++i) increasing = increasing && p.counts[i] > p.counts[i - 1];
    if (increasing)
      p.trend = CountTrend::growing;
    else if (p.counts.back() == p.counts[p.counts.size() - 2])
      p.trend = CountTrend::stabilized;
  }
  return p;
}

struct HalmosSummary {
  long blocks = 0;
  long window_size = 0;
  std::size_t unit_singular_values = 0;  // in [1 - 1e-8, 1]
  std::size_t nonzero_singular_values = 0;
  double max_column_norm_error = 0.0;    // |c_k - 1/sqrt(n)| over the window
  double max_row_norm_error = 0.0;
  long b0_margin = 0;
  B0Verdict b0;
};

/// Column and row norms, singular values and the B0 diagnostic beyond
/// `b0_after_block` blocks for the first K blocks.
inline HalmosSummary halmos_diagnostics(long blocks, double b0_tol = 0.2, long b0_after_block = 25) {
  const WindowedZOperator a = halmos_operator(blocks);
  HalmosSummary s;
  s.blocks = blocks;
  s.window_size = a.size();
  const RealVector sv = singular_values(a.matrix());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] >= 1.0 - kRankTol && sv[i] <= 1.0 + 1e-12) ++s.unit_singular_values;
    if (sv[i] > kRankTol) ++s.nonzero_singular_values;
  }
  const auto [cols, rows] = column_row_profiles(a);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const double expect = 1.0 / std::sqrt(static_cast<double>(halmos_block_of(static_cast<long>(cols.params()[i]))));
    s.max_column_norm_error = std::max(s.max_column_norm_error, std::abs(cols.values()[i] - expect));
    s.max_row_norm_error = std::max(s.max_row_norm_error, std::abs(rows.values()[i] - expect));
  }
  s.b0_margin = halmos_block_start(b0_after_block + 1);
  if (s.b0_margin < a.size()) s.b0 = b0_diagnostic(a, b0_tol, s.b0_margin);
  return s;
}

/// diag(1, 1/2, 1/3, ...) on {0 .. size-1}.
inline WindowedZOperator harmonic_diagonal(long size) {
  detail::require(size >= 1, "size must be >= 1");
  return WindowedZOperator::from_entries(
      0, size - 1, [](long j, long l) { return j == l ? cd(1.0 / static_cast<double>(j + 1)) : cd(0.0); },
      Provenance{"harmonic-diagonal", {{"size", static_cast<double>(size)}}});
}

// ---------------------------------------------------------------------------
// Grid discretizations on an interval of R. Matrices act on nodal values and
// already carry the quadrature weight h; the L^2 pairing is h * sum u_i conj(v_i).

class GridOperator {
 public:
  GridOperator(double h, double x_lo, double x_hi, Matrix m) : h_(h), x_lo_(x_lo), x_hi_(x_hi), m_(std::move(m)) {
    detail::require(h_ > 0.0, "grid step must be positive");
    detail::require(x_hi_ > x_lo_, "degenerate grid range");
    detail::require(m_.rows() == point_count() && m_.cols() == point_count(),
                    "matrix does not match the grid");
  }

  static long points_for(double h, double x_lo, double x_hi) {
    const double steps = (x_hi - x_lo) / h;
    const double r = std::round(steps);
    detail::require(std::abs(steps - r) <= 1e-9 * std::max(1.0, r), "(x_hi - x_lo) / h must be an integer");
    return static_cast<long>(r) + 1;
  }

  double h() const { return h_; }
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  long point_count() const { return points_for(h_, x_lo_, x_hi_); }
  double x(long i) const { return x_lo_ + static_cast<double>(i) * h_; }
  const Matrix& matrix() const { return m_; }

  bool same_grid(const GridOperator& o) const {
    return h_ == o.h_ && x_lo_ == o.x_lo_ && x_hi_ == o.x_hi_;
  }

  GridOperator with_matrix(Matrix m) const { return GridOperator(h_, x_lo_, x_hi_, std::move(m)); }

 private:
  double h_, x_lo_, x_hi_;
  Matrix m_;
};

inline double grid_norm(const Vector& v, double h) { return std::sqrt(h) * v.norm(); }

namespace detail {
inline double grid_tol(double h) { return 1e-9 * h; }
}  // namespace detail

/// Half-open indicator of [a, b) at x, with endpoints snapped to the grid tolerance.
inline double grid_indicator(double x, double a, double b, double h) {
  const double tau = detail::grid_tol(h);
  return (x >= a - tau && x < b - tau) ? 1.0 : 0.0;
}

/// Kernel weight of 1_[-1,1](d) on the grid: 1 inside, 1/2 at a node sitting
/// exactly on the jump, 0 outside. Keeps the matrix symmetric and the interior
/// row sum equal to 2.
inline double box_kernel_weight(double d, double h) {
  const double ad = std::abs(d);
  const double tau = detail::grid_tol(h);
  if (ad < 1.0 - tau) return 1.0;
  if (ad <= 1.0 + tau) return 0.5;
  return 0.0;
}

/// Convolution by 1_[-1,1] on the grid of step h over [x_lo, x_hi].
inline GridOperator box_convolution_operator(double h, double x_lo, double x_hi) {
  detail::require(h > 0.0 && h <= 0.5, "box convolution needs 0 < h <= 0.5");
  detail::require(x_hi > x_lo, "degenerate grid range");
  const long n = GridOperator::points_for(h, x_lo, x_hi);
  Matrix c(n, n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i) c(i, j) = h * box_kernel_weight(static_cast<double>(i - j) * h, h);
  return GridOperator(h, x_lo, x_hi, std::move(c));
}

/// Four-piece closed form of (1_[n^2 - n/2, n^2 + n/2] * 1_[-1,1])(x): two
/// ramps and a plateau of height 2. Valid for n >= 2, where the interval has length >= 2.
inline double piecewise_g(long n, double x) {
  detail::require(n >= 2, "the four-piece form needs n >= 2");
  const double nn = static_cast<double>(n);
  const double a = nn * nn - nn / 2.0;
  const double b = nn * nn + nn / 2.0;
  if (x <= a - 1.0) return 0.0;
  if (x <= a + 1.0) return x + (1.0 + nn / 2.0 - nn * nn);
  if (x <= b - 1.0) return 2.0;
  if (x <= b + 1.0) return -x + (nn * nn + nn / 2.0 + 1.0);
  return 0.0;
}

/// (1_[n^2 - n/2, n^2 + n/2] * 1_[-1,1])(x) as the overlap length of [a, b] and [x-1, x+1];
/// agrees with piecewise_g for n >= 2 and also covers n = 1.
inline double box_indicator_convolution(long n, double x) {
  const double nn = static_cast<double>(n);
  const double a = nn * nn - nn / 2.0;
  const double b = nn * nn + nn / 2.0;
  return std::max(0.0, std::min(b, x + 1.0) - std::max(a, x - 1.0));
}

struct CacRecord {
  double h = 0.0;
  long n_max = 0;
  double projection_defect = 0.0;     // |A^2 - A|_op
  double g_max_error = 0.0;           // max over n, grid of |discrete g - closed form|
  std::vector<double> g_error_by_n;
  double plateau_max_deviation = 0.0; // max |discrete g - 2| at plateau nodes
  std::size_t plateau_nodes = 0;
  double min_kprime_minus_k = 0.0;    // discrete kernel of CAC minus kernel of A
  double min_closed_form_kprime_minus_k = 0.0;  // same with the closed-form g
  std::vector<double> cac_fn_norms;   // |CAC f_n|, n = 1..n_max
  bool g_within_2h = false;
  bool kernel_dominates = false;
};

struct CacExample {
  GridOperator a;
  GridOperator c;
  GridOperator cac;
  CacRecord record;
};

/// Right end of the grid needed for n <= n_max.
inline double cac_required_range(long n_max) {
  const double n = static_cast<double>(n_max);
  return n * n + n / 2.0 + 2.0;
}

/// Builds A (kernel sum_n (1/n) 1_In(x) 1_In(y), I_n = [n^2 - n/2, n^2 + n/2]),
/// the box convolution C and CAC on [0, x_hi], and evaluates the three checks:
/// discrete 1_In * 1_[-1,1] against the closed form, k' >= k, and |CAC f_n| >= 1.
inline CacExample cac_example(double h, long n_max, std::optional<double> x_hi_opt = std::nullopt) {
  detail::require(n_max >= 1, "n_max must be >= 1");
  detail::require(h > 0.0 && h <= 0.5, "grid step must satisfy 0 < h <= 0.5");
  const double need = cac_required_range(n_max);
  double x_hi = x_hi_opt.value_or(std::ceil(need / h - 1e-9) * h);
  detail::require(x_hi >= need - detail::grid_tol(h),
                  "insufficient grid range: n_max = " + std::to_string(n_max) + " needs x_hi >= " +
                      std::to_string(need) + ", got " + std::to_string(x_hi));
  const double x_lo = 0.0;
  const long npts = GridOperator::points_for(h, x_lo, x_hi);

  std::vector<Vector> ind;  // 1_In on the grid
  for (long n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    Vector v(npts);
    for (long i = 0; i < npts; ++i) v[i] = grid_indicator(x_lo + static_cast<double>(i) * h, nn * nn - nn / 2.0,
                                                           nn * nn + nn / 2.0, h);
    ind.push_back(std::move(v));
  }

  Matrix a = Matrix::Zero(npts, npts);
  for (long n = 1; n <= n_max; ++n) {
    const Vector& v = ind[static_cast<std::size_t>(n - 1)];
    a += (h / static_cast<double>(n)) * v * v.transpose();
  }
  GridOperator c = box_convolution_operator(h, x_lo, x_hi);
  GridOperator ga(h, x_lo, x_hi, a);
  Matrix cac = c.matrix() * a * c.matrix();

  CacRecord rec;
  rec.h = h;
  rec.n_max = n_max;
  rec.projection_defect = op_norm(a * a - a);

  // Discrete g_n = C 1_In against the closed form.
  std::vector<Vector> g_discrete;
  for (long n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    const Vector g = c.matrix() * ind[static_cast<std::size_t>(n - 1)];
    double err = 0.0;
    for (long i = 0; i < npts; ++i) {
      const double x = x_lo + static_cast<double>(i) * h;
      err = std::max(err, std::abs(g[i].real() - box_indicator_convolution(n, x)));
      if (x >= nn * nn - nn / 2.0 + 1.0 + detail::grid_tol(h) && x <= nn * nn + nn / 2.0 - 1.0 - detail::grid_tol(h)) {
        rec.plateau_max_deviation = std::max(rec.plateau_max_deviation, std::abs(g[i] - 2.0));
        ++rec.plateau_nodes;
      }
    }
    rec.g_error_by_n.push_back(err);
    rec.g_max_error = std::max(rec.g_max_error, err);
    g_discrete.push_back(g);
  }
  rec.g_within_2h = rec.g_max_error <= 2.0 * h;

  // Kernels at the nodes: k = A / h, k' = CAC / h.
  const Matrix diff = cac / h - a / h;
  rec.min_kprime_minus_k = diff.real().minCoeff();
  Matrix kc = Matrix::Zero(npts, npts);
  for (long n = 1; n <= n_max; ++n) {
    Vector gx(npts);
    for (long i = 0; i < npts; ++i) gx[i] = box_indicator_convolution(n, x_lo + static_cast<double>(i) * h);
    kc += (1.0 / static_cast<double>(n)) * gx * gx.transpose();
  }
  rec.min_closed_form_kprime_minus_k = (kc - a / h).real().minCoeff();
  rec.kernel_dominates = rec.min_kprime_minus_k >= -1e-12 && rec.min_closed_form_kprime_minus_k >= -1e-12;

  for (long n = 1; n <= n_max; ++n) {
    const Vector fn = ind[static_cast<std::size_t>(n - 1)] / std::sqrt(static_cast<double>(n));
    rec.cac_fn_norms.push_back(grid_norm(cac * fn, h));
  }

  return CacExample{std::move(ga), std::move(c), GridOperator(h, x_lo, x_hi, std::move(cac)), std::move(rec)};
}

// ---------------------------------------------------------------------------
// Topology probes.

enum class Topology { norm, strong_star, weak_star, divergent };

inline const char* to_string(Topology t) {
  switch (t) {
    case Topology::norm: return "norm";
    case Topology::strong_star: return "strong*";
    case Topology::weak_star: return "weak*";
    default: return "divergent";
  }
}

struct ProbeRow {
  std::size_t i = 0, j = 0;
  double norm_diff = 0.0;
  double strongstar_diff = 0.0;
  double weakstar_diff = 0.0;
};

struct TopologyProbeResult {
  Topology classification = Topology::divergent;
  std::vector<ProbeRow> rows;  // all pairs i < j
  std::size_t tail_start = 0;
  double tail_norm_sup = 0.0, tail_strongstar_sup = 0.0, tail_weakstar_sup = 0.0;
  double tail_norm_inf = 0.0;  // smallest norm difference among tail pairs
  // Cauchy-rate curves: entry i is the sup over tail pairs (p, q) with p, q >= i.
  std::vector<double> norm_curve, strongstar_curve, weakstar_curve;
};

/// Test vectors are normalized in the pairing with weight `weight`; test
/// trace-class operators are normalized to trace norm one, so that
/// norm-Cauchy implies strong*-Cauchy implies weak*-Cauchy.
inline TopologyProbeResult topology_probe(const std::vector<Matrix>& seq, const std::vector<Vector>& test_vectors,
                                          const std::vector<Matrix>& test_traceops, double tol, double weight = 1.0,
                                          std::optional<std::size_t> tail_start = std::nullopt) {
  detail::require(!seq.empty(), "topology probe needs a nonempty sequence");
  detail::require(!test_vectors.empty() && !test_traceops.empty(), "topology probe needs test vectors and operators");
  detail::require(tol > 0.0, "tolerance must be positive");
  const Eigen::Index dim = seq.front().rows();
  for (const auto& b : seq)
    detail::require_same(b.rows() == dim && b.cols() == dim, "sequence members must share a common window");

  std::vector<Vector> vs;
  for (const auto& v : test_vectors) {
    detail::require_same(v.size() == dim, "test vector length does not match the window");
    const double nv = std::sqrt(weight) * v.norm();
    detail::require(nv > 0.0, "test vectors must be nonzero");
    vs.push_back(v / nv);
  }
  std::vector<Matrix> ts;
  for (const auto& t : test_traceops) {
    detail::require_same(t.rows() == dim && t.cols() == dim, "test operator does not match the window");
    const double tn = trace_norm(t);
    detail::require(tn > 0.0, "test operators must be nonzero");
    ts.push_back(t / tn);
  }

  TopologyProbeResult res;
  const std::size_t len = seq.size();
  res.tail_start = tail_start.value_or(len / 2);
  detail::require(res.tail_start < len, "tail start beyond the sequence");

  const double sw = std::sqrt(weight);
  std::vector<std::vector<ProbeRow>> grid(len, std::vector<ProbeRow>(len));
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = i + 1; j < len; ++j) {
      const Matrix d = seq[i] - seq[j];
      ProbeRow r{i, j, op_norm(d), 0.0, 0.0};
      for (const auto& v : vs) {
        r.strongstar_diff = std::max({r.strongstar_diff, sw * (d * v).norm(), sw * (d.adjoint() * v).norm()});
      }
      for (const auto& t : ts) r.weakstar_diff = std::max(r.weakstar_diff, std::abs((d * t).trace()));
      res.rows.push_back(r);
      grid[i][j] = r;
    }

  res.norm_curve.assign(len, 0.0);
  res.strongstar_curve.assign(len, 0.0);
  res.weakstar_curve.assign(len, 0.0);
  for (std::size_t s = len; s-- > 0;) {
    double n = 0.0, st = 0.0, w = 0.0;
    for (std::size_t j = s + 1; j < len; ++j) {
      n = std::max(n, grid[s][j].norm_diff);
      st = std::max(st, grid[s][j].strongstar_diff);
      w = std::max(w, grid[s][j].weakstar_diff);
    }
    if (s + 1 < len) {
      n = std::max(n, res.norm_curve[s + 1]);
      st = std::max(st, res.strongstar_curve[s + 1]);
      w = std::max(w, res.weakstar_curve[s + 1]);
    }
    res.norm_curve[s] = n;
    res.strongstar_curve[s] = st;
    res.weakstar_curve[s] = w;
  }
  res.tail_norm_sup = res.norm_curve[res.tail_start];
  res.tail_strongstar_sup = res.strongstar_curve[res.tail_start];
  res.tail_weakstar_sup = res.weakstar_curve[res.tail_start];
  res.tail_norm_inf = len - res.tail_start >= 2 ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = res.tail_start; i < len; ++i)
    for (std::size_t j = i + 1; j < len; ++j) res.tail_norm_inf = std::min(res.tail_norm_inf, grid[i][j].norm_diff);

  if (res.tail_norm_sup <= tol)
    res.classification = Topology::norm;
  else if (res.tail_strongstar_sup <= tol)
    res.classification = Topology::strong_star;
  else if (res.tail_weakstar_sup <= tol)
    res.classification = Topology::weak_star;
  else
    res.classification = Topology::divergent;
  return res;
}

inline TopologyProbeResult topology_probe(const std::vector<WindowedZOperator>& seq,
                                          const std::vector<Vector>& test_vectors,
                                          const std::vector<Matrix>& test_traceops, double tol) {
  detail::require(!seq.empty(), "topology probe needs a nonempty sequence");
  std::vector<Matrix> ms;
  for (const auto& b : seq) {
    detail::require_same(b.same_window(seq.front()), "sequence members must share a common window");
    ms.push_back(b.matrix());
  }
  return topology_probe(ms, test_vectors, test_traceops, tol, 1.0);
}

inline TopologyProbeResult topology_probe(const std::vector<GridOperator>& seq, const std::vector<Vector>& test_vectors,
                                          const std::vector<Matrix>& test_traceops, double tol) {
  detail::require(!seq.empty(), "topology probe needs a nonempty sequence");
  std::vector<Matrix> ms;
  for (const auto& b : seq) {
    detail::require_same(b.same_grid(seq.front()), "sequence members must share a common grid");
    ms.push_back(b.matrix());
  }
  return topology_probe(ms, test_vectors, test_traceops, tol, seq.front().h());
}

/// A ready-made sequence together with its test functionals.
struct ProbeCase {
  std::string name;
  std::vector<Matrix> sequence;
  std::vector<Vector> test_vectors;
  std::vector<Matrix> test_traceops;
  double weight = 1.0;
};

inline Vector unit_vector(Eigen::Index dim, Eigen::Index i) {
  Vector v = Vector::Zero(dim);
  v[i] = 1.0;
  return v;
}

/// alpha_(k_i, theta_i)(A) for the block-projection operator, with the shift
/// chosen so that block n_i = 100 + 20 i starts at index 0 and theta_i running
/// through the 16-point grid. The window {0 .. 419} always holds a full block.
inline ProbeCase halmos_shift_case(std::size_t members = 16) {
  ProbeCase pc;
  pc.name = "halmos-shift";
  const long lo = 0, hi = 419;
  const auto grid = theta_grid(16);
  for (std::size_t i = 0; i < members; ++i) {
    const long n = 100 + 20 * static_cast<long>(i);
    const long k = -halmos_block_start(n);
    pc.sequence.push_back(shifted_compression(halmos_entry, lo, hi, k, grid[i % grid.size()]).matrix());
  }
  const Eigen::Index dim = hi - lo + 1;
  for (Eigen::Index i = 0; i < 3; ++i) pc.test_vectors.push_back(unit_vector(dim, i));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) pc.test_traceops.push_back(unit_vector(dim, i) * unit_vector(dim, j).adjoint());
  return pc;
}

inline cd parity_entry(long j, long l) { return j == -l ? cd(1.0) : cd(0.0); }

/// alpha_(k,theta)(R) for k = 1..members on the window {-64..64}.
inline ProbeCase parity_shift_case(std::size_t members = 24) {
  ProbeCase pc;
  pc.name = "parity-shift";
  const long lo = -64, hi = 64;
  detail::require(2 * static_cast<long>(members) + 2 <= hi, "parity-shift window too small for the requested shifts");
  const auto grid = theta_grid(16);
  for (std::size_t i = 0; i < members; ++i)
    pc.sequence.push_back(
        shifted_compression(parity_entry, lo, hi, static_cast<long>(i) + 1, grid[i % grid.size()]).matrix());
  const Eigen::Index dim = hi - lo + 1;
  const Eigen::Index origin = -lo;
  for (Eigen::Index d = -1; d <= 1; ++d) pc.test_vectors.push_back(unit_vector(dim, origin + d));
  for (Eigen::Index a = -2; a <= 2; ++a)
    for (Eigen::Index b = -2; b <= 2; ++b)
      pc.test_traceops.push_back(unit_vector(dim, origin + a) * unit_vector(dim, origin + b).adjoint());
  return pc;
}

/// alpha_(0,xi)(C) = M_xi C M_xi^*, (M_xi f)(t) = exp(-i xi t) f(t).
inline GridOperator modulate_grid_operator(const GridOperator& c, double xi) {
  const long n = c.point_count();
  Matrix m(n, n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i) m(i, j) = std::polar(1.0, -xi * (c.x(i) - c.x(j))) * c.matrix()(i, j);
  return c.with_matrix(std::move(m));
}

inline Vector gaussian_on_grid(const GridOperator& g, double center = 0.0, double width = 1.0) {
  Vector v(g.point_count());
  for (long i = 0; i < g.point_count(); ++i) {
    const double d = (g.x(i) - center) / width;
    v[i] = std::exp(-0.5 * d * d);
  }
  return v / grid_norm(v, g.h());
}

/// Box convolution on [-8, 8] with h = 0.02, modulated by xi = 10, 15, ..., 10 + 5 (members - 1).
inline ProbeCase box_modulation_case(std::size_t members = 9) {
  ProbeCase pc;
  pc.name = "box-modulation";
  const GridOperator c = box_convolution_operator(0.02, -8.0, 8.0);
  pc.weight = c.h();
  for (std::size_t i = 0; i < members; ++i)
    pc.sequence.push_back(modulate_grid_operator(c, 10.0 + 5.0 * static_cast<double>(i)).matrix());
  const Vector g0 = gaussian_on_grid(c, 0.0, 1.0);
  const Vector g1 = gaussian_on_grid(c, 1.0, 0.5);
  pc.test_vectors = {g0, g1};
  // Rank-one h * u v^* has trace norm h |u| |v| = 1 for unit grid vectors.
  pc.test_traceops = {c.h() * g0 * g0.adjoint(), c.h() * g0 * g1.adjoint(), c.h() * g1 * g1.adjoint()};
  return pc;
}

inline TopologyProbeResult run_probe_case(const ProbeCase& pc, double tol) {
  return topology_probe(pc.sequence, pc.test_vectors, pc.test_traceops, tol, pc.weight);
}

inline ProbeCase probe_case_by_name(const std::string& name) {
  if (name == "halmos-shift") return halmos_shift_case();
  if (name == "parity-shift") return parity_shift_case();
  if (name == "box-modulation") return box_modulation_case();
  throw precondition_error("unknown probe case '" + name + "' (expected halmos-shift, parity-shift, box-modulation)");
}

}  // namespace qha
