#pragma once

// Short-time Fourier transforms, uniform decay profiles, the epsilon-net tail
// bound, Riesz-Kolmogorov moduli, localization operators and the uniform
// compactness profile.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qha/asymptotics.hpp"
#include "qha/core_groups.hpp"
#include "qha/decay_profile.hpp"
#include "qha/errors.hpp"
#include "qha/hilbert_op.hpp"
#include "qha/linalg.hpp"
#include "qha/qha_conv.hpp"
#include "qha/random.hpp"
#include "qha/weyl_system.hpp"
#include "qha/zsequence.hpp"

namespace qha {

/// V(x, xi) = w * sum_t phi(t) xi(t) f(t - x); rows are x, columns are dual indices.
inline Matrix stft(const GroupFunction& f, const GroupFunction& phi) {
  f.check_compatible(phi);
  const auto& g = f.group();
  const auto n = static_cast<Eigen::Index>(g.cardinality());
  Matrix v(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index c = 0; c < n; ++c) {
      cd s = 0.0;
      for (Eigen::Index t = 0; t < n; ++t)
        s += phi[static_cast<std::size_t>(t)] * g.character_value(static_cast<std::size_t>(c), static_cast<std::size_t>(t)) *
             f[g.subtract_index(static_cast<std::size_t>(t), static_cast<std::size_t>(x))];
      v(x, c) = g.haar_weight() * s;
    }
  return v;
}

/// Same transform through V(., xi) = (phi xi) * (R f), one convolution per dual index.
inline Matrix stft_by_convolution(const GroupFunction& f, const GroupFunction& phi) {
  f.check_compatible(phi);
  const auto& g = f.group();
  const auto n = static_cast<Eigen::Index>(g.cardinality());
  const GroupFunction rf = parity(f);
  Matrix v(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const GroupFunction col = convolve(modulate(phi, Character{g.element(static_cast<std::size_t>(c)).residues}), rf);
    for (Eigen::Index x = 0; x < n; ++x) v(x, c) = col[static_cast<std::size_t>(x)];
  }
  return v;
}

/// Profile over x (group index) of sup over the given dual indices; all of them by default.
inline DecayProfile uniform_decay_profile(const GroupFunction& f, const GroupFunction& phi,
                                          std::optional<std::vector<std::size_t>> duals = std::nullopt) {
  const Matrix v = stft(f, phi);
  std::vector<std::size_t> k;
  if (duals) {
    k = *duals;
    detail::require(!k.empty(), "dual sample set must be nonempty");
  } else {
    for (std::size_t c = 0; c < f.size(); ++c) k.push_back(c);
  }
  std::vector<double> xs, vals;
  for (Eigen::Index x = 0; x < v.rows(); ++x) {
    double m = 0.0;
    for (std::size_t c : k) {
      detail::require(c < f.size(), "dual index out of range");
      m = std::max(m, std::abs(v(x, static_cast<Eigen::Index>(c))));
    }
    xs.push_back(static_cast<double>(x));
    vals.push_back(m);
  }
  return DecayProfile(std::move(xs), std::move(vals));
}

/// theta = exp(2 pi i * turns) for `points` equally spaced samples of the circle.
inline std::vector<double> circle_grid(long points = 64) {
  detail::require(points >= 1, "circle grid needs at least one point");
  std::vector<double> g;
  for (long q = 0; q < points; ++q) g.push_back(static_cast<double>(q) / static_cast<double>(points));
  return g;
}

/// V(x, theta) = sum_t phi(t) theta^t f(t - x) on Z.
inline cd stft_z(const ZSequence& f, const ZSequence& phi, long x, double turns) {
  cd s = 0.0;
  for (long t = phi.lo(); t <= phi.hi(); ++t) {
    const cd p = phi.at(t);
    if (p == cd(0.0)) continue;
    s += p * std::polar(1.0, kTwoPi * turns * static_cast<double>(t)) * f.at(t - x);
  }
  return s;
}

/// Shifts x for which t - x stays inside f's window for every t in supp(phi).
inline std::pair<long, long> valid_shift_range(const ZSequence& f, const ZSequence& phi) {
  const auto [a, b] = phi.support();
  detail::require(b >= a, "window function must not vanish identically");
  const long x_lo = b - f.hi();
  const long x_hi = a - f.lo();
  detail::require(x_lo <= x_hi, "support of the window function (" + std::to_string(b - a + 1) +
                                    " points) exceeds the signal window (" + std::to_string(f.size()) + " points)");
  return {x_lo, x_hi};
}

/// sup over theta in K of |V(x, theta)| on the valid shift range. K defaults to a 64-point grid.
inline DecayProfile uniform_decay_profile(const ZSequence& f, const ZSequence& phi,
                                          std::vector<double> k = circle_grid(64)) {
  detail::require(!k.empty(), "dual sample set must be nonempty");
  const auto [x_lo, x_hi] = valid_shift_range(f, phi);
  std::vector<double> xs, vals;
  for (long x = x_lo; x <= x_hi; ++x) {
    double m = 0.0;
    for (double th : k) m = std::max(m, std::abs(stft_z(f, phi, x, th)));
    xs.push_back(static_cast<double>(x));
    vals.push_back(m);
  }
  return DecayProfile(std::move(xs), std::move(vals));
}

// ---------------------------------------------------------------------------

struct NetCertificate {
  std::vector<double> generator_tails;
  double epsilon = 0.0;
  double bound_C = 0.0;
};

/// max_j t_j + epsilon * C
inline double certified_tail_bound(const NetCertificate& cert) {
  detail::require(!cert.generator_tails.empty(), "generator tails must be nonempty");
  detail::require(cert.epsilon >= 0.0 && cert.bound_C >= 0.0, "epsilon and C must be nonnegative");
  double t = 0.0;
  for (double v : cert.generator_tails) {
    detail::require(v >= 0.0, "generator tails must be nonnegative");
    t = std::max(t, v);
  }
  return t + cert.epsilon * cert.bound_C;
}

struct EpsilonNet {
  std::vector<std::size_t> centers;  // indices into the family
  double radius = 0.0;               // verified max distance to the nearest center
};

/// Greedy epsilon-net in l^1: repeatedly takes the member farthest from the chosen centers.
inline EpsilonNet greedy_net(const std::vector<ZSequence>& family, double eps) {
  detail::require(!family.empty(), "epsilon-net of an empty family");
  detail::require(eps >= 0.0, "net radius must be nonnegative");
  EpsilonNet net;
  std::vector<double> dist(family.size(), std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  for (;;) {
    net.centers.push_back(next);
    for (std::size_t i = 0; i < family.size(); ++i) dist[i] = std::min(dist[i], l1_distance(family[i], family[next]));
    const auto far = std::max_element(dist.begin(), dist.end());
    net.radius = *far;
    if (net.radius <= eps) break;
    next = static_cast<std::size_t>(far - dist.begin());
  }
  return net;
}

/// sup over fs and tail shifts of |h * f(x)|.
inline double measured_tail(const ZSequence& h, const std::vector<ZSequence>& fs, const std::vector<long>& tail) {
  double m = 0.0;
  for (const auto& f : fs)
    for (long x : tail) m = std::max(m, std::abs(convolve_at(h, f, x)));
  return m;
}

/// Outer third of the shift range {lo..hi} at each end.
inline std::vector<long> outer_third(long lo, long hi) {
  detail::require(hi >= lo, "empty shift range");
  const long third = (hi - lo + 1) / 3;
  std::vector<long> out;
  for (long x = lo; x < lo + third; ++x) out.push_back(x);
  for (long x = hi - third + 1; x <= hi; ++x) out.push_back(x);
  return out;
}

struct TailAuditReport {
  std::size_t instances = 0;
  std::size_t violations = 0;
  double max_measured_over_bound = 0.0;
};

/// Random families H of short filters on Z, covered by a greedy net, acting on
/// decaying signals bounded by C. Each instance compares the measured tail sup
/// over all of H with the certified bound built from the net centers only.
inline TailAuditReport audit_certified_tail_bound(std::size_t instances, std::uint64_t seed) {
  detail::require(instances >= 1, "audit needs at least one instance");
  TailAuditReport rep;
  rep.instances = instances;
  const long w = 60;
  for (std::size_t inst = 0; inst < instances; ++inst) {
    auto rng = sample_rng(seed, inst);
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<ZSequence> family;
    const int base_count = count(rng);
    for (int b = 0; b < base_count; ++b) {
      std::vector<cd> vals(11);
      for (auto& v : vals) v = random_complex(rng);
      const ZSequence base(-5, vals);
      family.push_back(base);
      for (int p = 0; p < 3; ++p) {
        std::vector<cd> pv = vals;
        const double scale = 0.05 * unif(rng);
        for (auto& v : pv) v += scale * random_complex(rng);
        family.emplace_back(-5, std::move(pv));
      }
    }
    const double eps = 0.3 * unif(rng);
    const EpsilonNet net = greedy_net(family, eps);

    std::vector<ZSequence> fs;
    const double decay = 2.0 + 20.0 * unif(rng);
    double c_bound = 0.0;
    for (int k = 0; k < 3; ++k) {
      ZSequence f = ZSequence::zeros(-w, w);
      for (long t = -w; t <= w; ++t) {
        const cd v = random_complex(rng) * std::exp(-std::abs(static_cast<double>(t)) / decay);
        f.set(t, v);
      }
      c_bound = std::max(c_bound, f.norm_inf());
      fs.push_back(std::move(f));
    }

    const std::vector<long> tail = outer_third(-w, w);
    NetCertificate cert;
    cert.epsilon = net.radius;
    cert.bound_C = c_bound;
    for (std::size_t c : net.centers) cert.generator_tails.push_back(measured_tail(family[c], fs, tail));
    const double bound = certified_tail_bound(cert);

    double measured = 0.0;
    for (const auto& h : family) measured = std::max(measured, measured_tail(h, fs, tail));
    if (measured > bound + 1e-12 * std::max(1.0, bound)) ++rep.violations;
    if (bound > 0.0) rep.max_measured_over_bound = std::max(rep.max_measured_over_bound, measured / bound);
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct RkModuli {
  DecayProfile modulus;   // s -> sup_h |alpha_s h - h|_1
  DecayProfile tailmass;  // M -> sup_h sum_{|t| > M} |h(t)|
};

/// Equicontinuity modulus for shifts 0..max_shift and tail mass for M = 0 .. max |t| over the windows.
inline RkModuli rk_moduli(const std::vector<ZSequence>& family, long max_shift = 16) {
  detail::require(!family.empty(), "Riesz-Kolmogorov moduli of an empty family");
  detail::require(max_shift >= 0, "maximal shift must be nonnegative");
  std::vector<double> ss, mod;
  for (long s = 0; s <= max_shift; ++s) {
    double m = 0.0;
    for (const auto& h : family) m = std::max(m, l1_distance(h.shifted(s), h));
    ss.push_back(static_cast<double>(s));
    mod.push_back(m);
  }
  long reach = 0;
  for (const auto& h : family)
    if (h.size() > 0) reach = std::max({reach, std::abs(h.lo()), std::abs(h.hi())});
  std::vector<double> ms, tails;
  for (long big_m = 0; big_m <= reach; ++big_m) {
    double m = 0.0;
    for (const auto& h : family) {
      double s = 0.0;
      for (long t = h.lo(); t <= h.hi(); ++t)
        if (std::abs(t) > big_m) s += std::abs(h.at(t));
      m = std::max(m, s);
    }
    ms.push_back(static_cast<double>(big_m));
    tails.push_back(m);
  }
  return RkModuli{DecayProfile(std::move(ss), std::move(mod)), DecayProfile(std::move(ms), std::move(tails))};
}

/// f * (phi (x) psi)
inline HilbertOp localization_operator(const PhaseSpace& ps, const GroupFunction& f, const Vector& phi,
                                       const Vector& psi) {
  detail::require_same(phi.size() == ps.n() && psi.size() == ps.n(), "window vectors must have length N");
  return conv_fn_op(ps, f, rank_one(phi, psi));
}

/// Profile over y (phase-space index) of sup_{x in K} |((U_x A) * B)(y)|.
inline DecayProfile uniform_compactness_profile(const PhaseSpace& ps, const HilbertOp& a, const HilbertOp& b,
                                                const std::vector<PhasePoint>& k) {
  detail::require(!k.empty(), "sample set K must be nonempty");
  std::vector<double> best(ps.size(), 0.0);
  for (const auto& x : k) {
    const GroupFunction c = conv_op_op(ps, weyl(ps, x) * a, b);
    for (std::size_t y = 0; y < ps.size(); ++y) best[y] = std::max(best[y], std::abs(c[y]));
  }
  std::vector<double> ys;
  for (std::size_t y = 0; y < ps.size(); ++y) ys.push_back(static_cast<double>(y));
  return DecayProfile(std::move(ys), std::move(best));
}

/// Phase-space point (k, theta) of Z x T.
struct ZPhasePoint {
  long k = 0;
  ThetaSample theta;
};

/// Windowed backend: A and B are operators on l^2(Z) vanishing outside their
/// windows, so (U_x A) * B (s, eta) = Tr(U_x A alpha_(s,eta)(R B R)) is a finite
/// sum with no truncation error. The profile over s takes the sup over x in K
/// and over eta in the theta grid.
inline DecayProfile uniform_compactness_profile(const WindowedZOperator& a, const WindowedZOperator& b,
                                                const std::vector<ZPhasePoint>& k, long s_lo, long s_hi,
                                                const std::vector<ThetaSample>& etas = theta_grid(16)) {
  detail::require(!k.empty(), "sample set K must be nonempty");
  detail::require(!etas.empty(), "theta grid must be nonempty");
  detail::require(s_hi >= s_lo, "empty shift range");
  std::vector<double> ss, vals;
  for (long s = s_lo; s <= s_hi; ++s) {
    double m = 0.0;
    for (const auto& x : k)
      for (const auto& eta : etas) {
        // P = U_x A: P_(j,l) = theta^j A_(j-k, l); Q = alpha_(s,eta)(RBR): Q_(l,j) = eta^(l-j) B_(s-l, s-j).
        cd tr = 0.0;
        for (long j = a.lo() + x.k; j <= a.hi() + x.k; ++j)
          for (long l = a.lo(); l <= a.hi(); ++l) {
            const cd p = a.entry(j - x.k, l);
            if (p == cd(0.0)) continue;
            const cd q = b.entry(s - l, s - j);
            if (q == cd(0.0)) continue;
            tr += x.theta.power(j) * p * eta.power(l - j) * q;
          }
        m = std::max(m, std::abs(tr));
      }
    ss.push_back(static_cast<double>(s));
    vals.push_back(m);
  }
  return DecayProfile(std::move(ss), std::move(vals));
}

}  // namespace qha
