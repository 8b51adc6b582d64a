#pragma once

// Finitely supported sequences on Z, stored on an explicit index window.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "qha/errors.hpp"
#include "qha/linalg.hpp"

namespace qha {

class ZSequence {
 public:
  ZSequence() = default;
  ZSequence(long lo, std::vector<cd> values) : lo_(lo), values_(std::move(values)) {}

  static ZSequence zeros(long lo, long hi) {
    detail::require(hi >= lo, "empty window");
    return ZSequence(lo, std::vector<cd>(static_cast<std::size_t>(hi - lo + 1), 0.0));
  }

  long lo() const { return lo_; }
  long hi() const { return lo_ + static_cast<long>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  const std::vector<cd>& values() const { return values_; }

  /// Value at t, zero outside the window.
  cd at(long t) const {
    if (t < lo_ || t > hi()) return 0.0;
    return values_[static_cast<std::size_t>(t - lo_)];
  }
  void set(long t, cd v) {
    detail::require(t >= lo_ && t <= hi(), "index outside the sequence window");
    values_[static_cast<std::size_t>(t - lo_)] = v;
  }

  double norm1() const {
    double s = 0.0;
    for (const cd& v : values_) s += std::abs(v);
    return s;
  }
  double norm_inf() const {
    double s = 0.0;
    for (const cd& v : values_) s = std::max(s, std::abs(v));
    return s;
  }

  /// Smallest and largest index carrying a nonzero value; {lo, lo-1} when identically zero.
  std::pair<long, long> support() const {
    long a = hi() + 1, b = lo_ - 1;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] != cd(0.0)) {
        a = std::min(a, lo_ + static_cast<long>(i));
        b = std::max(b, lo_ + static_cast<long>(i));
      }
    if (a > b) return {lo_, lo_ - 1};
    return {a, b};
  }

  /// alpha_s h (t) = h(t - s)
  ZSequence shifted(long s) const { return ZSequence(lo_ + s, values_); }

  friend ZSequence operator*(cd c, ZSequence z) {
    for (cd& v : z.values_) v *= c;
    return z;
  }

 private:
  long lo_ = 0;
  std::vector<cd> values_;
};

/// sum_t |a(t) - b(t)| over the union of both windows.
inline double l1_distance(const ZSequence& a, const ZSequence& b) {
  if (a.size() == 0 && b.size() == 0) return 0.0;
  const long lo = std::min(a.lo(), b.lo());
  const long hi = std::max(a.hi(), b.hi());
  double s = 0.0;
  for (long t = lo; t <= hi; ++t) s += std::abs(a.at(t) - b.at(t));
  return s;
}

/// (h * f)(x) = sum_s h(s) f(x - s), with f read as zero outside its window.
inline cd convolve_at(const ZSequence& h, const ZSequence& f, long x) {
  cd s = 0.0;
  for (long t = h.lo(); t <= h.hi(); ++t) {
    const cd hv = h.at(t);
    if (hv != cd(0.0)) s += hv * f.at(x - t);
  }
  return s;
}

}  // namespace qha
