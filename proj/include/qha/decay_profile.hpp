#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qha/errors.hpp"

namespace qha {

/// Nonnegative values sampled at strictly increasing parameters; the numerical
/// stand-in for "tends to zero at infinity".
class DecayProfile {
 public:
  DecayProfile() = default;
  DecayProfile(std::vector<double> params, std::vector<double> values)
      : params_(std::move(params)), values_(std::move(values)) {
    detail::require_same(params_.size() == values_.size(), "profile parameter/value counts differ");
    for (std::size_t i = 1; i < params_.size(); ++i)
      detail::require(params_[i] > params_[i - 1], "profile parameters must be strictly increasing");
    for (double v : values_) detail::require(v >= 0.0, "profile values must be nonnegative");
  }

  std::size_t size() const { return params_.size(); }
  bool empty() const { return params_.empty(); }
  const std::vector<double>& params() const { return params_; }
  const std::vector<double>& values() const { return values_; }

  double max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }

  /// sup of the values with |param| >= threshold (0 when no such entry).
  double tail_sup(double threshold) const {
    double s = 0.0;
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (std::abs(params_[i]) >= threshold) s = std::max(s, values_[i]);
    return s;
  }

  /// Least-squares slope of log(value) against log|param| over the outer half of
  /// the |param| range, skipping zero entries. Empty when fewer than two usable points.
  std::optional<double> fitted_slope() const {
    double reach = 0.0;
    for (double p : params_) reach = std::max(reach, std::abs(p));
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < params_.size(); ++i) {
      const double p = std::abs(params_[i]);
      if (p >= 0.5 * reach && p > 0.0 && values_[i] > 0.0) pts.emplace_back(std::log(p), std::log(values_[i]));
    }
    if (pts.size() < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    if (!(sxx > 0.0)) return std::nullopt;
    return sxy / sxx;
  }

 private:
  std::vector<double> params_;
  std::vector<double> values_;
};

}  // namespace qha
