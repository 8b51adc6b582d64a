#pragma once

// Finite abelian groups Z_{N1} x ... x Z_{Nk} with a Haar weight, their duals,
// and the classical function calculus on them.
//
// Elements and characters are indexed lexicographically, last factor fastest:
// index(x) = ((x_1 * N_2 + x_2) * N_3 + x_3) ...

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qha/errors.hpp"
#include "qha/linalg.hpp"

namespace qha {

struct GroupElement {
  std::vector<int> residues;
  bool operator==(const GroupElement&) const = default;
};

/// Character x -> prod_j exp(2 pi i m_j x_j / N_j), identified with its frequency tuple.
struct Character {
  std::vector<int> frequencies;
  bool operator==(const Character&) const = default;
};

class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<int> orders, double haar_weight = 1.0)
      : orders_(std::move(orders)), haar_weight_(haar_weight) {
    detail::require(!orders_.empty(), "group needs at least one cyclic factor");
    for (int n : orders_) detail::require(n >= 1, "cyclic orders must be >= 1");
    detail::require(haar_weight_ > 0.0 && std::isfinite(haar_weight_), "haar weight must be positive");
    cardinality_ = std::accumulate(orders_.begin(), orders_.end(), std::size_t{1},
                                   [](std::size_t a, int n) { return a * static_cast<std::size_t>(n); });
  }

  const std::vector<int>& orders() const { return orders_; }
  double haar_weight() const { return haar_weight_; }
  std::size_t cardinality() const { return cardinality_; }
  std::size_t factor_count() const { return orders_.size(); }

  /// Same orders, weight 1/(w |G|): makes the double Fourier transform equal parity.
  FiniteAbelianGroup dual() const {
    return FiniteAbelianGroup(orders_, 1.0 / (haar_weight_ * static_cast<double>(cardinality_)));
  }

  bool same_structure(const FiniteAbelianGroup& other) const { return orders_ == other.orders_; }

  bool operator==(const FiniteAbelianGroup& other) const {
    return orders_ == other.orders_ && haar_weight_ == other.haar_weight_;
  }

  GroupElement element(std::size_t index) const {
    GroupElement x{std::vector<int>(orders_.size())};
    for (std::size_t j = orders_.size(); j-- > 0;) {
      const auto n = static_cast<std::size_t>(orders_[j]);
      x.residues[j] = static_cast<int>(index % n);
      index /= n;
    }
    return x;
  }

  std::size_t index(const GroupElement& x) const {
    detail::require_same(contains(x), "element does not belong to the group");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < orders_.size(); ++j)
      idx = idx * static_cast<std::size_t>(orders_[j]) + static_cast<std::size_t>(x.residues[j]);
    return idx;
  }

  bool contains(const GroupElement& x) const {
    if (x.residues.size() != orders_.size()) return false;
    for (std::size_t j = 0; j < orders_.size(); ++j)
      if (x.residues[j] < 0 || x.residues[j] >= orders_[j]) return false;
    return true;
  }

  bool contains(const Character& chi) const { return contains(GroupElement{chi.frequencies}); }

  GroupElement zero() const { return GroupElement{std::vector<int>(orders_.size(), 0)}; }

  GroupElement add(const GroupElement& x, const GroupElement& y) const {
    GroupElement r{std::vector<int>(orders_.size())};
    for (std::size_t j = 0; j < orders_.size(); ++j)
      r.residues[j] = static_cast<int>(mod(x.residues[j] + y.residues[j], orders_[j]));
    return r;
  }

  GroupElement negate(const GroupElement& x) const {
    GroupElement r{std::vector<int>(orders_.size())};
    for (std::size_t j = 0; j < orders_.size(); ++j)
      r.residues[j] = static_cast<int>(mod(-x.residues[j], orders_[j]));
    return r;
  }

  std::size_t add_index(std::size_t i, std::size_t k) const {
    std::size_t r = 0, place = 1;
    for (std::size_t j = orders_.size(); j-- > 0;) {
      const auto n = static_cast<std::size_t>(orders_[j]);
      r += ((i % n + k % n) % n) * place;
      i /= n;
      k /= n;
      place *= n;
    }
    return r;
  }

  std::size_t negate_index(std::size_t i) const {
    std::size_t r = 0, place = 1;
    for (std::size_t j = orders_.size(); j-- > 0;) {
      const auto n = static_cast<std::size_t>(orders_[j]);
      r += ((n - i % n) % n) * place;
      i /= n;
      place *= n;
    }
    return r;
  }

  std::size_t subtract_index(std::size_t i, std::size_t k) const { return add_index(i, negate_index(k)); }

  /// chi(x) for the character with lexicographic index chi_index.
  cd character_value(std::size_t chi_index, std::size_t x_index) const {
    // Accumulate the phase as a fraction of a full turn over the common denominator.
    long long num = 0;
    long long den = 1;
    for (std::size_t j = orders_.size(); j-- > 0;) {
      const long long n = orders_[j];
      const long long m = static_cast<long long>(chi_index % static_cast<std::size_t>(n));
      const long long x = static_cast<long long>(x_index % static_cast<std::size_t>(n));
      num = mod(num * n + (m * x % n) * den, den * n);
      den *= n;
      chi_index /= static_cast<std::size_t>(n);
      x_index /= static_cast<std::size_t>(n);
    }
    return root_of_unity(num, den);
  }

  cd evaluate(const Character& chi, const GroupElement& x) const {
    detail::require_same(contains(chi) && contains(x), "character or element outside the group");
    return character_value(index(GroupElement{chi.frequencies}), index(x));
  }

 private:
  std::vector<int> orders_;
  double haar_weight_;
  std::size_t cardinality_ = 1;
};

/// Complex-valued function on a finite abelian group, values in lexicographic order.
class GroupFunction {
 public:
  GroupFunction(FiniteAbelianGroup group, std::vector<cd> values)
      : group_(std::move(group)), values_(std::move(values)) {
    detail::require_same(values_.size() == group_.cardinality(),
                         "value count " + std::to_string(values_.size()) + " does not match |G| = " +
                             std::to_string(group_.cardinality()));
  }

  static GroupFunction zeros(const FiniteAbelianGroup& g) { return constant(g, 0.0); }

  static GroupFunction constant(const FiniteAbelianGroup& g, cd c) {
    return GroupFunction(g, std::vector<cd>(g.cardinality(), c));
  }

  /// Indicator of a single point (value 1, mass = haar_weight).
  static GroupFunction delta(const FiniteAbelianGroup& g, std::size_t index) {
    detail::require(index < g.cardinality(), "delta index out of range");
    std::vector<cd> v(g.cardinality(), 0.0);
    v[index] = 1.0;
    return GroupFunction(g, std::move(v));
  }

  /// Point mass with integral one (value 1/haar_weight).
  static GroupFunction unit_mass_delta(const FiniteAbelianGroup& g, std::size_t index) {
    GroupFunction d = delta(g, index);
    d.values_[index] = 1.0 / g.haar_weight();
    return d;
  }

  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<cd>& values() const { return values_; }
  std::vector<cd>& values() { return values_; }
  std::size_t size() const { return values_.size(); }

  cd operator[](std::size_t i) const { return values_[i]; }
  cd& operator[](std::size_t i) { return values_[i]; }
  cd operator()(const GroupElement& x) const { return values_[group_.index(x)]; }

  /// Weighted p-norm (w * sum |f|^p)^(1/p).
  double norm(double p) const {
    double s = 0.0;
    for (const cd& v : values_) s += std::pow(std::abs(v), p);
    return std::pow(group_.haar_weight() * s, 1.0 / p);
  }
  double norm1() const {
    double s = 0.0;
    for (const cd& v : values_) s += std::abs(v);
    return group_.haar_weight() * s;
  }
  double norm2() const {
    double s = 0.0;
    for (const cd& v : values_) s += std::norm(v);
    return std::sqrt(group_.haar_weight() * s);
  }
  double norm_inf() const {
    double s = 0.0;
    for (const cd& v : values_) s = std::max(s, std::abs(v));
    return s;
  }

  /// Integral with respect to the Haar weight.
  cd integral() const {
    cd s = 0.0;
    for (const cd& v : values_) s += v;
    return group_.haar_weight() * s;
  }

  GroupFunction& operator+=(const GroupFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  GroupFunction& operator-=(const GroupFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  GroupFunction& operator*=(cd c) {
    for (cd& v : values_) v *= c;
    return *this;
  }
  friend GroupFunction operator+(GroupFunction a, const GroupFunction& b) { return a += b; }
  friend GroupFunction operator-(GroupFunction a, const GroupFunction& b) { return a -= b; }
  friend GroupFunction operator*(cd c, GroupFunction a) { return a *= c; }

  /// Pointwise product.
  friend GroupFunction pointwise(const GroupFunction& a, const GroupFunction& b) {
    a.check_compatible(b);
    GroupFunction r = a;
    for (std::size_t i = 0; i < r.values_.size(); ++i) r.values_[i] *= b.values_[i];
    return r;
  }

  void check_compatible(const GroupFunction& o) const {
    detail::require_same(group_.same_structure(o.group_), "functions live on different groups");
  }

 private:
  FiniteAbelianGroup group_;
  std::vector<cd> values_;
};

inline double max_abs_diff(const GroupFunction& a, const GroupFunction& b) {
  a.check_compatible(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// alpha_x f (y) = f(y - x)
inline GroupFunction translate(const GroupFunction& f, const GroupElement& x) {
  const auto& g = f.group();
  detail::require_same(g.contains(x), "translation element is not in the function's group");
  const std::size_t xi = g.index(x);
  std::vector<cd> out(f.size());
  for (std::size_t y = 0; y < f.size(); ++y) out[y] = f[g.subtract_index(y, xi)];
  return GroupFunction(g, std::move(out));
}

/// beta_- f (y) = f(-y)
inline GroupFunction parity(const GroupFunction& f) {
  const auto& g = f.group();
  std::vector<cd> out(f.size());
  for (std::size_t y = 0; y < f.size(); ++y) out[y] = f[g.negate_index(y)];
  return GroupFunction(g, std::move(out));
}

inline GroupFunction modulate(const GroupFunction& f, const Character& chi) {
  const auto& g = f.group();
  detail::require_same(g.contains(chi), "character does not belong to the dual of the function's group");
  const std::size_t ci = g.index(GroupElement{chi.frequencies});
  std::vector<cd> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = g.character_value(ci, x) * f[x];
  return GroupFunction(g, std::move(out));
}

/// Ff(chi) = w * sum_x conj(chi(x)) f(x), returned on the dual group.
inline GroupFunction fourier(const GroupFunction& f) {
  const auto& g = f.group();
  const std::size_t n = f.size();
  std::vector<cd> out(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    cd s = 0.0;
    for (std::size_t x = 0; x < n; ++x) s += std::conj(g.character_value(c, x)) * f[x];
    out[c] = g.haar_weight() * s;
  }
  return GroupFunction(g.dual(), std::move(out));
}

/// f * g (x) = w * sum_y f(y) g(x - y)
inline GroupFunction convolve(const GroupFunction& f, const GroupFunction& h) {
  f.check_compatible(h);
  const auto& g = f.group();
  const std::size_t n = f.size();
  std::vector<cd> out(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    cd s = 0.0;
    for (std::size_t y = 0; y < n; ++y) s += f[y] * h[g.subtract_index(x, y)];
    out[x] = g.haar_weight() * s;
  }
  return GroupFunction(g, std::move(out));
}

}  // namespace qha
