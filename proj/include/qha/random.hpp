#pragma once

// Seeded generators for the randomized audits. Every sample gets its own engine
// keyed by (seed, sample index).

#include <cstdint>
#include <random>
#include <vector>

#include "qha/core_groups.hpp"
#include "qha/hilbert_op.hpp"
#include "qha/linalg.hpp"

namespace qha {

using Rng = std::mt19937_64;

inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline cd random_complex(Rng& rng) {
  std::normal_distribution<double> gauss;
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {re, im};
}

inline Vector random_vector(int n, Rng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = random_complex(rng);
  return v;
}

inline Vector random_unit_vector(int n, Rng& rng) { return random_vector(n, rng).normalized(); }

inline Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
  return m;
}

inline GroupFunction random_function(const FiniteAbelianGroup& g, Rng& rng) {
  std::vector<cd> v(g.cardinality());
  for (auto& x : v) x = random_complex(rng);
  return GroupFunction(g, std::move(v));
}

/// Nonnegative real function with entries uniform in [0, 1).
inline GroupFunction random_nonnegative_function(const FiniteAbelianGroup& g, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cd> v(g.cardinality());
  for (auto& x : v) x = u(rng);
  return GroupFunction(g, std::move(v));
}

inline HilbertOp random_operator(int n, Rng& rng) { return HilbertOp(random_matrix(n, n, rng)); }

}  // namespace qha
