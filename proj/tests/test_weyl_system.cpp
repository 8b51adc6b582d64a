#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qha/random.hpp"
#include "qha/weyl_system.hpp"

using namespace qha;

TEST(PhaseSpace, CocycleAndSymmetryExhaustive) {
  for (int n = 2; n <= 5; ++n) {
    const PhaseSpace ps(n);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const PhasePoint x = ps.point(i), y = ps.point(j);
        EXPECT_LT(std::abs(ps.multiplier(x, y) - ps.multiplier(ps.negate(x), ps.negate(y))), 1e-13);
        EXPECT_LT(std::abs(ps.symplectic(x, y) - oracle::sigma(n, x.a, x.b, y.a, y.b)), 1e-13);
        for (std::size_t k = 0; k < ps.size(); ++k) {
          const PhasePoint z = ps.point(k);
          const cd lhs = ps.multiplier(ps.add(x, y), z) * ps.multiplier(x, y);
          const cd rhs = ps.multiplier(x, ps.add(y, z)) * ps.multiplier(y, z);
          EXPECT_LT(std::abs(lhs - rhs), 1e-12);
        }
      }
  }
}

TEST(PhaseSpace, SymplecticPairingIsPerfect) {
  // y -> sigma(., y) must hit each character (a', b') of Z_N x Z_N exactly once.
  for (int n = 2; n <= 6; ++n) {
    const PhaseSpace ps(n);
    const FiniteAbelianGroup g = ps.function_group();
    std::vector<int> hits(ps.size(), 0);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      int found = -1;
      for (std::size_t c = 0; c < ps.size(); ++c) {
        bool same = true;
        for (std::size_t i = 0; i < ps.size() && same; ++i)
          same = std::abs(ps.symplectic(ps.point(i), ps.point(j)) - g.character_value(c, i)) < 1e-12;
        if (same) found = static_cast<int>(c);
      }
      ASSERT_GE(found, 0);
      ++hits[static_cast<std::size_t>(found)];
    }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Weyl, SmallCases) {
  const PhaseSpace p2(2);
  EXPECT_EQ(max_abs(weyl(p2, {0, 0}).matrix() - Matrix::Identity(2, 2)), 0.0);
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  EXPECT_LT(max_abs(weyl(p2, {1, 0}).matrix() - x), 1e-15);
  EXPECT_LT(max_abs(weyl(p2, {0, 1}).matrix() - z), 1e-15);
}

TEST(Weyl, MatchesColumnwiseConstruction) {
  for (int n : {3, 4, 7}) {
    const PhaseSpace ps(n);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const PhasePoint x = ps.point(k);
      EXPECT_LT(max_abs(weyl(ps, x).matrix() - oracle::weyl(n, x.a, x.b)), 1e-13);
    }
  }
}

TEST(Weyl, ProjectiveRelationN3AllPairs) {
  const PhaseSpace ps(3);
  double worst = 0.0;
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) {
      const PhasePoint x = ps.point(i), y = ps.point(j);
      const Matrix lhs = oracle::weyl(3, x.a, x.b) * oracle::weyl(3, y.a, y.b);
      const Matrix rhs = oracle::multiplier(3, x.a, x.b, y.a, y.b) * oracle::weyl(3, (x.a + y.a) % 3, (x.b + y.b) % 3);
      worst = std::max(worst, max_abs((weyl(ps, x) * weyl(ps, y)).matrix() - ps.multiplier(x, y) * weyl(ps, ps.add(x, y)).matrix()));
      worst = std::max(worst, max_abs(lhs - rhs));
    }
  EXPECT_LE(worst, 1e-13);
}

TEST(Weyl, IdentityResidualsSmall) {
  for (int n = 2; n <= 5; ++n)
    for (const auto& r : weyl_identity_residuals(PhaseSpace(n))) EXPECT_LE(r.max_residual, 1e-12) << r.name << " N=" << n;
}

TEST(Parity, BasicProperties) {
  for (int n : {3, 4}) {
    const PhaseSpace ps(n);
    const HilbertOp r = parity_op(ps);
    EXPECT_EQ(max_abs((r * r).matrix() - Matrix::Identity(n, n)), 0.0);
    EXPECT_EQ(max_abs(r.matrix() - r.matrix().adjoint()), 0.0);
    EXPECT_EQ(max_abs(r.matrix() - oracle::parity(n)), 0.0);
  }
  const PhaseSpace p4(4);
  const HilbertOp r = parity_op(p4);
  EXPECT_LE(max_abs((r * weyl(p4, {1, 0}) * r).matrix() - weyl(p4, {-1, 0}).matrix()), 1e-13);
}

TEST(OpTranslate, MatchesConjugationAndComposes) {
  const PhaseSpace ps(5);
  auto rng = sample_rng(11, 0);
  const HilbertOp a = random_operator(5, rng);
  EXPECT_EQ(max_abs_diff(op_translate(ps, a, {0, 0}), a), 0.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const PhasePoint x = ps.point(i);
    EXPECT_LT(max_abs(op_translate(ps, a, x).matrix() - oracle::translate_op(a.matrix(), 5, x.a, x.b)), 1e-12);
    for (std::size_t j = 0; j < ps.size(); j += 3) {
      const PhasePoint y = ps.point(j);
      EXPECT_LT(max_abs_diff(op_translate(ps, op_translate(ps, a, y), x), op_translate(ps, a, ps.add(x, y))), 1e-12);
    }
  }
}

TEST(OpTranslate, PreservesUnitarilyInvariantNorms) {
  const PhaseSpace ps(6);
  auto rng = sample_rng(12, 0);
  const HilbertOp a = random_operator(6, rng);
  const HilbertOp t = op_translate(ps, a, {2, 5});
  EXPECT_NEAR(t.op_norm(), a.op_norm(), 1e-12);
  EXPECT_NEAR(t.trace_norm(), a.trace_norm(), 1e-11);
  EXPECT_NEAR(t.hs_norm(), a.hs_norm(), 1e-12);
  // *-automorphism
  const HilbertOp b = random_operator(6, rng);
  EXPECT_LT(max_abs_diff(op_translate(ps, a * b, {2, 5}), op_translate(ps, a, {2, 5}) * op_translate(ps, b, {2, 5})), 1e-12);
  EXPECT_LT(max_abs_diff(op_translate(ps, a.adjoint(), {2, 5}), t.adjoint()), 1e-13);
}

TEST(OpParity, InvolutionAndConjugation) {
  const PhaseSpace ps(5);
  auto rng = sample_rng(13, 0);
  const HilbertOp a = random_operator(5, rng);
  EXPECT_EQ(max_abs_diff(op_parity(ps, op_parity(ps, a)), a), 0.0);
  const HilbertOp r = parity_op(ps);
  EXPECT_LT(max_abs_diff(op_parity(ps, a), r * a * r), 1e-14);
}

TEST(OpModulate, ZeroIsIdentityAndEvenNRejected) {
  const PhaseSpace p5(5);
  auto rng = sample_rng(14, 0);
  const HilbertOp b = random_operator(5, rng);
  EXPECT_LT(max_abs_diff(op_modulate(p5, b, {0, 0}), b), 1e-14);
  // gamma_xi(B) = U_(-xi/2) B U_(-xi/2) with xi/2 = (N+1)/2 * xi mod N.
  const HilbertOp u = weyl(p5, {-3 * 2, -3 * 4});  // 3 = 1/2 mod 5
  EXPECT_LT(max_abs_diff(op_modulate(p5, b, {2, 4}), u * b * u), 1e-13);
  const PhaseSpace p4(4);
  EXPECT_THROW(op_modulate(p4, HilbertOp::identity(4), {1, 0}), precondition_error);
}

TEST(FourierWeyl, IdentityAndRankOne) {
  const PhaseSpace ps(4);
  const GroupFunction fi = fourier_weyl(ps, HilbertOp::identity(4));
  for (std::size_t k = 0; k < ps.size(); ++k) EXPECT_LT(std::abs(fi[k] - (k == 0 ? 4.0 : 0.0)), 1e-13);
  auto rng = sample_rng(15, 0);
  const Vector phi = random_unit_vector(4, rng), psi = random_unit_vector(4, rng);
  const GroupFunction fr = fourier_weyl(ps, rank_one(phi, psi));
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Vector uphi = weyl(ps, ps.point(k)).matrix() * phi;
    EXPECT_LT(std::abs(fr[k] - inner(uphi, psi)), 1e-12);
  }
  const auto ref = oracle::fourier_weyl(rank_one(phi, psi).matrix(), 4);
  EXPECT_LT(oracle::max_diff(fr.values(), ref), 1e-12);
}

TEST(FourierWeyl, IsometryAndRoundTrip) {
  const PhaseSpace ps(6);
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto rng = sample_rng(16, s);
    const HilbertOp a = random_operator(6, rng);
    const GroupFunction f = fourier_weyl(ps, a);
    EXPECT_NEAR(f.norm2(), a.hs_norm(), 1e-10);
    EXPECT_LT(max_abs_diff(inverse_fourier_weyl(ps, f), a), 1e-10);
  }
}

TEST(FourierWeyl, WeylOperatorsFormOrthonormalBasis) {
  const int n = 5;
  const PhaseSpace ps(n);
  Matrix basis(n * n, n * n);
  for (std::size_t k = 0; k < ps.size(); ++k)
    basis.col(static_cast<Eigen::Index>(k)) = weyl(ps, ps.point(k)).matrix().reshaped() / std::sqrt(static_cast<double>(n));
  EXPECT_LT(max_abs(basis.adjoint() * basis - Matrix::Identity(n * n, n * n)), 1e-10);
}

TEST(HilbertOp, RejectsNonSquareAndMismatch) {
  EXPECT_THROW(HilbertOp(Matrix::Zero(2, 3)), std::exception);
  EXPECT_THROW(HilbertOp::identity(2) + HilbertOp::identity(3), structural_error);
}
