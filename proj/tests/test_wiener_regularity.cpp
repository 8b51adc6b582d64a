#include <gtest/gtest.h>

#include "qha/random.hpp"
#include "qha/wiener_regularity.hpp"

using namespace qha;

TEST(RegularFn, DeltaIsRegular) {
  const FiniteAbelianGroup z8({8});
  const auto rep = regular_fn(GroupFunction::delta(z8, 0));
  EXPECT_TRUE(rep.is_regular);
  EXPECT_NEAR(rep.min_abs_transform, 1.0, 1e-14);
  EXPECT_EQ(rep.translate_span_rank, 8u);
  EXPECT_TRUE(rep.agreement);
}

TEST(RegularFn, ConstantIsNotRegular) {
  const FiniteAbelianGroup z4({4});
  const auto rep = regular_fn(GroupFunction::constant(z4, 1.0));
  EXPECT_FALSE(rep.is_regular);
  EXPECT_EQ(rep.zero_set, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(rep.translate_span_rank, 1u);
  EXPECT_TRUE(rep.agreement);
}

TEST(RegularFn, RandomFunctionIsRegular) {
  const FiniteAbelianGroup g({3, 4});
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto rng = sample_rng(41, s);
    const auto rep = regular_fn(random_function(g, rng));
    EXPECT_TRUE(rep.is_regular);
    EXPECT_EQ(rep.translate_span_rank, 12u);
  }
}

TEST(RegularFn, RankEqualsCardinalityMinusZeroSet) {
  const FiniteAbelianGroup z12({12});
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto rng = sample_rng(42, s);
    GroupFunction hat = random_function(z12.dual(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, 11);
    for (int k = 0; k < 4; ++k) hat[pick(rng)] = 0.0;
    const GroupFunction g = fourier(hat);  // inverse up to parity; zeros move to -chi
    const auto rep = regular_fn(g);
    EXPECT_EQ(rep.translate_span_rank, 12u - rep.zero_set.size());
    EXPECT_TRUE(rep.agreement);
  }
}

TEST(RegularSetFn, IntersectionOfZeroSets) {
  const FiniteAbelianGroup z2({2});
  const GroupFunction one = GroupFunction::constant(z2, 1.0);
  const GroupFunction diff = GroupFunction::delta(z2, 0) - GroupFunction::delta(z2, 1);
  EXPECT_FALSE(regular_fn(one).is_regular);
  EXPECT_FALSE(regular_fn(diff).is_regular);
  const auto rep = regular_set_fn({one, diff});
  EXPECT_TRUE(rep.is_regular);
  EXPECT_EQ(rep.translate_span_rank, 2u);
  EXPECT_FALSE(regular_set_fn({GroupFunction::constant(FiniteAbelianGroup({4}), 1.0)}).is_regular);
  EXPECT_TRUE(regular_set_fn({GroupFunction::delta(FiniteAbelianGroup({4}), 0)}).is_regular);
  EXPECT_THROW(regular_set_fn({}), precondition_error);
}

TEST(RegularSetFn, ModulatesOfAWindowAreRegular) {
  // If the window's transform is nonzero somewhere, its modulates cover every frequency.
  const FiniteAbelianGroup g({8});
  GroupFunction hat = GroupFunction::zeros(g.dual());
  hat[3] = 1.0;
  const GroupFunction phi = fourier(hat);
  std::vector<GroupFunction> mods;
  for (int m = 0; m < 8; ++m) mods.push_back(modulate(phi, Character{{m}}));
  EXPECT_FALSE(regular_fn(phi).is_regular);
  EXPECT_TRUE(regular_set_fn(mods).is_regular);
}

TEST(RegularOpSet, IdentityAndDiagonalProjection) {
  const PhaseSpace ps(4);
  const auto ri = regular_op_set(ps, {HilbertOp::identity(4)});
  EXPECT_FALSE(ri.is_regular);
  EXPECT_EQ(ri.zero_set.size(), 15u);
  EXPECT_EQ(ri.translate_span_rank, 1u);

  Vector e0 = Vector::Zero(4);
  e0[0] = 1.0;
  const auto rd = regular_op_set(ps, {rank_one(e0, e0)});
  EXPECT_FALSE(rd.is_regular);
  for (std::size_t k : rd.zero_set) EXPECT_NE(ps.point(k).a, 0);
  EXPECT_EQ(rd.zero_set.size(), 12u);
  EXPECT_EQ(rd.translate_span_rank, 4u);
  EXPECT_TRUE(rd.agreement);
}

TEST(RegularOpSet, RandomOperatorIsRegular) {
  const PhaseSpace ps(4);
  auto rng = sample_rng(43, 0);
  const auto rep = regular_op_set(ps, {random_operator(4, rng)});
  EXPECT_TRUE(rep.is_regular);
  EXPECT_EQ(rep.translate_span_rank, 16u);
  EXPECT_THROW(regular_op_set(ps, {}), precondition_error);
}

TEST(RegularOpSet, PredicatesAgreeOnAuditAndDegenerateSet) {
  for (int n = 2; n <= 4; ++n) {
    EXPECT_GE(degenerate_operator_set(PhaseSpace(n)).size(), 10u);
    const auto cases = wiener_audit(n, 40, 99, true);
    std::size_t irregular = 0;
    for (const auto& c : cases) {
      EXPECT_TRUE(c.report.agreement) << c.name << " N=" << n;
      if (!c.report.is_regular) ++irregular;
    }
    EXPECT_GT(irregular, 10u);
  }
}

TEST(RegularOpSet, NearThresholdProducesWarning) {
  const PhaseSpace ps(3);
  auto rng = sample_rng(44, 0);
  GroupFunction fw = fourier_weyl(ps, random_operator(3, rng));
  double scale = 0.0;
  for (const auto& v : fw.values()) scale = std::max(scale, std::abs(v));
  fw[4] = 3e-8 * scale;  // within a decade above the cut
  const auto rep = regular_op_set(ps, {inverse_fourier_weyl(ps, fw)});
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(CorrespondingSpace, FullZeroAndConstants) {
  const PhaseSpace ps(3);
  const FiniteAbelianGroup g = ps.function_group();
  std::vector<GroupFunction> all;
  for (std::size_t k = 0; k < ps.size(); ++k) all.push_back(GroupFunction::delta(g, k));
  EXPECT_EQ(corresponding_space(ps, all).size(), 9u);
  EXPECT_TRUE(corresponding_space(ps, {GroupFunction::zeros(g)}).empty());
  EXPECT_TRUE(corresponding_space(ps, {}).empty());

  const auto consts = corresponding_space(ps, {GroupFunction::constant(g, 1.0)});
  ASSERT_EQ(consts.size(), 1u);
  EXPECT_LT(distance_to_span(HilbertOp::identity(3), consts), 1e-12);
}

TEST(CorrespondingSpace, IdempotentAndMonotone) {
  const PhaseSpace ps(3);
  const FiniteAbelianGroup g = ps.function_group();
  auto rng = sample_rng(45, 0);
  GroupFunction hat = random_function(g, rng);
  for (std::size_t k = 0; k < 5; ++k) hat[k] = 0.0;
  const GroupFunction f = fourier(hat);
  const auto one = corresponding_space(ps, {f});
  const auto twice = corresponding_space(ps, {f, f});
  EXPECT_EQ(one.size(), twice.size());
  const auto more = corresponding_space(ps, {f, GroupFunction::delta(g, 0)});
  EXPECT_GE(more.size(), one.size());
  for (const auto& e : one) EXPECT_LT(distance_to_span(e, more), 1e-10);
}
