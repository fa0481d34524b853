#include <gtest/gtest.h>

#include "ofd/core.hpp"
#include "ofd/instances.hpp"

using namespace ofd;

namespace {

Allocation alloc(std::vector<int> owner) { return Allocation{std::move(owner)}; }

}  // namespace

TEST(Rational, ParsesAndCanonicalizes) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_EQ(to_string(parse_rational("10/5")), "2");
  EXPECT_EQ(to_fraction_string(Rational(3)), "3/1");
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(make_rational(1, 0), std::invalid_argument);
}

TEST(Rational, ArithmeticIsExact) {
  Rational sum = 0;
  for (int i = 0; i < 10; ++i) sum += Rational(1, 10);
  EXPECT_EQ(sum, 1);
  const Rational x = make_rational(4, -6);
  EXPECT_EQ(x.get_num(), -2);
  EXPECT_EQ(x.get_den(), 3);
}

TEST(Instance, ValidatesAssumptions) {
  EXPECT_THROW(Instance::from_rows({{1, 0}, {0, 0}}), std::invalid_argument);  // agent values nothing
  EXPECT_THROW(Instance::from_rows({{1, 0}, {1, 0}}), std::invalid_argument);  // item valued by nobody
  EXPECT_THROW(Instance::from_rows({{1, -1}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(Instance::from_rows({{1, 1}}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(Instance::from_rows({{1, 1}}, {0}), std::invalid_argument);
  EXPECT_THROW(Instance(Matrix<Rational>(0, 0)), std::invalid_argument);
  const auto inst = Instance::from_rows({{1, 2}, {3, 0}}, {1, 0}, "x");
  EXPECT_EQ(inst.agents(), 2);
  EXPECT_EQ(inst.items(), 2);
  EXPECT_EQ(inst.item_at(0), 1);
  EXPECT_EQ(inst.name(), "x");
  EXPECT_FALSE(inst.is_binary());
  EXPECT_TRUE(upper_triangular(3).is_binary());
}

TEST(BidProfile, ChecksShapeAndSign) {
  const auto inst = example_fixture(2);
  auto bids = BidProfile::sincere(inst);
  EXPECT_NO_THROW(bids.check(inst));
  bids.bids(0, 0) = -1;
  EXPECT_THROW(bids.check(inst), std::invalid_argument);
  EXPECT_THROW(BidProfile{Matrix<Rational>(1, 2, Rational(1))}.check(inst), std::invalid_argument);
}

TEST(MatchingSize, CountsRecipients) {
  EXPECT_EQ(matching_size(alloc({0, 0, 0}), 3), 1);
  EXPECT_EQ(matching_size(alloc({0, 1, 2}), 3), 3);
  EXPECT_EQ(matching_size(alloc({1, kDiscarded}), 2), 1);
  EXPECT_THROW(matching_size(alloc({5}), 2), std::out_of_range);
}

TEST(AllocationDistribution, ValidatesSupport) {
  using E = AllocationDistribution::Entry;
  EXPECT_THROW(AllocationDistribution({E{alloc({0}), Rational(1, 2)}}), std::invalid_argument);
  EXPECT_THROW(AllocationDistribution({E{alloc({0}), Rational(1, 2)}, E{alloc({0}), Rational(1, 2)}}),
               std::invalid_argument);
  EXPECT_THROW(AllocationDistribution({E{alloc({0}), Rational(0)}, E{alloc({1}), Rational(1)}}),
               std::invalid_argument);
  EXPECT_THROW(AllocationDistribution({E{alloc({0}), Rational(3, 2)}, E{alloc({1}), Rational(-1, 2)}}),
               std::invalid_argument);
  const auto d = AllocationDistribution::from_weights({{alloc({0}), Rational(1, 3)}, {alloc({1}), Rational(2, 3)},
                                                       {alloc({kDiscarded}), Rational(0)}});
  EXPECT_EQ(d.size(), 2u);
}

TEST(Welfare, ExampleFourPointMassOnFirstAgent) {
  const auto inst = example_fixture(4);
  const auto r = welfare_of_distribution(inst, AllocationDistribution::point(alloc({0, 0})));
  EXPECT_EQ(r.ew, 0);
  EXPECT_EQ(r.uw, 4);
  EXPECT_EQ(r.es, 1);
}

TEST(Welfare, PerfectBinaryAllocation) {
  const auto inst = Instance::from_rows({{1, 0}, {0, 1}});
  const auto r = welfare_of_distribution(inst, AllocationDistribution::point(alloc({0, 1})));
  EXPECT_EQ(r.es, 2);
  EXPECT_EQ(r.uw, 2);
  EXPECT_EQ(r.ew, 1);
  EXPECT_EQ(r.per_agent, (std::vector<Rational>{1, 1}));
}

TEST(Welfare, ExampleTwoUnderLikeByHand) {
  // Like: o1 is liked by both agents, o2 only by a2.
  const auto inst = example_fixture(2);
  const auto d = AllocationDistribution::from_weights({{alloc({0, 1}), Rational(1, 2)}, {alloc({1, 1}), Rational(1, 2)}});
  EXPECT_EQ(welfare_of_distribution(inst, d).es, Rational(3, 2));
  const auto p = assignment_matrix(d, inst);
  EXPECT_EQ(p, Matrix<Rational>::from_rows({{Rational(1, 2), Rational(0)}, {Rational(1, 2), Rational(1)}}));
}

TEST(AssignmentMatrix, PointMassIsPermutation) {
  const auto inst = upper_triangular(3);
  const auto p = assignment_matrix(AllocationDistribution::point(alloc({2, 1, 0})), inst);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(p(i, j), (i + j == 2) ? 1 : 0);
}

TEST(AssignmentMatrix, RejectsWrongLength) {
  const auto inst = upper_triangular(2);
  EXPECT_THROW(assignment_matrix(AllocationDistribution::point(alloc({0})), inst), std::invalid_argument);
}

TEST(Ratio, Conventions) {
  EXPECT_TRUE(ratio(Objective::EW, 1, 0).infinite());
  EXPECT_EQ(ratio(Objective::EW, 1, 0).ratio_string(), "inf");
  EXPECT_EQ(*ratio(Objective::ES, 2, 2).ratio, 1);
  const auto r = ratio(Objective::UW, 101, 2);
  EXPECT_EQ(*r.ratio, Rational(101, 2));
  EXPECT_EQ(r.reciprocal(), Rational(2, 101));
  EXPECT_EQ(r.additive_slack, 0);
  EXPECT_THROW(ratio(Objective::UW, -1, 2), std::invalid_argument);
}

TEST(Objective, ParsesNames) {
  EXPECT_EQ(parse_objective("ES"), Objective::ES);
  EXPECT_EQ(parse_objective("uw"), Objective::UW);
  EXPECT_STREQ(to_string(Objective::EW), "EW");
  EXPECT_THROW(parse_objective("NW"), std::invalid_argument);
}
