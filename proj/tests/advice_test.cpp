#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>

#include "ofd/advice.hpp"
#include "ofd/evaluation.hpp"
#include "ofd/instances.hpp"

using namespace ofd;

namespace {

Integer tape_value(const AdviceTape& t) {
  Integer v = 0;
  for (bool b : t.bits) v = v * 2 + (b ? 1 : 0);
  return v;
}

// All k-permutations of {0..n-1} in lexicographic order.
void for_each_k_permutation(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> cur;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == k) {
      visit(cur);
      return;
    }
    for (int a = 0; a < n; ++a)
      if (!used[a]) {
        used[a] = true;
        cur.push_back(a);
        rec();
        cur.pop_back();
        used[a] = false;
      }
  };
  rec();
}

}  // namespace

TEST(Bits, CeilLog2) {
  EXPECT_EQ(ceil_log2(Integer(1)), 0u);
  EXPECT_EQ(ceil_log2(Integer(2)), 1u);
  EXPECT_EQ(ceil_log2(Integer(6)), 3u);
  EXPECT_EQ(ceil_log2(Integer(8)), 3u);
  EXPECT_EQ(ceil_log2(Integer(9)), 4u);
  EXPECT_EQ(falling_factorial(5, 2), 20);
  EXPECT_EQ(falling_factorial(5, 0), 1);
}

TEST(EncodeAdvice, ReversePermutationOfThree) {
  const auto tape = encode_advice(std::vector<int>{2, 1, 0}, 3);
  EXPECT_EQ(tape.bits.size(), 3u);
  EXPECT_EQ(tape_value(tape), 5);
  EXPECT_EQ(tape.declared_bit_budget, 3u);
  EXPECT_EQ(tape.factorial_bits, 3u);
  EXPECT_EQ(tape.hex(), "a");
}

TEST(EncodeAdvice, EmptyTape) {
  const auto tape = encode_advice(std::vector<int>{}, 4);
  EXPECT_TRUE(tape.bits.empty());
  EXPECT_EQ(tape.k(), 0u);
  EXPECT_EQ(decode_advice(tape, 4, 0), std::vector<int>{});
}

TEST(EncodeAdvice, RejectsBadInput) {
  EXPECT_THROW(encode_advice(std::vector<int>{0, 0}, 3), std::invalid_argument);
  EXPECT_THROW(encode_advice(std::vector<int>{3}, 3), std::invalid_argument);
  EXPECT_THROW(encode_advice(std::vector<int>{0, 1, 2}, 2), std::invalid_argument);
}

TEST(EncodeAdvice, ExhaustiveRoundTripUpToEight) {
  for (int n = 1; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      Integer expected = 0;
      for_each_k_permutation(n, k, [&](const std::vector<int>& agents) {
        const auto tape = encode_advice(agents, n);
        ASSERT_EQ(tape.bits.size(), ceil_log2(falling_factorial(n, k)));
        ASSERT_EQ(tape_value(tape), expected) << "rank follows lexicographic order";
        ASSERT_EQ(decode_advice(tape, n, k), agents);
        expected += 1;
      });
    }
}

TEST(EncodeAdvice, FullTapeLengthIsLogFactorial) {
  for (int n = 1; n <= 8; ++n) {
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    EXPECT_EQ(encode_advice(id, n).bits.size(), ceil_log2(falling_factorial(n, n)));
  }
}

TEST(DecodeAdvice, RejectsOutOfRangeCodes) {
  AdviceTape tape;
  tape.bits = {true, true, true};  // 7 >= 3! = 6
  EXPECT_THROW(decode_advice(tape, 3, 3), std::out_of_range);
  tape.bits = {true};
  EXPECT_THROW(decode_advice(tape, 3, 3), std::invalid_argument);
}

TEST(Tape, MaskAndRepeatLayoutsRoundTrip) {
  const std::vector<Advice> advice{{1, 2}, {3, 2}, {4, 0}};
  for (bool prefix : {false}) {
    const TapeLayout layout{prefix, false};
    const auto tape = encode_advice(advice, 3, 6, layout);
    EXPECT_EQ(tape.bits.size(), 6u + ceil_log2(Integer(27)));
    const auto back = decode_tape(tape.bits, 3, 6, layout);
    EXPECT_EQ(back.decoded, advice);
    const auto hex = tape_from_hex(tape.hex(), 3, 6, layout);
    EXPECT_EQ(hex.decoded, advice);
  }
  const std::vector<Advice> distinct{{0, 1}, {2, 0}};
  const auto tape = encode_advice(distinct, 3, 4, {false, true});
  EXPECT_EQ(decode_tape(tape.bits, 3, 4, {false, true}).decoded, distinct);
  EXPECT_THROW(encode_advice(std::vector<Advice>{{2, 0}, {1, 1}}, 3, 4, {false, true}), std::invalid_argument);
  EXPECT_THROW(encode_advice(std::vector<Advice>{{1, 0}}, 3, 4, {true, true}), std::invalid_argument);
}

TEST(Tape, HexRoundTripPrefix) {
  const auto tape = encode_advice(std::vector<int>{4, 0, 3}, 6);
  const auto back = tape_from_hex(tape.hex(), 6, 6, {true, true}, 3);
  EXPECT_EQ(back.decoded, tape.decoded);
  EXPECT_THROW(parse_hex_bits("g", 4), std::invalid_argument);
  EXPECT_THROW(parse_hex_bits("f", 3), std::invalid_argument);  // nonzero padding
  EXPECT_THROW(parse_hex_bits("", 3), std::invalid_argument);
}

TEST(OracleEs, UpperTriangularUniqueMatching) {
  const auto tape = oracle_es(upper_triangular(3), 3);
  EXPECT_EQ(tape.decoded, (std::vector<Advice>{{0, 2}, {1, 1}, {2, 0}}));
  EXPECT_EQ(oracle_es(upper_triangular(3), 0).k(), 0u);
  EXPECT_THROW(oracle_es(upper_triangular(3), 4), std::invalid_argument);
}

TEST(OracleEs, NeedsPerfectAllocation) {
  const auto inst = Instance::from_rows({{1, 1, 1}, {1, 0, 0}, {1, 0, 0}});
  EXPECT_THROW(oracle_es(inst, 1), std::domain_error);
}

TEST(OracleEs, NearlyFullAdviceMakesRankingOptimal) {
  for (int n = 2; n <= 6; ++n) {
    const auto inst = upper_triangular(n);
    const auto tape = oracle_es(inst, n - 1);
    const auto r = evaluate_exact_compressed(inst, BidProfile::sincere(inst), MechanismKind::Ranking, &tape);
    EXPECT_EQ(r.welfare.es, n);
  }
}

TEST(OracleEw, ExampleFourAdvisesFirstAgent) {
  const auto tape = oracle_ew(example_fixture(4), 1, UtilityRegime::General);
  EXPECT_EQ(tape.decoded, (std::vector<Advice>{{0, 0}}));
  EXPECT_EQ(oracle_ew(example_fixture(4), 0, UtilityRegime::General).k(), 0u);
}

TEST(OracleEw, BinaryDistinctLikers) {
  const auto inst = upper_triangular(3);
  const auto tape = oracle_ew(inst, 2, UtilityRegime::Binary);
  ASSERT_EQ(tape.k(), 2u);
  EXPECT_NE(tape.decoded[0].agent, tape.decoded[1].agent);
  for (const auto& a : tape.decoded) EXPECT_EQ(inst.utility(a.agent, inst.item_at(a.round)), 1);
  EXPECT_THROW(oracle_ew(example_fixture(4), 1, UtilityRegime::Binary), std::invalid_argument);
}

TEST(OracleEw, BinaryMoreItemsSkipsRepeatedOwners) {
  // The only egalitarian-optimal allocation gives o3, o4 to a1 and o1, o2 to a2.
  const auto inst = Instance::from_rows({{1, 1, 1, 1}, {1, 1, 0, 0}});
  const auto tape = oracle_ew(inst, 2, UtilityRegime::Binary);
  EXPECT_EQ(tape.decoded, (std::vector<Advice>{{0, 1}, {2, 0}}));
  EXPECT_FALSE(tape.layout.prefix_rounds);
  const auto r = evaluate_exact_compressed(inst, BidProfile::sincere(inst), MechanismKind::Like, &tape);
  EXPECT_GE(r.welfare.ew, Rational(1));
}

TEST(OracleUw, TopItemsToTheirBestAgent) {
  const auto inst = example_fixture(3, 100);
  const auto tape = oracle_uw(inst, 1);
  EXPECT_EQ(tape.decoded, (std::vector<Advice>{{1, 1}}));
  const auto r = evaluate_exact_compressed(inst, BidProfile::sincere(inst), MechanismKind::BalancedLike, &tape);
  EXPECT_EQ(r.welfare.uw, 101);
}

TEST(OraclePolicy, FillsAdvisedAgentCount) {
  OraclePolicy p{Objective::ES, UtilityRegime::Binary, 2, 0};
  const auto tape = oracle_tape(upper_triangular(4), p);
  EXPECT_EQ(p.l, 2);
  EXPECT_EQ(tape.advised_agents(), 2);
  OraclePolicy uw{Objective::UW, UtilityRegime::General, 2, 0};
  oracle_tape(Instance::from_rows({{4, 4, 1}, {1, 1, 4}}), uw);
  EXPECT_EQ(uw.l, 1);
}

TEST(FullAdvice, EveryAdvisedMechanismIsOptimalOnPerfectBinaryInstances) {
  for (int n = 1; n <= 4; ++n) {
    for_each_binary(n, n, [&](const Instance& inst) {
      if (matched_count(maximum_matching(positive_edges(inst.utilities()))) != n) return;
      const auto tape = oracle_es(inst, n);
      EXPECT_EQ(tape.bits.size(), ceil_log2(falling_factorial(n, n)));
      for (auto kind : kBaseMechanisms) {
        const auto r = evaluate_exact_compressed(inst, BidProfile::sincere(inst), kind, &tape);
        EXPECT_EQ(r.welfare.es, n);
        EXPECT_EQ(r.welfare.ew, offline_ew(inst).value);
      }
    }, 16);
  }
}
