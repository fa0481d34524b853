#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "brute_force.hpp"
#include "ofd/instances.hpp"
#include "ofd/offline.hpp"

using namespace ofd;

namespace {

AssignmentMatrix random_bistochastic(int n, std::mt19937_64& rng, int terms) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<long> w(terms);
  long total = 0;
  for (auto& x : w) total += x = 1 + static_cast<long>(rng() % 9);
  AssignmentMatrix p(n, n, Rational(0));
  for (int t = 0; t < terms; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int j = 0; j < n; ++j) p(perm[j], j) += Rational(w[t], total);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j).canonicalize();
  return p;
}

}  // namespace

TEST(Matching, MaximumSize) {
  const auto inst = Instance::from_rows({{1, 1, 1}, {1, 0, 0}, {1, 0, 0}});
  EXPECT_EQ(matched_count(maximum_matching(positive_edges(inst.utilities()))), 2);
  EXPECT_EQ(offline_es(inst).size, 2);
  EXPECT_EQ(offline_es(upper_triangular(5)).size, 5);
}

TEST(Matching, LexicographicInArrivalOrder) {
  const auto inst = upper_triangular(3);
  EXPECT_EQ(lex_min_maximum_matching(positive_edges(inst.utilities()), inst.order()), (std::vector<int>{2, 1, 0}));
  const EdgeMatrix all(2, 2, 1);
  EXPECT_EQ(lex_min_maximum_matching(all, {0, 1}), (std::vector<int>{0, 1}));
  EXPECT_EQ(lex_min_maximum_matching(all, {1, 0}), (std::vector<int>{1, 0}));
}

TEST(Matching, LexMinAgreesWithBruteForce) {
  // Smallest owner vector (read in item order) among maximum matchings.
  for_each_binary(3, 3, [](const Instance& inst) {
    const auto edges = positive_edges(inst.utilities());
    const int best = matched_count(maximum_matching(edges));
    std::vector<int> expected;
    bool found = false;
    bf::for_each_allocation(4, 3, [&](const std::vector<int>& raw) {
      std::vector<int> owner(3);
      std::vector<bool> used(3, false);
      for (int j = 0; j < 3; ++j) {
        owner[j] = raw[j] == 3 ? kDiscarded : raw[j];
        if (owner[j] == kDiscarded) continue;
        if (!edges(owner[j], j) || used[owner[j]]) return;
        used[owner[j]] = true;
      }
      if (matched_count(owner) != best) return;
      // Discarded sorts after every agent.
      auto key = [](const std::vector<int>& o) {
        std::vector<int> k;
        for (int x : o) k.push_back(x == kDiscarded ? 99 : x);
        return k;
      };
      if (!found || key(owner) < key(expected)) expected = owner;
      found = true;
    });
    EXPECT_EQ(lex_min_maximum_matching(edges, inst.order()), expected);
  });
}

TEST(OfflineUw, SumOfColumnMaxima) {
  EXPECT_EQ(offline_uw(example_fixture(3, 100)), 101);
  EXPECT_EQ(offline_uw(example_fixture(5)), 4);
}

TEST(OfflineEw, ExamplesAndTriangular) {
  EXPECT_EQ(offline_ew(example_fixture(4)).value, 1);
  EXPECT_EQ(offline_ew(example_fixture(4)).witness.owner, (std::vector<int>{0, 1}));
  EXPECT_EQ(offline_ew(example_fixture(5)).value, 2);
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(offline_ew(upper_triangular(n)).value, 1);
}

TEST(OfflineEw, Errors) {
  EXPECT_THROW(offline_ew(Instance::from_rows({{1, 1, 1}, {1, 0, 0}, {1, 0, 0}})), std::domain_error);
  EXPECT_THROW(offline_ew(Instance::from_rows({{1}, {1}})), std::invalid_argument);
  EXPECT_THROW(max_min_allocation_brute_force(random_instance(7, 8, UtilityRegime::General, 1)), std::length_error);
  EXPECT_THROW(offline_ew(random_instance(3, 9, UtilityRegime::General, 1)), std::length_error);
}

TEST(OfflineEw, BottleneckMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto inst = random_instance(1 + static_cast<int>(seed % 4), 1 + static_cast<int>(seed % 4),
                                      UtilityRegime::General, seed);
    const auto brute = bf::offline(inst);
    if (brute.ew == 0) continue;  // no perfect allocation
    const auto ew = offline_ew(inst);
    EXPECT_EQ(ew.value, brute.ew);
    const auto values = bundle_values(inst, ew.witness);
    EXPECT_EQ(*std::min_element(values.begin(), values.end()), ew.value);
  }
}

TEST(OfflineEw, BinaryMaxMinMatchesBruteForce) {
  for (int n = 1; n <= 3; ++n)
    for (int m = n + 1; m <= 4; ++m)
      for_each_binary(n, m, [](const Instance& inst) {
        const auto got = binary_max_min(inst);
        EXPECT_EQ(got.value, bf::offline(inst).ew);
        const auto values = bundle_values(inst, got.witness);
        EXPECT_EQ(*std::min_element(values.begin(), values.end()), got.value);
      });
}

TEST(OfflineEw, GeneralMoreItemsMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = random_instance(2 + static_cast<int>(seed % 2), 4, UtilityRegime::General, seed);
    EXPECT_EQ(offline_ew(inst).value, bf::offline(inst).ew);
  }
}

TEST(Birkhoff, IdentityAndUniform) {
  AssignmentMatrix id(3, 3, Rational(0));
  for (int i = 0; i < 3; ++i) id(i, i) = 1;
  const auto t = birkhoff_decompose(id);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].weight, 1);
  const AssignmentMatrix uniform(3, 3, Rational(1, 3));
  const auto u = birkhoff_decompose(uniform);
  EXPECT_EQ(recompose(u, 3), uniform);
}

TEST(Birkhoff, RejectsNonBistochastic) {
  AssignmentMatrix p(2, 2, Rational(1, 2));
  p(0, 0) = 1;
  EXPECT_FALSE(is_bistochastic(p));
  EXPECT_THROW(birkhoff_decompose(p), std::invalid_argument);
  EXPECT_THROW(birkhoff_decompose(AssignmentMatrix(2, 3, Rational(0))), std::invalid_argument);
}

TEST(Birkhoff, RandomConvexCombinations) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    const auto p = random_bistochastic(n, rng, 1 + static_cast<int>(rng() % 12));
    ASSERT_TRUE(is_bistochastic(p));
    const auto terms = birkhoff_decompose(p);
    EXPECT_EQ(recompose(terms, n), p);
    EXPECT_LE(static_cast<int>(terms.size()), n * n - 2 * n + 2);
    Rational total = 0;
    for (const auto& t : terms) {
      EXPECT_GT(t.weight, 0);
      total += t.weight;
    }
    EXPECT_EQ(total, 1);
  }
}

TEST(Birkhoff, AssignmentMatrixOfAMechanism) {
  // Like on the all-ones 3x3 instance: every entry 1/3.
  const AssignmentMatrix p(3, 3, Rational(1, 3));
  const auto terms = birkhoff_decompose(p);
  EXPECT_LE(terms.size(), 5u);
  EXPECT_EQ(recompose(terms, 3), p);
}
