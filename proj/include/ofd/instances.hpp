#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ofd/advice.hpp"
#include "ofd/core.hpp"

namespace ofd {

namespace detail {

inline Instance binary_instance(int n, int m, const std::function<bool(int, int)>& likes, std::string name) {
  Matrix<Rational> u(n, m, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (likes(i, j)) u(i, j) = 1;
  return Instance(std::move(u), {}, std::move(name));
}

}  // namespace detail

/// Agent i (0-based) likes items 0..n-1-i.
inline Instance upper_triangular(int n) {
  if (n < 1) throw std::invalid_argument("upper_triangular needs n >= 1");
  return detail::binary_instance(n, n, [n](int i, int j) { return j <= n - 1 - i; },
                                 "upper-triangular-" + std::to_string(n));
}

/// Agent i (0-based) likes items 0..i.
inline Instance lower_triangular(int n) {
  if (n < 1) throw std::invalid_argument("lower_triangular needs n >= 1");
  return detail::binary_instance(n, n, [](int i, int j) { return j <= i; }, "lower-triangular-" + std::to_string(n));
}

/// Fixed realization of the adversary against Like: the first n/2 items are
/// liked by everyone, item n/2 + t is liked only by agent t.
inline Instance like_adversary(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("like_adversary needs an even n >= 2");
  const int half = n / 2;
  return detail::binary_instance(n, n, [half](int i, int j) { return j < half || j - half == i; },
                                 "like-adversary-" + std::to_string(n));
}

/// Agents the adaptive adversary targets with the last n/2 items: every agent
/// already holding an item, then the lowest-index empty-handed agents.
inline std::vector<int> adversary_targets(int n, const std::vector<int>& counts) {
  std::vector<int> targets;
  for (int i = 0; i < n; ++i)
    if (counts[i] > 0) targets.push_back(i);
  for (int i = 0; i < n && static_cast<int>(targets.size()) < n / 2; ++i)
    if (counts[i] == 0) targets.push_back(i);
  if (static_cast<int>(targets.size()) != n / 2) throw std::logic_error("more than n/2 agents served by n/2 items");
  std::sort(targets.begin(), targets.end());
  return targets;
}

/// The instance the adaptive adversary commits to once the first n/2 items
/// have been placed: item n/2 + t is liked only by targets[t].
inline Instance like_adversary_completion(int n, const std::vector<int>& targets) {
  if (n < 2 || n % 2 != 0 || static_cast<int>(targets.size()) != n / 2)
    throw std::invalid_argument("completion needs even n and n/2 targets");
  const int half = n / 2;
  return detail::binary_instance(n, n, [&](int i, int j) { return j < half || targets[j - half] == i; },
                                 "like-adversary-adaptive-" + std::to_string(n));
}

/// Everyone values every item at 1, except agent 0 who values each at 2.
inline Instance maximum_like_adversary(int n) {
  if (n < 1) throw std::invalid_argument("maximum_like_adversary needs n >= 1");
  Matrix<Rational> u(n, n, Rational(1));
  for (int j = 0; j < n; ++j) u(0, j) = 2;
  return Instance(std::move(u), {}, "maximum-like-adversary-" + std::to_string(n));
}

/// Small worked instances. Example 1 is upper_triangular(n); Example 3 takes
/// the large utility u.
inline Instance example_fixture(int id, long param = 0) {
  switch (id) {
    case 1: return upper_triangular(param > 0 ? static_cast<int>(param) : 3);
    case 2: return Instance::from_rows({{2, 0}, {1, 2}}, {}, "example-2");
    case 3: {
      const long u = param > 0 ? param : 100;
      return Instance::from_rows({{0, 1}, {1, u}}, {}, "example-3");
    }
    case 4: return Instance::from_rows({{2, 2}, {1, 1}}, {}, "example-4");
    case 5: return Instance::from_rows({{2, 1}, {1, 2}}, {}, "example-5");
    default: throw std::invalid_argument("unknown example id " + std::to_string(id));
  }
}

inline constexpr int kBinaryEnumerationCap = 12;

/// Visits every 0/1 instance with no empty row or column, in increasing
/// order of the row-major bit mask.
inline void for_each_binary(int n, int m, const std::function<void(const Instance&)>& visit,
                            int cap = kBinaryEnumerationCap) {
  if (n < 1 || m < 1) throw std::invalid_argument("enumeration needs n, m >= 1");
  if (n * m > cap) throw std::length_error("binary enumeration capped at n*m <= " + std::to_string(cap));
  const std::uint64_t total = std::uint64_t{1} << (n * m);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    auto bit = [&](int i, int j) { return (mask >> (i * m + j)) & 1; };
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      bool any = false;
      for (int j = 0; j < m; ++j) any = any || bit(i, j);
      ok = any;
    }
    for (int j = 0; j < m && ok; ++j) {
      bool any = false;
      for (int i = 0; i < n; ++i) any = any || bit(i, j);
      ok = any;
    }
    if (!ok) continue;
    visit(detail::binary_instance(n, m, bit, "binary-" + std::to_string(n) + "x" + std::to_string(m) + "-" +
                                                 std::to_string(mask)));
  }
}

inline std::vector<Instance> enumerate_binary(int n, int m) {
  std::vector<Instance> out;
  for_each_binary(n, m, [&](const Instance& inst) { out.push_back(inst); });
  return out;
}

inline constexpr int kGeneralUtilityMax = 4;

/// Seeded random instance. Binary: fair coins. General: integers uniform in
/// [0, 4]. Empty rows and columns are then repaired with a random positive
/// entry.
inline Instance random_instance(int n, int m, UtilityRegime regime, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("random_instance needs n, m >= 1");
  std::mt19937_64 rng(seed);
  const int top = regime == UtilityRegime::Binary ? 1 : kGeneralUtilityMax;
  std::uniform_int_distribution<int> value(0, top);
  std::uniform_int_distribution<int> positive(1, top);
  std::vector<std::vector<int>> u(n, std::vector<int>(m));
  for (auto& row : u)
    for (auto& v : row) v = value(rng);
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < m; ++j) any = any || u[i][j] > 0;
    if (!any) u[i][std::uniform_int_distribution<int>(0, m - 1)(rng)] = positive(rng);
  }
  for (int j = 0; j < m; ++j) {
    bool any = false;
    for (int i = 0; i < n; ++i) any = any || u[i][j] > 0;
    if (!any) u[std::uniform_int_distribution<int>(0, n - 1)(rng)][j] = positive(rng);
  }
  Matrix<Rational> mat(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) mat(i, j) = u[i][j];
  return Instance(std::move(mat), {}, std::string("random-") + to_string(regime) + "-" + std::to_string(seed));
}

/// Named families for the command line.
inline Instance make_family(const std::string& family, int n, int m = 0, std::uint64_t seed = 1, long param = 0) {
  if (family == "upper-triangular") return upper_triangular(n);
  if (family == "lower-triangular") return lower_triangular(n);
  if (family == "like-adversary") return like_adversary(n);
  if (family == "maximum-like-adversary") return maximum_like_adversary(n);
  if (family == "random-binary") return random_instance(n, m > 0 ? m : n, UtilityRegime::Binary, seed);
  if (family == "random-general") return random_instance(n, m > 0 ? m : n, UtilityRegime::General, seed);
  if (family.rfind("example-", 0) == 0) {
    const int id = std::stoi(family.substr(8));
    return example_fixture(id, id == 1 ? n : param);
  }
  throw std::invalid_argument("unknown family: " + family);
}

}  // namespace ofd
