#pragma once

// Independent reference implementations used only by the tests. Everything
// here is written directly from the mechanism definitions, by plain
// recursion over all random choices, without the library's engines.

#include <algorithm>
#include <numeric>
#include <vector>

#include "ofd/core.hpp"

namespace bf {

using ofd::Instance;
using ofd::Rational;
using ofd::WelfareReport;

enum class Rule { Like, BalancedLike, MaximumLike, Ranking, Random };

struct Accumulator {
  const Instance& inst;
  Rule rule;
  std::vector<int> priority;  // ranking only
  WelfareReport report;
  std::vector<std::vector<Rational>> p;

  explicit Accumulator(const Instance& i, Rule r) : inst(i), rule(r) {
    report.per_agent.assign(i.agents(), Rational(0));
    p.assign(i.agents(), std::vector<Rational>(i.items(), Rational(0)));
  }

  std::vector<int> choices(int item, const std::vector<int>& got) const {
    std::vector<int> out;
    const int n = inst.agents();
    switch (rule) {
      case Rule::Like:
        for (int a = 0; a < n; ++a)
          if (inst.utility(a, item) > 0) out.push_back(a);
        break;
      case Rule::BalancedLike: {
        int best = 1 << 30;
        for (int a = 0; a < n; ++a)
          if (inst.utility(a, item) > 0) best = std::min(best, got[a]);
        for (int a = 0; a < n; ++a)
          if (inst.utility(a, item) > 0 && got[a] == best) out.push_back(a);
        break;
      }
      case Rule::MaximumLike: {
        Rational top = 0;
        for (int a = 0; a < n; ++a) top = std::max(top, inst.utility(a, item));
        for (int a = 0; a < n && top > 0; ++a)
          if (inst.utility(a, item) == top) out.push_back(a);
        break;
      }
      case Rule::Ranking:
        for (int a : priority)
          if (inst.utility(a, item) > 0 && got[a] == 0) {
            out.push_back(a);
            break;
          }
        break;
      case Rule::Random:
        for (int a = 0; a < n; ++a)
          if (inst.utility(a, item) > 0 && got[a] == 0) out.push_back(a);
        break;
    }
    return out;
  }

  void walk(int round, std::vector<int>& got, const Rational& weight, std::vector<int>& owner) {
    if (round == inst.items()) {
      int served = 0;
      for (int a = 0; a < inst.agents(); ++a) served += got[a] > 0;
      report.es += weight * served;
      for (int j = 0; j < inst.items(); ++j)
        if (owner[j] >= 0) {
          p[owner[j]][j] += weight;
          report.per_agent[owner[j]] += weight * inst.utility(owner[j], j);
        }
      return;
    }
    const int item = inst.item_at(round);
    const auto options = choices(item, got);
    if (options.empty()) {
      owner[item] = -1;
      walk(round + 1, got, weight, owner);
      return;
    }
    const Rational share = weight / static_cast<long>(options.size());
    for (int a : options) {
      owner[item] = a;
      ++got[a];
      walk(round + 1, got, share, owner);
      --got[a];
    }
    owner[item] = -1;
  }
};

inline long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

/// Full expectation by recursion over every random choice.
inline WelfareReport evaluate(const Instance& inst, Rule rule, std::vector<std::vector<Rational>>* matrix = nullptr) {
  Accumulator acc(inst, rule);
  const int n = inst.agents();
  std::vector<int> got(n, 0), owner(inst.items(), -1);
  if (rule == Rule::Ranking) {
    acc.priority.resize(n);
    std::iota(acc.priority.begin(), acc.priority.end(), 0);
    const Rational w(1, factorial(n));
    do acc.walk(0, got, w, owner);
    while (std::next_permutation(acc.priority.begin(), acc.priority.end()));
  } else {
    acc.walk(0, got, Rational(1), owner);
  }
  acc.report.uw = 0;
  for (const auto& v : acc.report.per_agent) acc.report.uw += v;
  acc.report.ew = *std::min_element(acc.report.per_agent.begin(), acc.report.per_agent.end());
  for (auto& v : acc.report.per_agent) v.canonicalize();
  acc.report.es.canonicalize();
  if (matrix) *matrix = acc.p;
  return acc.report;
}

/// Calls visit(owner) for each of the n^m complete allocations.
template <class Visit>
void for_each_allocation(int n, int m, Visit visit) {
  std::vector<int> owner(m, 0);
  for (;;) {
    visit(owner);
    int j = 0;
    while (j < m && ++owner[j] == n) owner[j++] = 0;
    if (j == m) return;
  }
}

/// Offline optima over complete allocations. The matching size counts only
/// agents who receive an item they value.
struct Optima {
  int es = 0;
  Rational uw = 0;
  Rational ew = 0;
};

inline Optima offline(const Instance& inst) {
  Optima best;
  bool first = true;
  const int n = inst.agents();
  for_each_allocation(n, inst.items(), [&](const std::vector<int>& owner) {
    std::vector<Rational> v(n, Rational(0));
    for (int j = 0; j < inst.items(); ++j) v[owner[j]] += inst.utility(owner[j], j);
    int es = 0;
    Rational uw = 0;
    for (int a = 0; a < n; ++a) {
      es += v[a] > 0;
      uw += v[a];
    }
    const Rational ew = *std::min_element(v.begin(), v.end());
    best.es = std::max(best.es, es);
    if (first || uw > best.uw) best.uw = uw;
    if (first || ew > best.ew) best.ew = ew;
    first = false;
  });
  return best;
}

}  // namespace bf
