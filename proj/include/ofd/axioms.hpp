#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ofd/core.hpp"
#include "ofd/evaluation.hpp"
#include "ofd/mechanisms.hpp"

namespace ofd {

// Fair division axiom checks on small instances. All comparisons are exact.
// Strategy-proofness is only searched over a bounded report space, so a
// satisfied verdict means "no counterexample among the reports tried".

struct Misreport {
  int agent = 0;
  std::vector<Rational> report;
  Rational sincere_utility;
  Rational misreport_utility;
};

struct StrategyproofVerdict {
  bool satisfied = true;
  std::size_t reports_checked = 0;
  std::optional<Misreport> counterexample;  // largest gain found
};

/// Alternative reports for one agent: every distinct permutation of the true
/// row plus every 0/1 mask applied to it, minus the true row itself.
inline std::vector<std::vector<Rational>> report_space(const std::vector<Rational>& truth) {
  std::set<std::vector<Rational>> space;
  auto perm = truth;
  std::sort(perm.begin(), perm.end());
  do space.insert(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  const int m = static_cast<int>(truth.size());
  for (long mask = 0; mask < (1L << m); ++mask) {
    auto masked = truth;
    for (int j = 0; j < m; ++j)
      if (!((mask >> j) & 1)) masked[j] = 0;
    space.insert(masked);
  }
  space.erase(truth);
  return {space.begin(), space.end()};
}

inline StrategyproofVerdict check_strategyproof(const Instance& inst, MechanismKind kind,
                                                std::size_t report_space_cap = 100'000) {
  StrategyproofVerdict v;
  const auto sincere = BidProfile::sincere(inst);
  const auto honest = evaluate_exact_compressed(inst, sincere, kind).welfare;
  for (int i = 0; i < inst.agents(); ++i) {
    const auto reports = report_space(inst.utilities().row(i));
    v.reports_checked += reports.size();
    if (v.reports_checked > report_space_cap) throw std::length_error("strategy-proofness report space exceeds cap");
    for (const auto& report : reports) {
      BidProfile bids = sincere;
      for (int j = 0; j < inst.items(); ++j) bids.bids(i, j) = report[j];
      const auto lied = evaluate_exact_compressed(inst, bids, kind).welfare;
      if (lied.per_agent[i] > honest.per_agent[i]) {
        const Rational gain = lied.per_agent[i] - honest.per_agent[i];
        if (!v.counterexample ||
            gain > v.counterexample->misreport_utility - v.counterexample->sincere_utility) {
          v.counterexample = Misreport{i, report, honest.per_agent[i], lied.per_agent[i]};
        }
        v.satisfied = false;
      }
    }
  }
  return v;
}

struct EnvyVerdict {
  bool satisfied = true;
  Rational max_envy = 0;
  int envier = -1;
  int envied = -1;
  std::optional<Allocation> allocation;  // ex post only: where the worst envy occurs
};

/// Envy of i towards k: how much more i values k's (expected) bundle than
/// its own.
inline Rational ex_ante_envy(const Instance& inst, const AssignmentMatrix& p, int i, int k) {
  Rational e = 0;
  for (int j = 0; j < inst.items(); ++j) e += (p(k, j) - p(i, j)) * inst.utility(i, j);
  return e;
}

inline EnvyVerdict check_envy_ex_ante(const Instance& inst, MechanismKind kind) {
  const auto p = evaluate_exact_compressed(inst, BidProfile::sincere(inst), kind).matrix;
  EnvyVerdict v;
  bool first = true;
  for (int i = 0; i < inst.agents(); ++i)
    for (int k = 0; k < inst.agents(); ++k) {
      if (i == k) continue;
      const Rational e = ex_ante_envy(inst, p, i, k);
      if (first || e > v.max_envy) {
        v.max_envy = e;
        v.envier = i;
        v.envied = k;
        first = false;
      }
    }
  v.satisfied = sgn(v.max_envy) <= 0;
  return v;
}

inline EnvyVerdict check_envy_ex_post(const Instance& inst, MechanismKind kind, const Rational& bound,
                                      const EngineConfig& cfg = {}) {
  const auto dist = evaluate_exact_full(inst, BidProfile::sincere(inst), kind, nullptr, cfg);
  EnvyVerdict v;
  bool first = true;
  for (const auto& [alloc, prob] : dist.support()) {
    for (int i = 0; i < inst.agents(); ++i) {
      std::vector<Rational> view(inst.agents(), Rational(0));
      for (int j = 0; j < inst.items(); ++j)
        if (alloc.owner[j] != kDiscarded) view[alloc.owner[j]] += inst.utility(i, j);
      for (int k = 0; k < inst.agents(); ++k) {
        if (k == i) continue;
        const Rational e = view[k] - view[i];
        if (first || e > v.max_envy) {
          v.max_envy = e;
          v.envier = i;
          v.envied = k;
          v.allocation = alloc;
          first = false;
        }
      }
    }
  }
  v.satisfied = v.max_envy <= bound;
  return v;
}

struct ParetoVerdict {
  bool satisfied = true;
  std::optional<Allocation> dominated;
  std::optional<Allocation> dominating;
};

inline constexpr long kParetoAlternativeCap = 1'000'000;

inline bool pareto_dominates(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    strict = strict || a[i] > b[i];
  }
  return strict;
}

/// Violated iff some allocation in the mechanism's support is Pareto
/// dominated by some complete allocation.
inline ParetoVerdict check_pareto_ex_post(const Instance& inst, MechanismKind kind, const EngineConfig& cfg = {}) {
  const int n = inst.agents();
  const int m = inst.items();
  long total = 1;
  for (int j = 0; j < m; ++j) {
    total *= n;
    if (total > kParetoAlternativeCap) throw std::length_error("too many alternative allocations for Pareto check");
  }
  std::vector<std::pair<Allocation, std::vector<Rational>>> alternatives;
  for (long code = 0; code < total; ++code) {
    Allocation a;
    long c = code;
    for (int j = 0; j < m; ++j) {
      a.owner.push_back(static_cast<int>(c % n));
      c /= n;
    }
    auto values = bundle_values(inst, a);
    alternatives.emplace_back(std::move(a), std::move(values));
  }
  ParetoVerdict v;
  const auto dist = evaluate_exact_full(inst, BidProfile::sincere(inst), kind, nullptr, cfg);
  for (const auto& [alloc, prob] : dist.support()) {
    const auto values = bundle_values(inst, alloc);
    for (const auto& [alt, alt_values] : alternatives)
      if (pareto_dominates(alt_values, values)) {
        v.satisfied = false;
        v.dominated = alloc;
        v.dominating = alt;
        return v;
      }
  }
  return v;
}

}  // namespace ofd
