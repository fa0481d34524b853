#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "ofd/core.hpp"

namespace ofd {

/// Bipartite graph between agents (rows) and items (columns).
using EdgeMatrix = Matrix<char>;

inline EdgeMatrix positive_edges(const Matrix<Rational>& values) {
  EdgeMatrix e(values.rows(), values.cols(), 0);
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j < values.cols(); ++j) e(i, j) = sgn(values(i, j)) > 0;
  return e;
}

namespace detail {

// Kuhn-style augmenting paths. Items marked `fixed` keep their partner.
class AugmentingMatcher {
 public:
  explicit AugmentingMatcher(const EdgeMatrix& edges)
      : edges_(edges),
        owner_(edges.cols(), -1),
        holds_(edges.rows(), -1),
        fixed_(edges.cols(), 0),
        stamp_(edges.rows(), 0) {}

  int maximize(const std::vector<int>& item_order) {
    for (int item : item_order)
      if (owner_[item] == -1 && !fixed_[item]) augment_from(item);
    return size();
  }

  bool augment_from(int item) {
    ++epoch_;
    return augment(item);
  }

  int size() const {
    return static_cast<int>(std::count_if(owner_.begin(), owner_.end(), [](int a) { return a != -1; }));
  }

  // Greedily fixes each item, in order, to the smallest agent that still
  // admits a maximum matching consistent with all earlier choices.
  void make_lexicographic(const std::vector<int>& item_order) {
    const int target = maximize(item_order);
    for (int item : item_order) {
      for (int agent = 0; agent < edges_.rows(); ++agent) {
        if (!edges_(agent, item)) continue;
        if (owner_[item] == agent) break;
        const int previous_agent = owner_[item];
        const int displaced = holds_[agent];
        if (displaced != -1 && fixed_[displaced]) continue;
        const auto saved_owner = owner_;
        const auto saved_holds = holds_;
        if (previous_agent != -1) holds_[previous_agent] = -1;
        if (displaced != -1) owner_[displaced] = -1;
        owner_[item] = agent;
        holds_[agent] = item;
        fixed_[item] = 1;
        if (size() < target) {
          if (displaced != -1) augment_from(displaced);
          for (int other = 0; other < edges_.cols() && size() < target; ++other)
            if (owner_[other] == -1 && !fixed_[other]) augment_from(other);
        }
        if (size() >= target) break;
        owner_ = saved_owner;
        holds_ = saved_holds;
        fixed_[item] = 0;
      }
      fixed_[item] = 1;
    }
  }

  const std::vector<int>& owner() const { return owner_; }

 private:
  bool augment(int item) {
    for (int agent = 0; agent < edges_.rows(); ++agent) {
      if (!edges_(agent, item) || stamp_[agent] == epoch_) continue;
      stamp_[agent] = epoch_;
      const int other = holds_[agent];
      if (other == -1 || (!fixed_[other] && augment(other))) {
        owner_[item] = agent;
        holds_[agent] = item;
        return true;
      }
    }
    return false;
  }

  const EdgeMatrix& edges_;
  std::vector<int> owner_;
  std::vector<int> holds_;
  std::vector<char> fixed_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
};

inline std::vector<int> identity_order(int m) {
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace detail

/// Maximum-cardinality matching; `owner[item]` is the matched agent or
/// kDiscarded.
inline std::vector<int> maximum_matching(const EdgeMatrix& edges) {
  detail::AugmentingMatcher m(edges);
  m.maximize(detail::identity_order(edges.cols()));
  return m.owner();
}

/// Maximum matching that is lexicographically smallest when items are read in
/// `item_order` and each item prefers lower agent indices.
inline std::vector<int> lex_min_maximum_matching(const EdgeMatrix& edges, const std::vector<int>& item_order) {
  detail::AugmentingMatcher m(edges);
  m.make_lexicographic(item_order);
  return m.owner();
}

inline int matched_count(const std::vector<int>& owner) {
  return static_cast<int>(std::count_if(owner.begin(), owner.end(), [](int a) { return a != kDiscarded; }));
}

struct OfflineEs {
  int size = 0;
  Allocation witness;  // unmatched items are discarded
};

inline OfflineEs offline_es(const Instance& inst) {
  auto owner = lex_min_maximum_matching(positive_edges(inst.utilities()), inst.order());
  return {matched_count(owner), Allocation{std::move(owner)}};
}

/// Each item to an agent valuing it most.
inline Rational offline_uw(const Instance& inst) {
  Rational total = 0;
  for (int j = 0; j < inst.items(); ++j) {
    Rational best = 0;
    for (int i = 0; i < inst.agents(); ++i) best = std::max(best, inst.utility(i, j));
    total += best;
  }
  return total;
}

struct OfflineEw {
  Rational value;
  Allocation witness;
};

inline constexpr int kBruteForceMaxAgents = 6;
inline constexpr int kBruteForceMaxItems = 8;

namespace detail {

inline void max_min_search(const Instance& inst, int round, std::vector<Rational>& sums, std::vector<int>& owner,
                           OfflineEw& best, bool& found) {
  if (round == inst.items()) {
    const Rational& low = *std::min_element(sums.begin(), sums.end());
    if (!found || low > best.value) {
      best.value = low;
      best.witness.owner = owner;
      found = true;
    }
    return;
  }
  const int item = inst.item_at(round);
  for (int agent = 0; agent < inst.agents(); ++agent) {
    owner[item] = agent;
    sums[agent] += inst.utility(agent, item);
    max_min_search(inst, round + 1, sums, owner, best, found);
    sums[agent] -= inst.utility(agent, item);
  }
}

}  // namespace detail

/// Max-min allocation by exhaustive search over all n^m allocations. Ties go
/// to the lexicographically first allocation in arrival order.
inline OfflineEw max_min_allocation_brute_force(const Instance& inst) {
  if (inst.agents() > kBruteForceMaxAgents || inst.items() > kBruteForceMaxItems)
    throw std::length_error("max-min brute force limited to n <= 6, m <= 8");
  OfflineEw best;
  bool found = false;
  std::vector<Rational> sums(inst.agents(), Rational(0));
  std::vector<int> owner(inst.items(), kDiscarded);
  detail::max_min_search(inst, 0, sums, owner, best, found);
  return best;
}

/// Max-min allocation for 0/1 utilities: the largest t such that every agent
/// can get t liked items, found by matching t copies of each agent. Items
/// left over go to their lowest-index liker.
inline OfflineEw binary_max_min(const Instance& inst) {
  if (!inst.is_binary()) throw std::invalid_argument("binary max-min on non-binary instance");
  const int n = inst.agents();
  const int m = inst.items();
  const EdgeMatrix edges = positive_edges(inst.utilities());
  const auto copies = [&](int t) {
    EdgeMatrix e(n * t, m, 0);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < t; ++c)
        for (int j = 0; j < m; ++j) e(i * t + c, j) = edges(i, j);
    return e;
  };
  int lo = 0, hi = m / n;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (matched_count(maximum_matching(copies(mid))) == n * mid)
      lo = mid;
    else
      hi = mid - 1;
  }
  OfflineEw out;
  out.value = lo;
  out.witness.owner.assign(m, kDiscarded);
  if (lo > 0) {
    const auto owner = lex_min_maximum_matching(copies(lo), inst.order());
    for (int j = 0; j < m; ++j)
      if (owner[j] != kDiscarded) out.witness.owner[j] = owner[j] / lo;
  }
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n && out.witness.owner[j] == kDiscarded; ++i)
      if (edges(i, j)) out.witness.owner[j] = i;
  return out;
}

/// Optimal offline egalitarian welfare.
///
/// For m == n this is a bottleneck assignment: the largest threshold t such
/// that the graph {u_ij >= t} has a perfect matching, found by binary search
/// over the distinct positive utilities. For m > n binary utilities use
/// binary_max_min; general ones are searched by brute force (n <= 6, m <= 8).
inline OfflineEw offline_ew(const Instance& inst) {
  const int n = inst.agents();
  const int m = inst.items();
  if (m < n) throw std::invalid_argument("offline egalitarian welfare needs m >= n");
  if (m > n) return inst.is_binary() ? binary_max_min(inst) : max_min_allocation_brute_force(inst);

  std::set<Rational> distinct;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (sgn(inst.utility(i, j)) > 0) distinct.insert(inst.utility(i, j));
  std::vector<Rational> thresholds(distinct.begin(), distinct.end());

  auto graph_at = [&](const Rational& t) {
    EdgeMatrix e(n, m, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) e(i, j) = inst.utility(i, j) >= t && sgn(inst.utility(i, j)) > 0;
    return e;
  };
  auto perfect = [&](const Rational& t) { return matched_count(maximum_matching(graph_at(t))) == n; };

  if (thresholds.empty() || !perfect(thresholds.front()))
    throw std::domain_error("instance admits no perfect allocation");
  std::size_t lo = 0, hi = thresholds.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (perfect(thresholds[mid]))
      lo = mid;
    else
      hi = mid - 1;
  }
  OfflineEw out;
  out.value = thresholds[lo];
  out.witness.owner = lex_min_maximum_matching(graph_at(thresholds[lo]), inst.order());
  return out;
}

inline bool is_bistochastic(const AssignmentMatrix& p) {
  if (p.rows() != p.cols()) return false;
  const int n = p.rows();
  for (int i = 0; i < n; ++i) {
    Rational row = 0, col = 0;
    for (int j = 0; j < n; ++j) {
      if (sgn(p(i, j)) < 0 || sgn(p(j, i)) < 0) return false;
      row += p(i, j);
      col += p(j, i);
    }
    if (row != 1 || col != 1) return false;
  }
  return true;
}

struct BirkhoffTerm {
  Allocation permutation;  // owner[item] = agent
  Rational weight;
};

/// Birkhoff-von Neumann decomposition by repeatedly peeling the
/// lexicographically smallest perfect matching on the positive support.
/// Each peel moves to a strictly lower-dimensional face of the Birkhoff
/// polytope, so at most n^2 - 2n + 2 terms are produced.
inline std::vector<BirkhoffTerm> birkhoff_decompose(const AssignmentMatrix& p, bool require_bistochastic = true) {
  if (p.rows() != p.cols()) throw std::invalid_argument("birkhoff decomposition needs a square matrix");
  if (require_bistochastic && !is_bistochastic(p)) throw std::invalid_argument("matrix is not bistochastic");
  const int n = p.rows();
  AssignmentMatrix rest = p;
  const auto order = detail::identity_order(n);
  std::vector<BirkhoffTerm> terms;
  for (;;) {
    EdgeMatrix support = positive_edges(rest);
    bool any = false;
    for (int i = 0; i < n && !any; ++i)
      for (int j = 0; j < n && !any; ++j) any = support(i, j);
    if (!any) break;
    auto owner = lex_min_maximum_matching(support, order);
    if (matched_count(owner) != n) throw std::logic_error("support has no perfect matching; input not bistochastic");
    Rational weight = rest(owner[0], 0);
    for (int j = 1; j < n; ++j) weight = std::min(weight, rest(owner[j], j));
    for (int j = 0; j < n; ++j) rest(owner[j], j) -= weight;
    terms.push_back({Allocation{std::move(owner)}, weight});
  }
  return terms;
}

inline AssignmentMatrix recompose(const std::vector<BirkhoffTerm>& terms, int n) {
  AssignmentMatrix p(n, n, Rational(0));
  for (const auto& t : terms)
    for (int j = 0; j < n; ++j) p(t.permutation.owner[j], j) += t.weight;
  return p;
}

}  // namespace ofd
