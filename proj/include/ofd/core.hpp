#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ofd/matrix.hpp"
#include "ofd/rational.hpp"

namespace ofd {

inline constexpr int kDiscarded = -1;

enum class Objective { ES, UW, EW };

inline const char* to_string(Objective o) {
  switch (o) {
    case Objective::ES: return "ES";
    case Objective::UW: return "UW";
    case Objective::EW: return "EW";
  }
  return "?";
}

inline Objective parse_objective(const std::string& s) {
  if (s == "ES" || s == "es") return Objective::ES;
  if (s == "UW" || s == "uw") return Objective::UW;
  if (s == "EW" || s == "ew") return Objective::EW;
  throw std::invalid_argument("unknown objective: " + s);
}

/// An online fair division instance: n agents, m items, non-negative
/// rational utilities and the arrival order of the items.
///
/// `order()[r]` is the item revealed in round r. Every agent values some
/// item and every item is valued by some agent; construction throws
/// otherwise.
class Instance {
 public:
  Instance(Matrix<Rational> utilities, std::vector<int> order = {}, std::string name = {})
      : utilities_(std::move(utilities)), order_(std::move(order)), name_(std::move(name)) {
    const int n = utilities_.rows();
    const int m = utilities_.cols();
    if (n <= 0 || m <= 0) throw std::invalid_argument("instance needs at least one agent and one item");
    if (order_.empty()) {
      order_.resize(m);
      std::iota(order_.begin(), order_.end(), 0);
    }
    if (static_cast<int>(order_.size()) != m) throw std::invalid_argument("arrival order has wrong length");
    std::vector<bool> seen(m, false);
    for (int item : order_) {
      if (item < 0 || item >= m || seen[item]) throw std::invalid_argument("arrival order is not a permutation");
      seen[item] = true;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (sgn(utilities_(i, j)) < 0) throw std::invalid_argument("negative utility");
    for (int i = 0; i < n; ++i) {
      bool any = false;
      for (int j = 0; j < m && !any; ++j) any = sgn(utilities_(i, j)) > 0;
      if (!any) throw std::invalid_argument("agent " + std::to_string(i) + " values no item");
    }
    for (int j = 0; j < m; ++j) {
      bool any = false;
      for (int i = 0; i < n && !any; ++i) any = sgn(utilities_(i, j)) > 0;
      if (!any) throw std::invalid_argument("item " + std::to_string(j) + " is valued by no agent");
    }
  }

  static Instance from_rows(const std::vector<std::vector<long>>& rows, std::vector<int> order = {},
                            std::string name = {}) {
    std::vector<std::vector<Rational>> r;
    for (const auto& row : rows) {
      std::vector<Rational> out;
      for (long v : row) out.emplace_back(v);
      r.push_back(std::move(out));
    }
    return Instance(Matrix<Rational>::from_rows(r), std::move(order), std::move(name));
  }

  int agents() const { return utilities_.rows(); }
  int items() const { return utilities_.cols(); }
  const Rational& utility(int agent, int item) const { return utilities_(agent, item); }
  const Matrix<Rational>& utilities() const { return utilities_; }
  const std::vector<int>& order() const { return order_; }
  int item_at(int round) const { return order_[round]; }
  const std::string& name() const { return name_; }

  bool is_binary() const {
    for (int i = 0; i < agents(); ++i)
      for (int j = 0; j < items(); ++j)
        if (utilities_(i, j) != 0 && utilities_(i, j) != 1) return false;
    return true;
  }

 private:
  Matrix<Rational> utilities_;
  std::vector<int> order_;
  std::string name_;
};

/// Reported values v_ij that drive a mechanism's decisions. Welfare is always
/// measured against the instance's true utilities.
struct BidProfile {
  Matrix<Rational> bids;

  static BidProfile sincere(const Instance& inst) { return BidProfile{inst.utilities()}; }

  void check(const Instance& inst) const {
    if (bids.rows() != inst.agents() || bids.cols() != inst.items())
      throw std::invalid_argument("bid profile dimensions do not match instance");
    for (int i = 0; i < bids.rows(); ++i)
      for (int j = 0; j < bids.cols(); ++j)
        if (sgn(bids(i, j)) < 0) throw std::invalid_argument("negative bid");
  }
};

/// Owner of every item (indexed by item, not by round), or kDiscarded.
struct Allocation {
  std::vector<int> owner;

  auto operator<=>(const Allocation&) const = default;
  bool operator==(const Allocation&) const = default;
};

inline int matching_size(const Allocation& a, int agents) {
  std::vector<bool> served(agents, false);
  for (int owner : a.owner)
    if (owner != kDiscarded) {
      if (owner < 0 || owner >= agents) throw std::out_of_range("allocation names unknown agent");
      served[owner] = true;
    }
  return static_cast<int>(std::count(served.begin(), served.end(), true));
}

/// Exact probability distribution over pairwise distinct allocations.
class AllocationDistribution {
 public:
  using Entry = std::pair<Allocation, Rational>;

  AllocationDistribution() = default;

  explicit AllocationDistribution(std::vector<Entry> support) : support_(std::move(support)) {
    Rational total = 0;
    for (const auto& [alloc, p] : support_) {
      if (sgn(p) <= 0 || p > 1) throw std::invalid_argument("support probability outside (0, 1]");
      total += p;
    }
    if (total != 1) throw std::invalid_argument("probabilities sum to " + to_string(total) + ", not 1");
    auto sorted = support_;
    std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i].first == sorted[i - 1].first) throw std::invalid_argument("duplicate allocation in support");
  }

  /// Merges equal allocations and drops zero-weight entries.
  static AllocationDistribution from_weights(const std::map<Allocation, Rational>& weights) {
    std::vector<Entry> entries;
    for (const auto& [alloc, p] : weights)
      if (sgn(p) != 0) entries.emplace_back(alloc, p);
    return AllocationDistribution(std::move(entries));
  }

  static AllocationDistribution point(Allocation a) { return AllocationDistribution({{std::move(a), Rational(1)}}); }

  const std::vector<Entry>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::vector<Entry> support_;
};

/// p(i, j): probability that agent i receives item j.
using AssignmentMatrix = Matrix<Rational>;

struct WelfareReport {
  Rational es;
  Rational uw;
  Rational ew;
  std::vector<Rational> per_agent;

  bool operator==(const WelfareReport&) const = default;
};

/// Welfare from a receipt-probability matrix and the expected matching size.
inline WelfareReport welfare_from_matrix(const Instance& inst, const AssignmentMatrix& p, const Rational& es) {
  if (p.rows() != inst.agents() || p.cols() != inst.items())
    throw std::invalid_argument("assignment matrix dimensions do not match instance");
  WelfareReport r;
  r.es = es;
  r.per_agent.assign(inst.agents(), Rational(0));
  for (int i = 0; i < inst.agents(); ++i)
    for (int j = 0; j < inst.items(); ++j)
      if (sgn(p(i, j)) != 0) r.per_agent[i] += p(i, j) * inst.utility(i, j);
  r.uw = 0;
  for (const auto& v : r.per_agent) r.uw += v;
  r.ew = *std::min_element(r.per_agent.begin(), r.per_agent.end());
  return r;
}

inline AssignmentMatrix assignment_matrix(const AllocationDistribution& d, const Instance& inst) {
  AssignmentMatrix p(inst.agents(), inst.items(), Rational(0));
  for (const auto& [alloc, prob] : d.support()) {
    if (static_cast<int>(alloc.owner.size()) != inst.items())
      throw std::invalid_argument("allocation length does not match instance");
    for (int j = 0; j < inst.items(); ++j)
      if (alloc.owner[j] != kDiscarded) p.at(alloc.owner[j], j) += prob;
  }
  return p;
}

inline WelfareReport welfare_of_distribution(const Instance& inst, const AllocationDistribution& d) {
  Rational es = 0;
  for (const auto& [alloc, prob] : d.support()) {
    if (static_cast<int>(alloc.owner.size()) != inst.items())
      throw std::invalid_argument("allocation length does not match instance");
    es += prob * matching_size(alloc, inst.agents());
  }
  return welfare_from_matrix(inst, assignment_matrix(d, inst), es);
}

/// Utility each agent derives from a single allocation under the true utilities.
inline std::vector<Rational> bundle_values(const Instance& inst, const Allocation& a) {
  std::vector<Rational> v(inst.agents(), Rational(0));
  for (int j = 0; j < inst.items(); ++j)
    if (a.owner[j] != kDiscarded) v[a.owner[j]] += inst.utility(a.owner[j], j);
  return v;
}

inline const Rational& objective_value(const WelfareReport& r, Objective o) {
  switch (o) {
    case Objective::ES: return r.es;
    case Objective::UW: return r.uw;
    case Objective::EW: return r.ew;
  }
  return r.es;
}

/// Competitive ratio optimum / achieved. An empty `ratio` is the infinite
/// ratio (achieved == 0). The additive slack is always zero.
struct RatioReport {
  Objective objective = Objective::ES;
  Rational optimum;
  Rational achieved;
  std::optional<Rational> ratio;
  Rational additive_slack = 0;

  bool infinite() const { return !ratio.has_value(); }

  /// achieved / optimum in [0, 1] when optimum >= achieved; 1 when the
  /// optimum is zero.
  Rational reciprocal() const {
    if (sgn(optimum) == 0) return Rational(1);
    return achieved / optimum;
  }

  std::string ratio_string() const { return infinite() ? std::string("inf") : to_fraction_string(*ratio); }
};

inline RatioReport ratio(Objective objective, const Rational& optimum, const Rational& achieved) {
  if (sgn(optimum) < 0 || sgn(achieved) < 0) throw std::invalid_argument("ratio of negative welfare");
  RatioReport r;
  r.objective = objective;
  r.optimum = optimum;
  r.achieved = achieved;
  if (sgn(achieved) > 0) r.ratio = optimum / achieved;
  return r;
}

}  // namespace ofd
