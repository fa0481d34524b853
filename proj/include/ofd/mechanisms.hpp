#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ofd/advice.hpp"
#include "ofd/core.hpp"

namespace ofd {

enum class MechanismKind { Like, BalancedLike, MaximumLike, Ranking, Random };

inline const char* to_string(MechanismKind k) {
  switch (k) {
    case MechanismKind::Like: return "like";
    case MechanismKind::BalancedLike: return "balanced-like";
    case MechanismKind::MaximumLike: return "maximum-like";
    case MechanismKind::Ranking: return "ranking";
    case MechanismKind::Random: return "random";
  }
  return "?";
}

inline constexpr MechanismKind kBaseMechanisms[] = {MechanismKind::Like, MechanismKind::BalancedLike,
                                                   MechanismKind::MaximumLike, MechanismKind::Ranking,
                                                   MechanismKind::Random};

/// A mechanism as named on the command line: `like`, `advised:ranking`, ...
struct MechanismSpec {
  MechanismKind kind = MechanismKind::Like;
  bool advised = false;

  std::string name() const { return (advised ? std::string("advised:") : std::string()) + to_string(kind); }
};

inline MechanismSpec parse_mechanism(const std::string& text) {
  MechanismSpec spec;
  std::string rest = text;
  const std::string prefix = "advised:";
  if (rest.rfind(prefix, 0) == 0) {
    spec.advised = true;
    rest = rest.substr(prefix.size());
  }
  for (auto k : kBaseMechanisms)
    if (rest == to_string(k)) {
      spec.kind = k;
      return spec;
    }
  throw std::invalid_argument("unknown mechanism: " + text);
}

/// History a mechanism may consult. `counts[i]` is the number of items agent
/// i holds; `round` indexes the arrival order; `priority` lists agents from
/// highest to lowest priority (Ranking only).
struct MechanismState {
  std::vector<int> counts;
  int round = 0;
  std::vector<int> priority;

  static MechanismState initial(int agents, std::vector<int> priority = {}) {
    return MechanismState{std::vector<int>(agents, 0), 0, std::move(priority)};
  }

  bool served(int agent) const { return counts[agent] > 0; }
};

struct Branch {
  int agent = kDiscarded;
  Rational probability;
  bool operator==(const Branch&) const = default;
};

using BranchList = std::vector<Branch>;

/// Per-item bidder sets precomputed from a bid profile.
class BidIndex {
 public:
  BidIndex(const Instance& inst, const BidProfile& bids)
      : agents_(inst.agents()), likers_(inst.items()), top_(inst.items()), likes_(inst.agents(), inst.items(), 0) {
    bids.check(inst);
    for (int j = 0; j < inst.items(); ++j) {
      Rational best = 0;
      for (int i = 0; i < inst.agents(); ++i) {
        const Rational& v = bids.bids(i, j);
        if (sgn(v) <= 0) continue;
        likers_[j].push_back(i);
        likes_(i, j) = 1;
        if (v > best) {
          best = v;
          top_[j].clear();
        }
        if (v == best) top_[j].push_back(i);
      }
    }
  }

  /// Binary bids: every liker bids 1.
  explicit BidIndex(const Matrix<char>& likes)
      : agents_(likes.rows()), likers_(likes.cols()), top_(likes.cols()), likes_(likes) {
    for (int j = 0; j < likes.cols(); ++j)
      for (int i = 0; i < likes.rows(); ++i)
        if (likes(i, j)) likers_[j].push_back(i);
    top_ = likers_;
  }

  /// Makes `agent` the only (binary) bidder for `item`.
  void set_single_liker(int item, int agent) {
    for (int a : likers_[item]) likes_(a, item) = 0;
    likers_[item].assign(1, agent);
    top_[item] = likers_[item];
    likes_(agent, item) = 1;
  }

  int agents() const { return agents_; }
  const std::vector<int>& likers(int item) const { return likers_[item]; }
  const std::vector<int>& top_bidders(int item) const { return top_[item]; }
  bool likes(int agent, int item) const { return likes_(agent, item) != 0; }

 private:
  int agents_;
  std::vector<std::vector<int>> likers_;
  std::vector<std::vector<int>> top_;
  Matrix<char> likes_;
};

// Candidate sets. Each rule picks uniformly from `out`; a lone kDiscarded
// entry means the item is thrown away.
namespace rules {

inline void like(const BidIndex& idx, const MechanismState&, int item, std::vector<int>& out) {
  out = idx.likers(item);
  if (out.empty()) out.push_back(kDiscarded);
}

inline void balanced_like(const BidIndex& idx, const MechanismState& s, int item, std::vector<int>& out) {
  out.clear();
  int fewest = -1;
  for (int a : idx.likers(item)) {
    if (fewest == -1 || s.counts[a] < fewest) {
      fewest = s.counts[a];
      out.clear();
    }
    if (s.counts[a] == fewest) out.push_back(a);
  }
  if (out.empty()) out.push_back(kDiscarded);
}

inline void maximum_like(const BidIndex& idx, const MechanismState&, int item, std::vector<int>& out) {
  out = idx.top_bidders(item);
  if (out.empty()) out.push_back(kDiscarded);
}

inline void ranking(const BidIndex& idx, const MechanismState& s, int item, std::vector<int>& out) {
  if (static_cast<int>(s.priority.size()) != idx.agents()) throw std::invalid_argument("ranking needs a priority order");
  out.clear();
  for (int a : s.priority)
    if (s.counts[a] == 0 && idx.likes(a, item)) {
      out.push_back(a);
      return;
    }
  out.push_back(kDiscarded);
}

inline void random(const BidIndex& idx, const MechanismState& s, int item, std::vector<int>& out) {
  out.clear();
  for (int a : idx.likers(item))
    if (s.counts[a] == 0) out.push_back(a);
  if (out.empty()) out.push_back(kDiscarded);
}

inline void for_kind(MechanismKind kind, const BidIndex& idx, const MechanismState& s, int item,
                     std::vector<int>& out) {
  switch (kind) {
    case MechanismKind::Like: return like(idx, s, item, out);
    case MechanismKind::BalancedLike: return balanced_like(idx, s, item, out);
    case MechanismKind::MaximumLike: return maximum_like(idx, s, item, out);
    case MechanismKind::Ranking: return ranking(idx, s, item, out);
    case MechanismKind::Random: return random(idx, s, item, out);
  }
}

inline BranchList uniform(const std::vector<int>& candidates) {
  BranchList list;
  const Rational p(1, static_cast<unsigned long>(candidates.size()));
  for (int a : candidates) list.push_back({a, p});
  return list;
}

}  // namespace rules

inline BranchList like_rule(const Instance& inst, const BidProfile& bids, const MechanismState& s, int item) {
  std::vector<int> out;
  rules::like(BidIndex(inst, bids), s, item, out);
  return rules::uniform(out);
}

inline BranchList balanced_like_rule(const Instance& inst, const BidProfile& bids, const MechanismState& s,
                                     int item) {
  std::vector<int> out;
  rules::balanced_like(BidIndex(inst, bids), s, item, out);
  return rules::uniform(out);
}

inline BranchList maximum_like_rule(const Instance& inst, const BidProfile& bids, const MechanismState& s,
                                    int item) {
  std::vector<int> out;
  rules::maximum_like(BidIndex(inst, bids), s, item, out);
  return rules::uniform(out);
}

inline BranchList ranking_rule(const Instance& inst, const BidProfile& bids, const MechanismState& s, int item) {
  std::vector<int> out;
  rules::ranking(BidIndex(inst, bids), s, item, out);
  return rules::uniform(out);
}

inline BranchList random_rule(const Instance& inst, const BidProfile& bids, const MechanismState& s, int item) {
  std::vector<int> out;
  rules::random(BidIndex(inst, bids), s, item, out);
  return rules::uniform(out);
}

/// A mechanism bound to one instance and bid profile, optionally reading an
/// advice tape. Advised rounds hand the item to the advised agent with
/// probability 1; that agent then counts as served (Ranking) and gains one
/// item (Balanced Like) like any other recipient.
class OnlineMechanism {
 public:
  OnlineMechanism(MechanismKind kind, const Instance& inst, const BidProfile& bids, const AdviceTape* tape = nullptr)
      : kind_(kind), inst_(&inst), index_(inst, bids), advised_(inst.items(), kDiscarded) {
    if (!tape) return;
    std::vector<bool> used(inst.agents(), false);
    for (const auto& a : tape->decoded) {
      if (a.round < 0 || a.round >= inst.items()) throw std::invalid_argument("advice round out of range");
      if (a.agent < 0 || a.agent >= inst.agents()) throw std::invalid_argument("advised agent out of range");
      if (advised_[a.round] != kDiscarded) throw std::invalid_argument("round advised twice");
      if (tape->layout.distinct_agents && used[a.agent])
        throw std::invalid_argument("tape advises agent " + std::to_string(a.agent) + " twice");
      used[a.agent] = true;
      advised_[a.round] = a.agent;
    }
  }

  MechanismKind kind() const { return kind_; }
  const Instance& instance() const { return *inst_; }
  const BidIndex& index() const { return index_; }
  int agents() const { return inst_->agents(); }
  int items() const { return inst_->items(); }
  bool uses_priority() const { return kind_ == MechanismKind::Ranking; }
  bool advised_round(int round) const { return advised_[round] != kDiscarded; }

  void candidates(const MechanismState& s, std::vector<int>& out) const {
    if (advised_[s.round] != kDiscarded) {
      out.assign(1, advised_[s.round]);
      return;
    }
    rules::for_kind(kind_, index_, s, inst_->item_at(s.round), out);
  }

  BranchList branches(const MechanismState& s) const {
    std::vector<int> out;
    candidates(s, out);
    return rules::uniform(out);
  }

  static void commit(MechanismState& s, int agent) {
    if (agent != kDiscarded) ++s.counts[agent];
    ++s.round;
  }

  /// The part of the count vector the rule can observe. Balanced Like needs
  /// exact counts; every other rule only distinguishes served from unserved.
  void project(std::vector<int>& counts) const {
    if (kind_ == MechanismKind::BalancedLike) return;
    for (int& c : counts) c = std::min(c, 1);
  }

 private:
  MechanismKind kind_;
  const Instance* inst_;
  BidIndex index_;
  std::vector<int> advised_;
};

/// Advised decision for a single state: the advised agent if the
/// tape covers this round, otherwise the base rule.
inline BranchList advised_rule(MechanismKind base, const AdviceTape& tape, const Instance& inst,
                               const BidProfile& bids, const MechanismState& s) {
  return OnlineMechanism(base, inst, bids, &tape).branches(s);
}

}  // namespace ofd
