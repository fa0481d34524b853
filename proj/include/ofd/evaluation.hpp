#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ofd/advice.hpp"
#include "ofd/core.hpp"
#include "ofd/instances.hpp"
#include "ofd/mechanisms.hpp"

namespace ofd {

enum class Engine { ExactFull, ExactCompressed, MonteCarlo };

inline const char* to_string(Engine e) {
  switch (e) {
    case Engine::ExactFull: return "exact-full";
    case Engine::ExactCompressed: return "exact-compressed";
    case Engine::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

inline Engine parse_engine(const std::string& s) {
  if (s == "exact-full") return Engine::ExactFull;
  if (s == "exact-compressed" || s == "exact") return Engine::ExactCompressed;
  if (s == "monte-carlo" || s == "mc") return Engine::MonteCarlo;
  throw std::invalid_argument("unknown engine: " + s);
}

inline constexpr int kMaxExactRankingAgents = 9;

struct EngineConfig {
  Engine engine = Engine::ExactCompressed;
  std::size_t branch_cap = 2'000'000;
  std::size_t state_cap = 2'000'000;
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 1;

  void validate() const {
    if (branch_cap == 0 || state_cap == 0) throw std::invalid_argument("engine caps must be positive");
    if (engine == Engine::MonteCarlo && samples == 0) throw std::invalid_argument("monte carlo needs samples > 0");
  }
};

namespace detail {

inline void require_ranking_size(MechanismKind kind, int agents) {
  if (kind == MechanismKind::Ranking && agents > kMaxExactRankingAgents)
    throw std::length_error("exact Ranking enumerates n! priority orders; limited to n <= 9, use monte-carlo");
}

inline Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

class FullEnumerator {
 public:
  FullEnumerator(const OnlineMechanism& mech, std::size_t cap) : mech_(mech), cap_(cap) {}

  void run(MechanismState state, const Rational& weight) {
    std::vector<int> owner(mech_.items(), kDiscarded);
    descend(state, weight, owner);
  }

  std::map<Allocation, Rational>& weights() { return weights_; }

 private:
  void descend(MechanismState& state, const Rational& weight, std::vector<int>& owner) {
    if (state.round == mech_.items()) {
      if (++leaves_ > cap_)
        throw std::length_error("exact-full support exceeds branch cap; use exact-compressed or monte-carlo");
      weights_[Allocation{owner}] += weight;
      return;
    }
    std::vector<int> options;
    mech_.candidates(state, options);
    const Rational share = weight / static_cast<long>(options.size());
    const int item = mech_.instance().item_at(state.round);
    for (int agent : options) {
      MechanismState next = state;
      OnlineMechanism::commit(next, agent);
      owner[item] = agent;
      descend(next, share, owner);
    }
    owner[item] = kDiscarded;
  }

  const OnlineMechanism& mech_;
  std::size_t cap_;
  std::size_t leaves_ = 0;
  std::map<Allocation, Rational> weights_;
};

}  // namespace detail

/// Exact distribution over allocations by enumerating every branch of the
/// decision tree. Ranking averages its n! deterministic runs.
inline AllocationDistribution evaluate_exact_full(const Instance& inst, const BidProfile& bids, MechanismKind kind,
                                                  const AdviceTape* tape = nullptr, const EngineConfig& cfg = {}) {
  cfg.validate();
  detail::require_ranking_size(kind, inst.agents());
  OnlineMechanism mech(kind, inst, bids, tape);
  detail::FullEnumerator enumerator(mech, cfg.branch_cap);
  if (mech.uses_priority()) {
    std::vector<int> priority(inst.agents());
    std::iota(priority.begin(), priority.end(), 0);
    const Rational weight(1, detail::factorial(inst.agents()));
    do {
      enumerator.run(MechanismState::initial(inst.agents(), priority), weight);
    } while (std::next_permutation(priority.begin(), priority.end()));
  } else {
    enumerator.run(MechanismState::initial(inst.agents()), Rational(1));
  }
  return AllocationDistribution::from_weights(enumerator.weights());
}

struct ExactResult {
  WelfareReport welfare;
  AssignmentMatrix matrix;
};

/// Exact welfare by propagating a distribution over observable histories
/// round by round. Every base rule sees history only through the count
/// vector (Balanced Like) or the served set (the others), so states with the
/// same projection are merged. Ranking is deterministic per priority order
/// and is averaged over all n! orders instead.
///
/// With `start`, evaluation resumes from that state: its counts seed the
/// history and only rounds from `start->round` on are played. A non-empty
/// `start->priority` pins Ranking to that single order.
inline ExactResult evaluate_exact_compressed(const Instance& inst, const BidProfile& bids, MechanismKind kind,
                                             const AdviceTape* tape = nullptr, const EngineConfig& cfg = {},
                                             const MechanismState* start = nullptr) {
  cfg.validate();
  const int n = inst.agents();
  const int m = inst.items();
  OnlineMechanism mech(kind, inst, bids, tape);
  MechanismState origin = start ? *start : MechanismState::initial(n);
  if (static_cast<int>(origin.counts.size()) != n || origin.round < 0 || origin.round > m)
    throw std::invalid_argument("start state does not fit instance");

  AssignmentMatrix p(n, m, Rational(0));
  Rational es = 0;
  std::vector<int> options;

  if (mech.uses_priority()) {
    std::vector<std::vector<int>> orders;
    if (!origin.priority.empty()) {
      orders.push_back(origin.priority);
    } else {
      detail::require_ranking_size(kind, n);
      std::vector<int> priority(n);
      std::iota(priority.begin(), priority.end(), 0);
      do orders.push_back(priority);
      while (std::next_permutation(priority.begin(), priority.end()));
    }
    Matrix<long> hits(n, m, 0);
    long served_total = 0;
    for (const auto& order : orders) {
      MechanismState s = origin;
      s.priority = order;
      while (s.round < m) {
        mech.candidates(s, options);
        const int agent = options.front();
        if (agent != kDiscarded) ++hits(agent, inst.item_at(s.round));
        OnlineMechanism::commit(s, agent);
      }
      for (int i = 0; i < n; ++i) served_total += s.served(i) ? 1 : 0;
    }
    const long runs = static_cast<long>(orders.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (hits(i, j)) p(i, j) = Rational(hits(i, j), runs);
    es = Rational(served_total, runs);
    es.canonicalize();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) p(i, j).canonicalize();
    return {welfare_from_matrix(inst, p, es), std::move(p)};
  }

  std::map<std::vector<int>, Rational> layer;
  {
    auto key = origin.counts;
    mech.project(key);
    layer[key] = 1;
  }
  for (int round = origin.round; round < m; ++round) {
    const int item = inst.item_at(round);
    std::map<std::vector<int>, Rational> next;
    for (const auto& [counts, prob] : layer) {
      MechanismState s{counts, round, {}};
      mech.candidates(s, options);
      const Rational share = prob / static_cast<long>(options.size());
      for (int agent : options) {
        auto key = counts;
        if (agent != kDiscarded) {
          p(agent, item) += share;
          ++key[agent];
        }
        mech.project(key);
        next[key] += share;
      }
      if (next.size() > cfg.state_cap) throw std::length_error("exact-compressed state space exceeds cap");
    }
    layer = std::move(next);
  }
  for (const auto& [counts, prob] : layer) {
    long served = 0;
    for (int c : counts) served += c > 0 ? 1 : 0;
    es += prob * served;
  }
  return {welfare_from_matrix(inst, p, es), std::move(p)};
}

/// Sample means with standard errors. `ew` is the smallest per-agent mean and
/// `ew_stderr` the standard error of that agent's mean.
struct MonteCarloReport {
  double es = 0, uw = 0, ew = 0;
  std::vector<double> per_agent;
  double es_stderr = 0, uw_stderr = 0, ew_stderr = 0;
  std::vector<double> per_agent_stderr;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct TrialOutcome {
  double matching = 0;
  double utilitarian = 0;
  std::vector<double> per_agent;
};

/// Per-trial generator seed derived from (seed, trial) only, so trials are
/// order-independent.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

struct Moments {
  double sum = 0, sumsq = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean(double n) const { return sum / n; }
  double stderr_of_mean(double n) const {
    if (n < 2) return 0;
    const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1));
    return std::sqrt(var / n);
  }
};

struct ChunkMoments {
  Moments es, uw;
  std::vector<Moments> agents;
};

// Runs `trial` for every index in [0, samples) on a fixed chunk partition and
// merges chunks in index order, so the result does not depend on threading.
inline MonteCarloReport run_trials(int agents, const EngineConfig& cfg,
                                   const std::function<void(std::mt19937_64&, TrialOutcome&)>& trial) {
  cfg.validate();
  if (cfg.samples == 0) throw std::invalid_argument("monte carlo needs samples > 0");
  const std::uint64_t samples = cfg.samples;
  const std::uint64_t chunks = std::min<std::uint64_t>(64, samples);
  std::vector<ChunkMoments> parts(chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    TrialOutcome out;
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      auto& part = parts[c];
      part.agents.assign(agents, Moments{});
      const std::uint64_t lo = samples * c / chunks, hi = samples * (c + 1) / chunks;
      for (std::uint64_t t = lo; t < hi; ++t) {
        std::mt19937_64 rng(trial_seed(cfg.seed, t));
        out.per_agent.assign(agents, 0.0);
        trial(rng, out);
        part.es.add(out.matching);
        part.uw.add(out.utilitarian);
        for (int i = 0; i < agents; ++i) part.agents[i].add(out.per_agent[i]);
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), chunks));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  ChunkMoments total;
  total.agents.assign(agents, Moments{});
  for (const auto& part : parts) {
    total.es.merge(part.es);
    total.uw.merge(part.uw);
    for (int i = 0; i < agents; ++i) total.agents[i].merge(part.agents[i]);
  }
  const double n = static_cast<double>(samples);
  MonteCarloReport r;
  r.samples = samples;
  r.seed = cfg.seed;
  r.es = total.es.mean(n);
  r.es_stderr = total.es.stderr_of_mean(n);
  r.uw = total.uw.mean(n);
  r.uw_stderr = total.uw.stderr_of_mean(n);
  for (int i = 0; i < agents; ++i) {
    r.per_agent.push_back(total.agents[i].mean(n));
    r.per_agent_stderr.push_back(total.agents[i].stderr_of_mean(n));
  }
  const auto low = std::min_element(r.per_agent.begin(), r.per_agent.end()) - r.per_agent.begin();
  r.ew = r.per_agent[low];
  r.ew_stderr = r.per_agent_stderr[low];
  return r;
}

inline int pick(std::mt19937_64& rng, const std::vector<int>& options) {
  if (options.size() == 1) return options.front();
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

}  // namespace detail

/// Seeded Monte Carlo estimate. Identical (seed, samples) give identical
/// output.
inline MonteCarloReport evaluate_monte_carlo(const Instance& inst, const BidProfile& bids, MechanismKind kind,
                                             const AdviceTape* tape, const EngineConfig& cfg) {
  OnlineMechanism mech(kind, inst, bids, tape);
  const int n = inst.agents();
  const int m = inst.items();
  Matrix<double> value(n, m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) value(i, j) = to_double(inst.utility(i, j));
  return detail::run_trials(n, cfg, [&](std::mt19937_64& rng, TrialOutcome& out) {
    MechanismState s = MechanismState::initial(n);
    if (mech.uses_priority()) {
      s.priority.resize(n);
      std::iota(s.priority.begin(), s.priority.end(), 0);
      std::shuffle(s.priority.begin(), s.priority.end(), rng);
    }
    std::vector<int> options;
    while (s.round < m) {
      mech.candidates(s, options);
      const int agent = detail::pick(rng, options);
      if (agent != kDiscarded) {
        const double v = value(agent, inst.item_at(s.round));
        out.per_agent[agent] += v;
        out.utilitarian += v;
      }
      OnlineMechanism::commit(s, agent);
    }
    out.matching = 0;
    for (int i = 0; i < n; ++i) out.matching += s.served(i) ? 1 : 0;
    out.utilitarian = std::accumulate(out.per_agent.begin(), out.per_agent.end(), 0.0);
  });
}

/// Result of any engine, exact or sampled.
struct Evaluation {
  Engine engine = Engine::ExactCompressed;
  std::optional<WelfareReport> exact;
  std::optional<MonteCarloReport> sampled;

  double value(Objective o) const {
    if (exact) return to_double(objective_value(*exact, o));
    switch (o) {
      case Objective::ES: return sampled->es;
      case Objective::UW: return sampled->uw;
      case Objective::EW: return sampled->ew;
    }
    return 0;
  }
  double stderr_of(Objective o) const {
    if (exact) return 0;
    switch (o) {
      case Objective::ES: return sampled->es_stderr;
      case Objective::UW: return sampled->uw_stderr;
      case Objective::EW: return sampled->ew_stderr;
    }
    return 0;
  }
};

inline Evaluation evaluate(const Instance& inst, const BidProfile& bids, MechanismKind kind, const AdviceTape* tape,
                           const EngineConfig& cfg) {
  Evaluation e;
  e.engine = cfg.engine;
  switch (cfg.engine) {
    case Engine::ExactFull: e.exact = welfare_of_distribution(inst, evaluate_exact_full(inst, bids, kind, tape, cfg)); break;
    case Engine::ExactCompressed: e.exact = evaluate_exact_compressed(inst, bids, kind, tape, cfg).welfare; break;
    case Engine::MonteCarlo: e.sampled = evaluate_monte_carlo(inst, bids, kind, tape, cfg); break;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Adaptive adversary against Like: the first n/2 items are liked by everyone;
// after they are placed, each of the last n/2 items is liked by exactly one
// of n/2 target agents chosen to include everyone already served.

namespace detail {

inline Matrix<char> adversary_prefix_likes(int n) {
  Matrix<char> likes(n, n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n / 2; ++j) likes(i, j) = 1;
  return likes;
}

inline void complete_adversary(BidIndex& idx, int n, const std::vector<int>& counts) {
  const auto targets = adversary_targets(n, counts);
  for (int t = 0; t < n / 2; ++t) idx.set_single_liker(n / 2 + t, targets[t]);
}

inline void adaptive_descend(MechanismKind kind, const BidIndex& idx, int n, MechanismState& s, const Rational& weight,
                             Rational& es, bool completed) {
  if (s.round == n / 2 && !completed) {
    BidIndex full = idx;
    complete_adversary(full, n, s.counts);
    adaptive_descend(kind, full, n, s, weight, es, true);
    return;
  }
  if (s.round == n) {
    long served = 0;
    for (int c : s.counts) served += c > 0;
    es += weight * served;
    return;
  }
  std::vector<int> options;
  rules::for_kind(kind, idx, s, s.round, options);
  const Rational share = weight / static_cast<long>(options.size());
  for (int agent : options) {
    MechanismState next = s;
    OnlineMechanism::commit(next, agent);
    adaptive_descend(kind, idx, n, next, share, es, completed);
  }
}

}  // namespace detail

/// Exact expected matching size against the adaptive adversary (n <= 8).
inline Rational adaptive_adversary_es_exact(MechanismKind kind, int n) {
  if (n < 2 || n % 2 != 0 || n > 8) throw std::invalid_argument("exact adaptive adversary needs even n in [2, 8]");
  BidIndex idx(detail::adversary_prefix_likes(n));
  Rational es = 0;
  if (kind == MechanismKind::Ranking) {
    std::vector<int> priority(n);
    std::iota(priority.begin(), priority.end(), 0);
    const Rational weight(1, detail::factorial(n));
    do {
      auto s = MechanismState::initial(n, priority);
      detail::adaptive_descend(kind, idx, n, s, weight, es, false);
    } while (std::next_permutation(priority.begin(), priority.end()));
  } else {
    auto s = MechanismState::initial(n);
    detail::adaptive_descend(kind, idx, n, s, Rational(1), es, false);
  }
  return es;
}

/// Monte Carlo against the adaptive adversary. Utilities are those of the
/// instance the adversary commits to in each trial.
inline MonteCarloReport adaptive_adversary_monte_carlo(MechanismKind kind, int n, const EngineConfig& cfg) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("adaptive adversary needs an even n >= 2");
  const BidIndex prefix(detail::adversary_prefix_likes(n));
  return detail::run_trials(n, cfg, [&](std::mt19937_64& rng, TrialOutcome& out) {
    BidIndex idx = prefix;
    MechanismState s = MechanismState::initial(n);
    if (kind == MechanismKind::Ranking) {
      s.priority.resize(n);
      std::iota(s.priority.begin(), s.priority.end(), 0);
      std::shuffle(s.priority.begin(), s.priority.end(), rng);
    }
    std::vector<int> options;
    while (s.round < n) {
      if (s.round == n / 2) detail::complete_adversary(idx, n, s.counts);
      rules::for_kind(kind, idx, s, s.round, options);
      const int agent = detail::pick(rng, options);
      if (agent != kDiscarded && idx.likes(agent, s.round)) out.per_agent[agent] += 1;
      OnlineMechanism::commit(s, agent);
    }
    out.matching = 0;
    for (int i = 0; i < n; ++i) out.matching += s.served(i) ? 1 : 0;
    out.utilitarian = std::accumulate(out.per_agent.begin(), out.per_agent.end(), 0.0);
  });
}

}  // namespace ofd
