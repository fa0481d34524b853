#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ofd/core.hpp"
#include "ofd/offline.hpp"

namespace ofd {

/// One advised decision: in `round`, give the arriving item to `agent`.
struct Advice {
  int round = 0;
  int agent = 0;
  bool operator==(const Advice&) const = default;
};

/// Tape layout. A prefix tape advises rounds 0..k-1 and stores only the
/// agent code; otherwise an m-bit round mask (MSB = round 0) comes first.
/// Distinct agents are stored as a lexicographic rank of a k-permutation of
/// n; repeated agents as a base-n number.
struct TapeLayout {
  bool prefix_rounds = true;
  bool distinct_agents = true;
  bool operator==(const TapeLayout&) const = default;
};

struct AdviceTape {
  std::vector<bool> bits;
  std::vector<Advice> decoded;
  std::size_t declared_bit_budget = 0;
  TapeLayout layout;
  std::size_t factorial_bits = 0;  // ceil(log2 k!) for comparison

  std::size_t k() const { return decoded.size(); }

  /// Number of distinct advised agents.
  int advised_agents() const {
    std::set<int> s;
    for (const auto& a : decoded) s.insert(a.agent);
    return static_cast<int>(s.size());
  }

  /// Bits packed MSB-first into hex digits, zero-padded on the right.
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bits.size(); i += 4) {
      int nibble = 0;
      for (std::size_t b = 0; b < 4; ++b) nibble = (nibble << 1) | (i + b < bits.size() && bits[i + b] ? 1 : 0);
      out.push_back(digits[nibble]);
    }
    return out;
  }
};

inline Integer falling_factorial(int n, int k) {
  Integer r = 1;
  for (int t = 0; t < k; ++t) r *= n - t;
  return r;
}

/// ceil(log2 x) for x >= 1.
inline std::size_t ceil_log2(const Integer& x) {
  if (x <= 1) return 0;
  Integer y = x - 1;
  return mpz_sizeinbase(y.get_mpz_t(), 2);
}

inline std::vector<bool> parse_hex_bits(const std::string& hex, std::size_t nbits) {
  std::vector<bool> bits;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'a' && c <= 'f')
      v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      v = c - 'A' + 10;
    else
      throw std::invalid_argument("bad hex digit in tape");
    for (int b = 3; b >= 0; --b) bits.push_back((v >> b) & 1);
  }
  if (bits.size() < nbits) throw std::invalid_argument("hex tape shorter than declared bit budget");
  for (std::size_t i = nbits; i < bits.size(); ++i)
    if (bits[i]) throw std::invalid_argument("nonzero padding in hex tape");
  bits.resize(nbits);
  return bits;
}

namespace detail {

inline void append_bits(std::vector<bool>& out, const Integer& value, std::size_t width) {
  for (std::size_t b = width; b-- > 0;) out.push_back(mpz_tstbit(value.get_mpz_t(), b) != 0);
}

inline Integer read_bits(const std::vector<bool>& bits, std::size_t from, std::size_t width) {
  Integer v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    v *= 2;
    if (bits.at(from + i)) v += 1;
  }
  return v;
}

inline Integer agent_code_capacity(int n, int k, bool distinct) {
  if (distinct) return falling_factorial(n, k);
  Integer r = 1;
  for (int t = 0; t < k; ++t) r *= n;
  return r;
}

inline Integer encode_agents(const std::vector<int>& agents, int n, bool distinct) {
  Integer value = 0;
  if (!distinct) {
    for (int a : agents) {
      if (a < 0 || a >= n) throw std::invalid_argument("advised agent out of range");
      value = value * n + a;
    }
    return value;
  }
  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  for (std::size_t t = 0; t < agents.size(); ++t) {
    auto it = std::find(remaining.begin(), remaining.end(), agents[t]);
    if (agents[t] < 0 || agents[t] >= n) throw std::invalid_argument("advised agent out of range");
    if (it == remaining.end()) throw std::invalid_argument("duplicate advised agent");
    value = value * static_cast<long>(remaining.size()) + static_cast<long>(it - remaining.begin());
    remaining.erase(it);
  }
  return value;
}

inline std::vector<int> decode_agents(Integer value, int n, int k, bool distinct) {
  if (value < 0 || value >= agent_code_capacity(n, k, distinct))
    throw std::out_of_range("advice code value out of range");
  std::vector<long> digits(k);
  for (int t = k - 1; t >= 0; --t) {
    const long radix = distinct ? n - t : n;
    Integer q = value / radix;
    digits[t] = Integer(value - q * radix).get_si();
    value = q;
  }
  std::vector<int> agents;
  if (!distinct) {
    for (long d : digits) agents.push_back(static_cast<int>(d));
    return agents;
  }
  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  for (long d : digits) {
    agents.push_back(remaining[d]);
    remaining.erase(remaining.begin() + d);
  }
  return agents;
}

inline std::size_t factorial_bits(int k) { return ceil_log2(falling_factorial(k, k)); }

}  // namespace detail

/// Encodes advice for rounds 0..k-1 given k distinct agents out of n. The code
/// is the lexicographic rank of the choice sequence among all k-permutations,
/// stored in ceil(log2(n!/(n-k)!)) bits.
inline AdviceTape encode_advice(const std::vector<int>& agents, int n) {
  const int k = static_cast<int>(agents.size());
  if (k > n) throw std::invalid_argument("more distinct advised agents than agents");
  AdviceTape tape;
  tape.layout = {true, true};
  const std::size_t width = ceil_log2(falling_factorial(n, k));
  detail::append_bits(tape.bits, detail::encode_agents(agents, n, true), width);
  for (int t = 0; t < k; ++t) tape.decoded.push_back({t, agents[t]});
  tape.declared_bit_budget = width;
  tape.factorial_bits = detail::factorial_bits(k);
  return tape;
}

/// Inverse of encode_advice.
inline std::vector<int> decode_advice(const AdviceTape& tape, int n, int k) {
  const std::size_t width = ceil_log2(falling_factorial(n, k));
  if (tape.bits.size() != width) throw std::invalid_argument("tape length does not match n and k");
  return detail::decode_agents(detail::read_bits(tape.bits, 0, width), n, k, true);
}

/// Encodes advice for arbitrary rounds; `advice` must be sorted by round.
inline AdviceTape encode_advice(const std::vector<Advice>& advice, int n, int m, TapeLayout layout) {
  AdviceTape tape;
  tape.layout = layout;
  std::vector<int> agents;
  int previous = -1;
  for (const auto& a : advice) {
    if (a.round <= previous || a.round >= m) throw std::invalid_argument("advice rounds must be increasing and < m");
    previous = a.round;
    agents.push_back(a.agent);
  }
  const int k = static_cast<int>(advice.size());
  if (layout.prefix_rounds) {
    for (int t = 0; t < k; ++t)
      if (advice[t].round != t) throw std::invalid_argument("prefix layout requires rounds 0..k-1");
  } else {
    std::vector<bool> mask(m, false);
    for (const auto& a : advice) mask[a.round] = true;
    tape.bits.insert(tape.bits.end(), mask.begin(), mask.end());
  }
  const std::size_t width = ceil_log2(detail::agent_code_capacity(n, k, layout.distinct_agents));
  detail::append_bits(tape.bits, detail::encode_agents(agents, n, layout.distinct_agents), width);
  tape.decoded = advice;
  tape.declared_bit_budget = tape.bits.size();
  tape.factorial_bits = detail::factorial_bits(k);
  return tape;
}

/// Decodes a tape of either layout. `k` is only consulted for prefix tapes.
inline AdviceTape decode_tape(const std::vector<bool>& bits, int n, int m, TapeLayout layout, int k = 0) {
  std::vector<int> rounds;
  std::size_t offset = 0;
  if (layout.prefix_rounds) {
    for (int t = 0; t < k; ++t) rounds.push_back(t);
  } else {
    if (bits.size() < static_cast<std::size_t>(m)) throw std::invalid_argument("tape shorter than round mask");
    for (int r = 0; r < m; ++r)
      if (bits[r]) rounds.push_back(r);
    offset = m;
  }
  const int count = static_cast<int>(rounds.size());
  const std::size_t width = ceil_log2(detail::agent_code_capacity(n, count, layout.distinct_agents));
  if (bits.size() != offset + width) throw std::invalid_argument("tape length does not match layout");
  auto agents = detail::decode_agents(detail::read_bits(bits, offset, width), n, count, layout.distinct_agents);
  AdviceTape tape;
  tape.bits = bits;
  tape.layout = layout;
  for (int t = 0; t < count; ++t) tape.decoded.push_back({rounds[t], agents[t]});
  tape.declared_bit_budget = bits.size();
  tape.factorial_bits = detail::factorial_bits(count);
  return tape;
}

/// Decodes a hex tape (as printed by AdviceTape::hex) of the given layout.
inline AdviceTape tape_from_hex(const std::string& hex, int n, int m, TapeLayout layout, int k = 0) {
  std::size_t nbits = 0;
  int count = k;
  if (!layout.prefix_rounds) {
    const auto raw = parse_hex_bits(hex, hex.size() * 4);
    if (raw.size() < static_cast<std::size_t>(m)) throw std::invalid_argument("tape shorter than round mask");
    count = static_cast<int>(std::count(raw.begin(), raw.begin() + m, true));
    nbits = m;
  }
  nbits += ceil_log2(detail::agent_code_capacity(n, count, layout.distinct_agents));
  return decode_tape(parse_hex_bits(hex, nbits), n, m, layout, k);
}

enum class UtilityRegime { Binary, General };

inline const char* to_string(UtilityRegime r) { return r == UtilityRegime::Binary ? "binary" : "general"; }

/// Which oracle is consulted, for how many items, and how many distinct
/// agents it ends up naming (`l`).
struct OraclePolicy {
  Objective objective = Objective::ES;
  UtilityRegime regime = UtilityRegime::Binary;
  int k = 0;
  int l = 0;
};

namespace detail {

inline AdviceTape tape_for(const std::vector<Advice>& advice, int n, int m, bool distinct) {
  bool prefix = true;
  for (std::size_t t = 0; t < advice.size(); ++t) prefix = prefix && advice[t].round == static_cast<int>(t);
  if (prefix && distinct) {
    std::vector<int> agents;
    for (const auto& a : advice) agents.push_back(a.agent);
    return encode_advice(agents, n);
  }
  return encode_advice(advice, n, m, {prefix, distinct});
}

inline void check_k(const Instance& inst, int k) {
  if (k < 0 || k > inst.items()) throw std::invalid_argument("advised item count outside [0, m]");
}

// Distinct agents for the first rounds of an egalitarian-optimal allocation
// whose owners have not been advised yet.
inline AdviceTape distinct_owner_advice(const Instance& inst, int k) {
  const auto best = offline_ew(inst);
  if (sgn(best.value) == 0) throw std::domain_error("instance admits no perfect allocation");
  std::vector<Advice> advice;
  std::set<int> used;
  for (int r = 0; r < inst.items() && static_cast<int>(advice.size()) < k; ++r) {
    const int agent = best.witness.owner[inst.item_at(r)];
    if (agent != kDiscarded && used.insert(agent).second) advice.push_back({r, agent});
  }
  return tape_for(advice, inst.agents(), inst.items(), true);
}

}  // namespace detail

/// Expected-matching-size oracle: takes the lexicographically smallest
/// perfect allocation and advises its agent for each of the first k items.
inline AdviceTape oracle_es(const Instance& inst, int k) {
  detail::check_k(inst, k);
  if (k == 0) return encode_advice(std::vector<int>{}, inst.agents());
  auto owner = lex_min_maximum_matching(positive_edges(inst.utilities()), inst.order());
  if (matched_count(owner) != inst.agents()) throw std::domain_error("instance admits no perfect allocation");
  std::vector<Advice> advice;
  for (int r = 0; r < k; ++r) {
    const int agent = owner[inst.item_at(r)];
    if (agent != kDiscarded) advice.push_back({r, agent});
  }
  return detail::tape_for(advice, inst.agents(), inst.items(), true);
}

/// Utilitarian oracle: the k items with the largest top utility (ties to the
/// lower item index), each advised to its lowest-index top bidder.
inline AdviceTape oracle_uw(const Instance& inst, int k) {
  detail::check_k(inst, k);
  const int m = inst.items();
  std::vector<int> items(m);
  std::vector<Rational> best(m, Rational(0));
  std::vector<int> argmax(m, 0);
  for (int j = 0; j < m; ++j) {
    items[j] = j;
    for (int i = 0; i < inst.agents(); ++i)
      if (inst.utility(i, j) > best[j]) {
        best[j] = inst.utility(i, j);
        argmax[j] = i;
      }
  }
  std::stable_sort(items.begin(), items.end(), [&](int a, int b) { return best[a] > best[b]; });
  std::vector<int> round_of(m);
  for (int r = 0; r < m; ++r) round_of[inst.item_at(r)] = r;
  std::vector<Advice> advice;
  for (int t = 0; t < k; ++t) advice.push_back({round_of[items[t]], argmax[items[t]]});
  std::sort(advice.begin(), advice.end(), [](const Advice& a, const Advice& b) { return a.round < b.round; });
  return encode_advice(advice, inst.agents(), m, {false, false});
}

/// Egalitarian oracle.
///
/// Binary regime: up to k distinct agents, scanning rounds in order and
/// advising each round's owner in an optimal egalitarian allocation unless
/// that owner was already advised (for m == n this is the first k items of
/// the lexicographically smallest perfect matching). General regime: the first k items of an
/// optimal offline egalitarian allocation, each advised to its owner there.
inline AdviceTape oracle_ew(const Instance& inst, int k, UtilityRegime regime) {
  detail::check_k(inst, k);
  if (regime == UtilityRegime::Binary) {
    if (!inst.is_binary()) throw std::invalid_argument("binary oracle on non-binary instance");
    if (k == 0) return encode_advice(std::vector<int>{}, inst.agents());
    return detail::distinct_owner_advice(inst, k);
  }
  if (k == 0) return encode_advice(std::vector<int>{}, inst.agents());
  const auto best = offline_ew(inst);
  std::vector<Advice> advice;
  std::set<int> used;
  bool distinct = true;
  for (int r = 0; r < k; ++r) {
    const int agent = best.witness.owner[inst.item_at(r)];
    distinct = distinct && used.insert(agent).second;
    advice.push_back({r, agent});
  }
  return detail::tape_for(advice, inst.agents(), inst.items(), distinct);
}

/// Tape for a policy; fills in `policy.l` from the result.
inline AdviceTape oracle_tape(const Instance& inst, OraclePolicy& policy) {
  AdviceTape tape;
  switch (policy.objective) {
    case Objective::ES: tape = oracle_es(inst, policy.k); break;
    case Objective::UW:
      tape = policy.regime == UtilityRegime::Binary ? oracle_ew(inst, policy.k, UtilityRegime::Binary)
                                                    : oracle_uw(inst, policy.k);
      break;
    case Objective::EW: tape = oracle_ew(inst, policy.k, policy.regime); break;
  }
  policy.l = tape.advised_agents();
  return tape;
}

}  // namespace ofd
