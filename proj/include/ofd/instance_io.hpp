#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ofd/advice.hpp"
#include "ofd/core.hpp"

namespace ofd {

using json = nlohmann::json;

/// Integral rationals become JSON integers, all others "p/q" strings.
inline json rational_to_json(const Rational& r) {
  if (r.get_den() == 1 && r.get_num().fits_slong_p()) return json(r.get_num().get_si());
  return json(to_string(r));
}

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("utility must be an integer or a \"p/q\" string");
}

inline json instance_to_json(const Instance& inst) {
  json u = json::array();
  for (int i = 0; i < inst.agents(); ++i) {
    json row = json::array();
    for (int j = 0; j < inst.items(); ++j) row.push_back(rational_to_json(inst.utility(i, j)));
    u.push_back(std::move(row));
  }
  json out = {{"n", inst.agents()}, {"m", inst.items()}, {"utilities", u}, {"order", inst.order()}};
  if (!inst.name().empty()) out["name"] = inst.name();
  return out;
}

inline Instance instance_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  const auto& rows = j.at("utilities");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw std::invalid_argument("utilities must have n rows");
  Matrix<Rational> u(n, m);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != m)
      throw std::invalid_argument("utility row " + std::to_string(i) + " must have m entries");
    for (int jj = 0; jj < m; ++jj) u(i, jj) = rational_from_json(rows[i][jj]);
  }
  std::vector<int> order;
  if (j.contains("order")) order = j.at("order").get<std::vector<int>>();
  return Instance(std::move(u), std::move(order), j.value("name", std::string()));
}

inline Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return instance_from_json(json::parse(in));
}

inline void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_json(inst).dump(2) << "\n";
}

/// Per-item owner; discarded items are null.
inline json allocation_to_json(const Allocation& a) {
  json out = json::array();
  for (int owner : a.owner) out.push_back(owner == kDiscarded ? json(nullptr) : json(owner));
  return out;
}

inline Allocation allocation_from_json(const json& j) {
  Allocation a;
  for (const auto& v : j) a.owner.push_back(v.is_null() ? kDiscarded : v.get<int>());
  return a;
}

inline json tape_to_json(const AdviceTape& tape) {
  json pairs = json::array();
  for (const auto& a : tape.decoded) pairs.push_back({a.round, a.agent});
  return {{"hex", tape.hex()},
          {"bits", tape.declared_bit_budget},
          {"factorial_bits", tape.factorial_bits},
          {"prefix_rounds", tape.layout.prefix_rounds},
          {"distinct_agents", tape.layout.distinct_agents},
          {"advice", pairs}};
}

}  // namespace ofd
