#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mcc/model.hpp"

namespace mcc {

/// A (requiring component, service) pair.
struct Requirement {
  std::string client;
  std::string service;

  std::string str() const { return client + " -> " + service; }
  friend auto operator<=>(const Requirement&, const Requirement&) = default;
};

struct MayEdge {
  std::string client;
  std::string service;
  std::vector<std::string> providers;  // >= 2, sorted
  friend bool operator==(const MayEdge&, const MayEdge&) = default;
};

/// Must/may connection graph over everything reachable from the pinned components.
/// `must`, `may` and `unsatisfiable` partition the requirement pairs of reachable components.
struct ConnectionCandidates {
  std::set<std::string> pinned;
  std::set<std::string> reachable;
  std::vector<Connection> must;
  std::vector<MayEdge> may;
  std::vector<Requirement> unsatisfiable;
  /// Compatible providers of every reachable requirement pair, sorted by name.
  std::map<Requirement, std::vector<std::string>> domains;

  const std::vector<std::string>& providers(const Requirement& r) const;
  /// Requirement pairs of one component, in service order.
  std::vector<Requirement> requirements_of(const std::string& component) const;
};

/// Throws ModelError if a pinned component is unknown.
ConnectionCandidates connection_candidates(const SoftwareModel& software, const std::set<std::string>& pinned);

/// Number of complete connection assignments (providers pulled in lazily) that
/// honour the interfaces' max_clients limits.
std::uint64_t count_solutions(const ConnectionCandidates& candidates, const ServiceRepository& services);

/// One edge per line: `must c1 -> s -> c2`, `may c1 -> s -> p1 | p2`, `unsatisfiable c1 -> s`.
std::string render_edge_list(const ConnectionCandidates& candidates);

/// Graphviz rendering: must edges solid, may edges dashed.
std::string render_dot(const ConnectionCandidates& candidates);

}  // namespace mcc
