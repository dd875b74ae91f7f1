#include "mcc/deps.hpp"

#include <deque>
#include <sstream>

namespace mcc {

const std::vector<std::string>& ConnectionCandidates::providers(const Requirement& r) const {
  static const std::vector<std::string> none;
  auto it = domains.find(r);
  return it == domains.end() ? none : it->second;
}

std::vector<Requirement> ConnectionCandidates::requirements_of(const std::string& component) const {
  std::vector<Requirement> out;
  for (auto it = domains.lower_bound({component, ""}); it != domains.end() && it->first.client == component; ++it)
    out.push_back(it->first);
  return out;
}

ConnectionCandidates connection_candidates(const SoftwareModel& software, const std::set<std::string>& pinned) {
  ConnectionCandidates out;
  out.pinned = pinned;
  std::deque<std::string> queue;
  for (const auto& p : pinned) {
    software.contract(p);
    if (out.reachable.insert(p).second) queue.push_back(p);
  }
  while (!queue.empty()) {
    std::string c = queue.front();
    queue.pop_front();
    const Contract& client = software.contract(c);
    for (const auto& s : client.required) {
      auto& dom = out.domains[{c, s}];
      for (const auto& [name, provider] : software.contracts) {
        if (!compatible_provider(client, provider, s)) continue;
        dom.push_back(name);
        if (out.reachable.insert(name).second) queue.push_back(name);
      }
    }
  }
  for (const auto& [req, dom] : out.domains) {
    if (dom.empty()) {
      out.unsatisfiable.push_back(req);
    } else if (dom.size() == 1) {
      out.must.push_back({req.client, req.service, dom.front()});
    } else {
      out.may.push_back({req.client, req.service, dom});
    }
  }
  return out;
}

namespace {

struct CountState {
  std::set<std::string> selected;
  std::set<Requirement> open;
  std::map<std::pair<std::string, std::string>, int> clients;  // (provider, service)
};

std::uint64_t count_from(const ConnectionCandidates& cc, const ServiceRepository& services, const CountState& s) {
  if (s.open.empty()) return 1;
  Requirement req = *s.open.begin();
  std::uint64_t total = 0;
  for (const auto& p : cc.providers(req)) {
    auto limit = services.at(req.service).max_clients;
    auto key = std::make_pair(p, req.service);
    auto used = s.clients.count(key) ? s.clients.at(key) : 0;
    if (limit && used >= *limit) continue;
    CountState next = s;
    next.open.erase(req);
    next.clients[key] = used + 1;
    if (next.selected.insert(p).second)
      for (const auto& r : cc.requirements_of(p)) next.open.insert(r);
    total += count_from(cc, services, next);
  }
  return total;
}

}  // namespace

std::uint64_t count_solutions(const ConnectionCandidates& candidates, const ServiceRepository& services) {
  CountState init;
  init.selected = candidates.pinned;
  for (const auto& p : candidates.pinned)
    for (const auto& r : candidates.requirements_of(p)) init.open.insert(r);
  return count_from(candidates, services, init);
}

std::string render_edge_list(const ConnectionCandidates& candidates) {
  std::ostringstream out;
  for (const auto& c : candidates.must) out << "must " << c.str() << "\n";
  for (const auto& m : candidates.may) {
    out << "may " << m.client << " -> " << m.service << " -> ";
    for (std::size_t i = 0; i < m.providers.size(); ++i) out << (i ? " | " : "") << m.providers[i];
    out << "\n";
  }
  for (const auto& u : candidates.unsatisfiable) out << "unsatisfiable " << u.str() << "\n";
  return out.str();
}

std::string render_dot(const ConnectionCandidates& candidates) {
  std::ostringstream out;
  out << "digraph dependencies {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const auto& c : candidates.reachable) out << "  \"" << c << "\";\n";
  for (const auto& c : candidates.must)
    out << "  \"" << c.client << "\" -> \"" << c.provider << "\" [label=\"" << c.service << "\", style=solid];\n";
  for (const auto& m : candidates.may)
    for (const auto& p : m.providers)
      out << "  \"" << m.client << "\" -> \"" << p << "\" [label=\"" << m.service << "\", style=dashed];\n";
  out << "}\n";
  return out.str();
}

}  // namespace mcc
