// Brute-force enumeration of configurations, independent of the constraint store.
#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "mcc/model.hpp"

namespace brute {

/// Every (C, SC, M) with C a superset of `pinned` in which each selected component is
/// pinned or reached through a chosen connection, each requirement has exactly one
/// compatible selected provider, max_clients holds and every task sits on a resource of
/// its type. Priorities are left empty.
inline std::vector<mcc::Configuration> structures(const mcc::SoftwareModel& sw, const mcc::PlatformModel& pf,
                                                  const std::set<std::string>& pinned) {
  std::vector<std::string> names;
  for (const auto& [n, c] : sw.contracts) names.push_back(n);
  std::vector<mcc::Configuration> out;

  for (std::uint64_t mask = 0; mask < (1ull << names.size()); ++mask) {
    std::set<std::string> sel;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (mask >> i & 1) sel.insert(names[i]);
    if (!std::includes(sel.begin(), sel.end(), pinned.begin(), pinned.end())) continue;

    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::vector<std::string>> options;
    for (const auto& c : sel)
      for (const auto& s : sw.contract(c).required) {
        std::vector<std::string> ps;
        for (const auto& p : sel)
          if (mcc::compatible_provider(sw.contract(c), sw.contract(p), s)) ps.push_back(p);
        pairs.push_back({c, s});
        options.push_back(ps);
      }
    if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) continue;

    std::vector<mcc::TaskRef> tasks = mcc::tasks_of(sw, sel);
    std::vector<std::vector<std::string>> res;
    for (const auto& t : tasks) {
      std::vector<std::string> rs;
      for (const auto& r : pf.resources)
        if (r.type == t.step->resource_type) rs.push_back(r.name);
      res.push_back(rs);
    }
    if (std::any_of(res.begin(), res.end(), [](const auto& o) { return o.empty(); })) continue;

    std::vector<std::size_t> pick(pairs.size(), 0);
    for (bool more = true; more;) {
      mcc::Configuration cfg;
      cfg.components = sel;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        cfg.connections.insert({pairs[i].first, pairs[i].second, options[i][pick[i]]});

      std::set<std::string> reached = pinned;
      for (bool grew = true; grew;) {
        grew = false;
        for (const auto& c : cfg.connections)
          if (reached.count(c.client) && reached.insert(c.provider).second) grew = true;
      }
      bool ok = reached == sel;
      std::map<std::pair<std::string, std::string>, int> clients;
      for (const auto& c : cfg.connections) ++clients[{c.provider, c.service}];
      for (const auto& [k, n] : clients) {
        auto mc = sw.services.at(k.second).max_clients;
        if (mc && n > *mc) ok = false;
      }

      if (ok) {
        std::vector<std::size_t> rp(tasks.size(), 0);
        for (bool more_m = true; more_m;) {
          mcc::Configuration m = cfg;
          for (std::size_t i = 0; i < tasks.size(); ++i) m.mapping[tasks[i].id] = res[i][rp[i]];
          out.push_back(std::move(m));
          std::size_t i = 0;
          for (; i < tasks.size(); ++i) {
            if (++rp[i] < res[i].size()) break;
            rp[i] = 0;
          }
          more_m = i < tasks.size();
        }
      }

      std::size_t i = 0;
      for (; i < pairs.size(); ++i) {
        if (++pick[i] < options[i].size()) break;
        pick[i] = 0;
      }
      more = i < pairs.size();
    }
  }
  return out;
}

/// Calls `f` with every priority order of the structure's threads; stops when it returns true.
inline bool any_order(const mcc::SoftwareModel& sw, const mcc::Configuration& s,
                      const std::function<bool(const mcc::Configuration&)>& f) {
  mcc::Configuration cfg = s;
  cfg.priorities = mcc::threads_of(sw, s.components);
  std::sort(cfg.priorities.begin(), cfg.priorities.end());
  do {
    if (f(cfg)) return true;
  } while (std::next_permutation(cfg.priorities.begin(), cfg.priorities.end()));
  return false;
}

}  // namespace brute
