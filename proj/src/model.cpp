#include "mcc/model.hpp"

#include <algorithm>
#include <sstream>

namespace mcc {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

/// Splits on " -> " separators.
std::vector<std::string> arrow_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto p = line.find("->", start);
    out.push_back(trim(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 2;
  }
  return out;
}

}  // namespace

QualifiedName QualifiedName::parse(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size())
    throw ModelError("expected Component.name, got '" + std::string(text) + "'");
  return {std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

const Resource* PlatformModel::find(std::string_view name) const {
  for (const auto& r : resources)
    if (r.name == name) return &r;
  return nullptr;
}

const std::string* Configuration::provider_of(std::string_view client, std::string_view service) const {
  for (const auto& c : connections)
    if (c.client == client && c.service == service) return &c.provider;
  return nullptr;
}

std::optional<std::size_t> Configuration::rank_of(const ThreadId& t) const {
  auto it = std::find(priorities.begin(), priorities.end(), t);
  if (it == priorities.end()) return std::nullopt;
  return static_cast<std::size_t>(it - priorities.begin());
}

std::string condition_label(Condition c) {
  switch (c) {
    case Condition::ConnectionTyping: return "condition 1";
    case Condition::UniqueProvider: return "condition 2";
    case Condition::MappingType: return "condition 3";
    case Condition::ThreadPriority: return "condition 4";
    case Condition::MaxClients: return "max_clients";
    case Condition::StrictOrder: return "strict_order";
  }
  return "?";
}

bool compatible_provider(const Contract& client, const Contract& provider, std::string_view service) {
  if (client.component == provider.component) return false;
  if (!client.requires_service(service) || !provider.provides_service(service)) return false;
  for (const auto& t : client.threads) {
    for (const auto& s : t.steps) {
      const auto* call = std::get_if<CallStep>(&s);
      if (!call || call->target.service != service) continue;
      const Thread* entry = provider.entry_thread(call->target);
      if (!entry || std::get<RpcEntry>(entry->activation).method.args != call->target.args) return false;
    }
  }
  return true;
}

std::vector<ThreadId> threads_of(const SoftwareModel& software, const std::set<std::string>& components) {
  std::vector<ThreadId> out;
  for (const auto& c : components)
    for (const auto& t : software.contract(c).threads) out.push_back({c, t.name});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TaskRef> tasks_of(const SoftwareModel& software, const std::set<std::string>& components) {
  std::vector<TaskRef> out;
  for (const auto& c : components)
    for (const auto& t : software.contract(c).threads)
      for (const auto& s : t.steps)
        if (const auto* task = std::get_if<TaskStep>(&s)) out.push_back({{c, task->name}, task});
  std::sort(out.begin(), out.end(), [](const TaskRef& a, const TaskRef& b) { return a.id < b.id; });
  return out;
}

std::vector<Violation> check_well_formed(const Configuration& cfg, const SoftwareModel& software,
                                         const PlatformModel& platform) {
  std::vector<Violation> out;
  auto add = [&](Condition c, std::string detail) { out.push_back({c, std::move(detail)}); };

  for (const auto& c : cfg.components) software.contract(c);

  // Conditions 1 and 2, max_clients.
  std::map<std::pair<std::string, std::string>, std::set<std::string>> clients_of;  // (provider, service)
  std::map<std::pair<std::string, std::string>, int> providers_per_pair;            // (client, service)
  for (const auto& conn : cfg.connections) {
    const Contract& client = software.contract(conn.client);
    const Contract& provider = software.contract(conn.provider);
    if (!software.services.count(conn.service)) throw ModelError("unknown service " + conn.service);
    if (!cfg.components.count(conn.client) || !cfg.components.count(conn.provider)) {
      add(Condition::ConnectionTyping, conn.str() + " connects an unselected component");
    } else if (!compatible_provider(client, provider, conn.service)) {
      add(Condition::ConnectionTyping,
          conn.str() + " is not a valid connection (" + conn.client + " must require and " + conn.provider +
              " must offer " + conn.service + " with matching methods)");
    }
    clients_of[{conn.provider, conn.service}].insert(conn.client);
    ++providers_per_pair[{conn.client, conn.service}];
  }
  for (const auto& c : cfg.components) {
    for (const auto& s : software.contract(c).required) {
      int n = providers_per_pair[{c, s}];
      if (n == 0) add(Condition::UniqueProvider, c + " requires " + s + " but no provider is connected");
      if (n > 1) add(Condition::UniqueProvider, c + " requires " + s + " but " + std::to_string(n) + " providers are connected");
    }
  }
  for (const auto& [key, clients] : clients_of) {
    const auto& iface = software.services.at(key.second);
    if (iface.max_clients && static_cast<int>(clients.size()) > *iface.max_clients)
      add(Condition::MaxClients, key.first + " serves " + key.second + " to " + std::to_string(clients.size()) +
                                     " clients, limit " + std::to_string(*iface.max_clients));
  }

  // Condition 3.
  auto tasks = tasks_of(software, cfg.components);
  for (const auto& [task, res] : cfg.mapping) {
    const Contract& owner = software.contract(task.component);
    const TaskStep* step = nullptr;
    for (const auto& t : owner.threads)
      for (const auto& s : t.steps)
        if (const auto* ts = std::get_if<TaskStep>(&s); ts && ts->name == task.name) step = ts;
    if (!step) throw ModelError("unknown task " + task.str());
    const Resource* r = platform.find(res);
    if (!r) throw ModelError("unknown resource " + res);
    if (!cfg.components.count(task.component)) {
      add(Condition::MappingType, "task " + task.str() + " of an unselected component is mapped");
    } else if (r->type != step->resource_type) {
      add(Condition::MappingType, "task " + task.str() + " needs " + step->resource_type + " but " + res + " is " + r->type);
    }
  }
  for (const auto& t : tasks)
    if (!cfg.mapping.count(t.id)) add(Condition::MappingType, "task " + t.id.str() + " is not mapped");

  // Condition 4 and strictness of the thread order.
  auto threads = threads_of(software, cfg.components);
  std::map<ThreadId, int> seen;
  for (const auto& t : cfg.priorities) {
    if (!software.contract(t.component).find_thread(t.name)) throw ModelError("unknown thread " + t.str());
    if (++seen[t] == 2) add(Condition::StrictOrder, "thread " + t.str() + " has more than one rank");
    if (!cfg.components.count(t.component))
      add(Condition::ThreadPriority, "thread " + t.str() + " of an unselected component has a priority");
  }
  for (const auto& t : threads)
    if (!seen.count(t)) add(Condition::ThreadPriority, "thread " + t.str() + " (and its tasks) has no priority");

  return out;
}

SoftwareModel apply_update(const SoftwareModel& software, const UpdateRequest& req) {
  SoftwareModel out = software;
  const std::string& name = req.contract.component;
  switch (req.type) {
    case ChangeType::Add:
      if (out.has(name)) throw ModelError("add: component " + name + " already exists");
      check_against_repository(req.contract, out.services);
      out.contracts.emplace(name, req.contract);
      break;
    case ChangeType::Remove:
      if (!out.contracts.erase(name)) throw ModelError("remove: unknown component " + name);
      break;
    case ChangeType::Update:
      if (!out.has(name)) throw ModelError("update: unknown component " + name);
      check_against_repository(req.contract, out.services);
      out.contracts[name] = req.contract;
      break;
  }
  return out;
}

PlatformModel parse_platform(std::string_view text) {
  PlatformModel p;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto w = words(line);
    if (w.empty()) continue;
    if (w.size() != 4 || w[0] != "resource" || w[2] != "type")
      throw ParseError({lineno, 1}, "expected 'resource <name> type <rtype>'");
    if (p.find(w[1])) throw ParseError({lineno, 1}, "duplicate resource " + w[1]);
    p.resources.push_back({w[1], w[3]});
  }
  if (p.resources.empty()) throw ModelError("platform model has no resources");
  std::sort(p.resources.begin(), p.resources.end(), [](const Resource& a, const Resource& b) { return a.name < b.name; });
  return p;
}

std::string render_platform(const PlatformModel& p) {
  std::string out;
  for (const auto& r : p.resources) out += "resource " + r.name + " type " + r.type + "\n";
  return out;
}

Configuration parse_configuration(std::string_view text) {
  Configuration cfg;
  std::istringstream in{std::string(text)};
  std::string section;
  std::map<long, ThreadId> ranks;
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) -> void { throw ParseError({lineno, 1}, msg); };
    if (line.front() == '[') {
      section = line;
      if (section != "[selected]" && section != "[connections]" && section != "[mapping]" && section != "[priorities]")
        fail("unknown section " + section);
      continue;
    }
    try {
      if (section == "[selected]") {
        if (words(line).size() != 1) fail("expected one component name");
        cfg.components.insert(line);
      } else if (section == "[connections]") {
        auto f = arrow_fields(line);
        if (f.size() != 3 || f[0].empty() || f[1].empty() || f[2].empty()) fail("expected 'client -> service -> provider'");
        cfg.connections.insert({f[0], f[1], f[2]});
      } else if (section == "[mapping]") {
        auto f = arrow_fields(line);
        if (f.size() != 2) fail("expected 'Component.task -> resource'");
        if (!cfg.mapping.emplace(QualifiedName::parse(f[0]), f[1]).second) fail("task mapped twice");
      } else if (section == "[priorities]") {
        auto w = words(line);
        if (w.size() != 2) fail("expected '<rank> Component.thread'");
        std::size_t used = 0;
        long rank = -1;
        try {
          rank = std::stol(w[0], &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != w[0].size() || rank < 0) fail("bad rank " + w[0]);
        if (!ranks.emplace(rank, QualifiedName::parse(w[1])).second) fail("duplicate rank " + w[0]);
      } else {
        fail("entry outside of a section");
      }
    } catch (const ModelError& e) {
      throw ParseError({lineno, 1}, e.what());
    }
  }
  long expected = 0;
  for (const auto& [rank, thread] : ranks) {
    if (rank != expected++) throw ParseError({lineno, 1}, "priority ranks must be dense from 0");
    cfg.priorities.push_back(thread);
  }
  return cfg;
}

std::string render_configuration(const Configuration& cfg) {
  std::ostringstream out;
  out << "[selected]\n";
  for (const auto& c : cfg.components) out << c << "\n";
  out << "[connections]\n";
  for (const auto& c : cfg.connections) out << c.str() << "\n";
  out << "[mapping]\n";
  for (const auto& [t, r] : cfg.mapping) out << t.str() << " -> " << r << "\n";
  out << "[priorities]\n";
  for (std::size_t i = 0; i < cfg.priorities.size(); ++i) out << i << " " << cfg.priorities[i].str() << "\n";
  return out.str();
}

}  // namespace mcc
