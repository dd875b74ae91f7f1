#include "mcc/taskgraph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace mcc {

std::string mode_str(Mode m) { return m == Mode::Initialization ? "initialization" : "normal"; }

std::int64_t EventModel::eta(Time delta) const {
  if (!period) return 1;
  if (delta + jitter <= 0) return 0;
  return (delta + jitter + *period - 1) / *period;
}

std::vector<ThreadId> Chain::threads() const {
  std::vector<ThreadId> out{root};
  auto add = [&](const ThreadId& t) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  for (const auto& n : nodes) add(n.thread);
  for (const auto& c : calls) add(c.entry);
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> TaskGraph::locate(const TaskId& t) const {
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (std::size_t i = 0; i < chains[c].nodes.size(); ++i)
      if (chains[c].nodes[i].id == t) return std::make_pair(c, i);
  return std::nullopt;
}

namespace {

struct Builder {
  const SoftwareModel& software;
  const Configuration& cfg;
  TaskGraph& graph;
  std::set<ThreadId> inlined;
  std::vector<ThreadId> stack;

  const Thread& entry_of(const std::string& client, const MethodRef& m, Connection& conn, ThreadId& id) {
    const std::string* provider = cfg.provider_of(client, m.service);
    if (!provider) throw AnalysisError(client + " calls " + m.str() + " but " + m.service + " is not connected");
    const Thread* entry = software.contract(*provider).entry_thread(m);
    if (!entry) throw AnalysisError(*provider + " has no entry thread for " + m.str());
    conn = {client, m.service, *provider};
    id = {*provider, entry->name};
    if (std::find(stack.begin(), stack.end(), id) != stack.end())
      throw AnalysisError("call cycle through " + id.str());
    if (!inlined.insert(id).second)
      throw AnalysisError(id.str() + " is activated by more than one call in " + mode_str(graph.mode) + " mode");
    return *entry;
  }

  void unfold(std::size_t ci, const std::string& component, const Thread& thread) {
    ThreadId self{component, thread.name};
    stack.push_back(self);
    for (const auto& step : thread.steps) {
      if (const auto* task = std::get_if<TaskStep>(&step)) {
        graph.chains[ci].nodes.push_back({{component, task->name}, self, task->wcet, task->bcet, task->resource_type});
        continue;
      }
      const auto& call = std::get<CallStep>(step);
      Connection conn;
      ThreadId id;
      const Thread& entry = entry_of(component, call.target, conn, id);
      graph.chains[ci].via.push_back(conn);
      if (call.kind == CallKind::Rpc) {
        std::size_t begin = graph.chains[ci].nodes.size();
        unfold(ci, id.component, entry);
        graph.chains[ci].calls.push_back({self, call.target, id, begin, graph.chains[ci].nodes.size()});
      } else {
        Chain child;
        child.root = id;
        child.mode = graph.mode;
        child.event = graph.chains[ci].event;
        std::size_t pos = graph.chains[ci].nodes.size();
        child.trigger = std::make_pair(ci, pos);
        graph.chains.push_back(std::move(child));
        std::size_t child_index = graph.chains.size() - 1;
        graph.chains[ci].signals.emplace_back(pos, child_index);
        graph.chains[ci].calls.push_back({self, call.target, id, pos, pos});
        auto saved = std::move(stack);
        stack.clear();
        stack.push_back(self);
        unfold(child_index, id.component, entry);
        stack = std::move(saved);
      }
    }
    stack.pop_back();
  }
};

void attach_requirements(const SoftwareModel& software, Chain& chain) {
  std::set<std::string> components;
  for (const auto& t : chain.threads()) components.insert(t.component);
  for (const auto& c : components) {
    for (const auto& req : software.contract(c).timings) {
      auto add = [&](std::size_t b, std::size_t e) { chain.requirements.push_back({c, req.bound, req.target_str(), b, e}); };
      if (const auto* name = std::get_if<std::string>(&req.target)) {
        ThreadId t{c, *name};
        if (chain.root == t) add(0, chain.nodes.size());
        for (const auto& call : chain.calls)
          if (call.entry == t && call.begin != call.end) add(call.begin, call.end);
      } else {
        const auto& m = std::get<MethodRef>(req.target);
        for (const auto& call : chain.calls)
          if (call.target.same_method(m) && (call.caller.component == c || call.entry.component == c) &&
              call.begin != call.end)
            add(call.begin, call.end);
      }
    }
  }
}

}  // namespace

TaskGraph build_task_graph(const SoftwareModel& software, const Configuration& cfg, Mode mode) {
  TaskGraph g;
  g.mode = mode;
  Builder b{software, cfg, g, {}, {}};
  for (const auto& component : cfg.components) {
    for (const auto& thread : software.contract(component).threads) {
      Chain chain;
      if (mode == Mode::Normal) {
        const auto* tick = std::get_if<TimeActivation>(&thread.activation);
        if (!tick) continue;
        chain.event = {tick->period, tick->jitter};
      } else if (!std::holds_alternative<Initialization>(thread.activation)) {
        continue;
      }
      chain.root = {component, thread.name};
      chain.mode = mode;
      g.chains.push_back(std::move(chain));
      b.unfold(g.chains.size() - 1, component, thread);
    }
  }
  for (auto& chain : g.chains) {
    std::sort(chain.via.begin(), chain.via.end());
    chain.via.erase(std::unique(chain.via.begin(), chain.via.end()), chain.via.end());
    attach_requirements(software, chain);
  }
  return g;
}

Time total_wcet(const Chain& chain) { return range_wcet(chain, 0, chain.nodes.size()); }

Time range_wcet(const Chain& chain, std::size_t begin, std::size_t end) {
  Time sum = 0;
  for (std::size_t i = begin; i < end && i < chain.nodes.size(); ++i) sum += chain.nodes[i].wcet;
  return sum;
}

std::string render_chains(const TaskGraph& g) {
  std::ostringstream out;
  for (const auto& c : g.chains) {
    out << "chain " << c.root.str() << " mode=" << mode_str(c.mode);
    if (c.event.one_shot()) {
      out << " period=- jitter=-";
    } else {
      out << " period=" << *c.event.period << " jitter=" << c.event.jitter;
    }
    if (c.trigger) out << " trigger=" << g.chains[c.trigger->first].root.str() << "@" << c.trigger->second;
    out << ":";
    for (std::size_t i = 0; i < c.nodes.size(); ++i)
      out << (i ? " -> " : " ") << c.nodes[i].id.name << "(" << c.nodes[i].wcet << "/" << c.nodes[i].bcet << ")";
    out << "\n";
    for (const auto& r : c.requirements)
      out << "  " << r.component << ": " << r.str() << " range=[" << r.begin << "," << r.end << ")\n";
  }
  return out.str();
}

}  // namespace mcc
