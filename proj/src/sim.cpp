#include "mcc/sim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <queue>

namespace mcc {

namespace {

struct Act {
  std::size_t index = 0;
  Time release = 0;
  std::size_t node = 0;
  Time remaining = 0;
  bool started = false;
  std::vector<Time> ready;
  std::vector<Time> done;
};

struct Pending {
  Time time;
  std::size_t chain;
  std::size_t index;
  friend auto operator<=>(const Pending&, const Pending&) = default;
};

class Simulator {
 public:
  Simulator(const TaskGraph& g, const Configuration& cfg, const ReleaseScenario& sc, bool trace)
      : g_(g), sc_(sc), record_(trace) {
    if (sc.chains.size() != g.chains.size()) throw AnalysisError("release scenario does not match the task graph");
    std::map<ThreadId, std::size_t> rank;
    for (std::size_t i = 0; i < cfg.priorities.size(); ++i) rank.emplace(cfg.priorities[i], i);
    std::map<std::string, std::size_t> res_index;
    for (const auto& ch : g.chains) {
      std::vector<std::size_t> rs, rk;
      for (const auto& n : ch.nodes) {
        auto m = cfg.mapping.find(n.id);
        if (m == cfg.mapping.end()) throw AnalysisError("task " + n.id.str() + " is not mapped");
        auto r = rank.find(n.thread);
        if (r == rank.end()) throw AnalysisError("thread " + n.thread.str() + " has no priority");
        rs.push_back(res_index.emplace(m->second, res_index.size()).first->second);
        rk.push_back(r->second);
      }
      res_.push_back(std::move(rs));
      rank_.push_back(std::move(rk));
    }
    running_.assign(res_index.size(), std::nullopt);
    queues_.resize(g.chains.size());
    next_index_.assign(g.chains.size(), 0);
    out_.latencies.resize(g.chains.size());
    out_.requirement_latencies.resize(g.chains.size());
    for (std::size_t c = 0; c < g.chains.size(); ++c) out_.requirement_latencies[c].resize(g.chains[c].requirements.size());

    for (std::size_t c = 0; c < g.chains.size(); ++c) {
      const Chain& ch = g.chains[c];
      if (ch.trigger) continue;
      const ChainRelease& cr = sc.chains[c];
      auto draw = [&](std::size_t k) -> Time {
        Time j = k < cr.jitter.size() ? cr.jitter[k] : 0;
        if (j < 0 || j > ch.event.jitter) throw AnalysisError("jitter draw outside [0, J] for " + ch.root.str());
        return j;
      };
      if (ch.event.one_shot()) {
        if (cr.offset < sc.horizon) pending_.push({cr.offset + draw(0), c, next_index_[c]++});
        continue;
      }
      for (Time t = cr.offset; t < sc.horizon; t += *ch.event.period) {
        std::size_t k = next_index_[c]++;
        pending_.push({t + draw(k), c, k});
      }
    }
  }

  SimResult run() {
    Time t = 0;
    for (;;) {
      settle(t);
      dispatch(t);
      std::optional<Time> next;
      if (!pending_.empty()) next = pending_.top().time;
      for (const auto& r : running_)
        if (r) {
          Time fin = t + queues_[*r].front().remaining;
          next = next ? std::min(*next, fin) : fin;
        }
      if (!next) break;
      if (sc_.stop_at_horizon && *next > sc_.horizon) {
        advance(t, sc_.horizon);
        break;
      }
      advance(t, *next);
      t = *next;
    }
    for (const auto& q : queues_)
      if (!q.empty()) out_.partial = true;
    if (!pending_.empty()) out_.partial = true;
    return std::move(out_);
  }

 private:
  using Heap = std::priority_queue<Pending, std::vector<Pending>, std::greater<Pending>>;

  void log(Time t, const std::string& event, const std::string& what) {
    if (record_) out_.trace.push_back("t=" + std::to_string(t) + " " + event + " " + what);
  }

  std::string act_name(std::size_t c, std::size_t k) const { return g_.chains[c].root.str() + "#" + std::to_string(k); }
  std::string task_name(std::size_t c, std::size_t n) const { return g_.chains[c].nodes[n].id.str(); }

  void start_node(std::size_t c, Act& a, Time t) {
    a.ready[a.node] = t;
    a.remaining = g_.chains[c].nodes[a.node].wcet;
    a.started = true;
  }

  void fire_signals(std::size_t c, std::size_t pos, Time t) {
    for (const auto& [p, child] : g_.chains[c].signals)
      if (p == pos) pending_.push({t, child, next_index_[child]++});
  }

  void release(const Pending& p) {
    const Chain& ch = g_.chains[p.chain];
    Act a;
    a.index = p.index;
    a.release = p.time;
    a.ready.assign(ch.nodes.size(), 0);
    a.done.assign(ch.nodes.size(), 0);
    log(p.time, "release", act_name(p.chain, p.index));
    queues_[p.chain].push_back(std::move(a));
    fire_signals(p.chain, 0, p.time);
  }

  /// Releases due events and retires finished (or zero-length) nodes until nothing changes.
  void settle(Time t) {
    for (bool changed = true; changed;) {
      changed = false;
      while (!pending_.empty() && pending_.top().time <= t) {
        release(pending_.top());
        pending_.pop();
        changed = true;
      }
      for (std::size_t c = 0; c < queues_.size(); ++c) {
        auto& q = queues_[c];
        if (q.empty()) continue;
        Act& a = q.front();
        const Chain& ch = g_.chains[c];
        if (a.node < ch.nodes.size() && !a.started) {
          start_node(c, a, t);
          changed = true;
        }
        if (a.node < ch.nodes.size() && a.remaining > 0) continue;
        if (a.node < ch.nodes.size()) {
          auto r = res_[c][a.node];
          if (running_[r] == c) running_[r].reset();
          a.done[a.node] = t;
          log(t, "complete", task_name(c, a.node));
          ++a.node;
          fire_signals(c, a.node, t);
          if (a.node < ch.nodes.size()) start_node(c, a, t);
        }
        if (a.node == ch.nodes.size()) finish(c, t);
        changed = true;
      }
    }
  }

  void finish(std::size_t c, Time t) {
    const Chain& ch = g_.chains[c];
    Act a = std::move(queues_[c].front());
    queues_[c].pop_front();
    out_.latencies[c].push_back(t - a.release);
    log(t, "finish", act_name(c, a.index) + " latency=" + std::to_string(t - a.release));
    for (std::size_t i = 0; i < ch.requirements.size(); ++i) {
      const auto& req = ch.requirements[i];
      if (req.begin >= req.end) continue;
      Time start = req.begin == 0 ? a.release : a.ready[req.begin];
      out_.requirement_latencies[c][i].push_back(a.done[req.end - 1] - start);
    }
  }

  void dispatch(Time t) {
    for (std::size_t r = 0; r < running_.size(); ++r) {
      std::optional<std::size_t> best;
      for (std::size_t c = 0; c < queues_.size(); ++c) {
        if (queues_[c].empty()) continue;
        const Act& a = queues_[c].front();
        if (a.node >= g_.chains[c].nodes.size() || res_[c][a.node] != r || a.remaining == 0) continue;
        if (!best || rank_[c][a.node] < rank_[*best][queues_[*best].front().node]) best = c;
      }
      if (best == running_[r]) continue;
      if (running_[r]) log(t, "preempt", task_name(*running_[r], queues_[*running_[r]].front().node));
      if (best) log(t, "dispatch", task_name(*best, queues_[*best].front().node));
      running_[r] = best;
    }
  }

  void advance(Time from, Time to) {
    for (const auto& r : running_)
      if (r) queues_[*r].front().remaining -= to - from;
  }

  const TaskGraph& g_;
  const ReleaseScenario& sc_;
  bool record_;
  std::vector<std::vector<std::size_t>> res_;
  std::vector<std::vector<std::size_t>> rank_;
  std::vector<std::optional<std::size_t>> running_;
  std::vector<std::deque<Act>> queues_;
  std::vector<std::size_t> next_index_;
  Heap pending_;
  SimResult out_;
};

std::vector<std::size_t> grid_chains(const TaskGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < g.chains.size(); ++c)
    if (!g.chains[c].trigger && !g.chains[c].event.one_shot()) out.push_back(c);
  return out;
}

Observed empty_observed(const TaskGraph& g) {
  Observed o;
  o.chain_max.assign(g.chains.size(), 0);
  for (const auto& ch : g.chains) o.requirement_max.emplace_back(ch.requirements.size(), 0);
  return o;
}

void merge(Observed& into, const SimResult& r) {
  for (std::size_t c = 0; c < r.latencies.size(); ++c) {
    for (auto l : r.latencies[c]) into.chain_max[c] = std::max(into.chain_max[c], l);
    for (std::size_t i = 0; i < r.requirement_latencies[c].size(); ++i)
      for (auto l : r.requirement_latencies[c][i]) into.requirement_max[c][i] = std::max(into.requirement_max[c][i], l);
  }
  into.partial = into.partial || r.partial;
  ++into.scenarios;
}

void merge(Observed& into, const Observed& o) {
  for (std::size_t c = 0; c < o.chain_max.size(); ++c) {
    into.chain_max[c] = std::max(into.chain_max[c], o.chain_max[c]);
    for (std::size_t i = 0; i < o.requirement_max[c].size(); ++i)
      into.requirement_max[c][i] = std::max(into.requirement_max[c][i], o.requirement_max[c][i]);
  }
  into.partial = into.partial || o.partial;
  into.scenarios += o.scenarios;
}

}  // namespace

SimResult simulate(const TaskGraph& g, const Configuration& cfg, const ReleaseScenario& scenario, bool record_trace) {
  return Simulator(g, cfg, scenario, record_trace).run();
}

Time hyperperiod(const TaskGraph& g) {
  Time h = 1;
  for (const auto& ch : g.chains)
    if (!ch.trigger && ch.event.period) h = std::lcm(h, *ch.event.period);
  return h;
}

std::uint64_t grid_size(const TaskGraph& g, Time step) {
  if (step <= 0) throw AnalysisError("grid step must be positive");
  auto chains = grid_chains(g);
  std::uint64_t n = 1;
  for (std::size_t i = 1; i < chains.size(); ++i) n *= static_cast<std::uint64_t>((*g.chains[chains[i]].event.period + step - 1) / step);
  return n;
}

ReleaseScenario grid_scenario(const TaskGraph& g, Time step, std::uint64_t index) {
  ReleaseScenario sc;
  sc.horizon = 2 * hyperperiod(g);
  sc.chains.resize(g.chains.size());
  for (std::size_t c = 0; c < g.chains.size(); ++c) sc.chains[c].jitter = {g.chains[c].event.jitter};
  auto chains = grid_chains(g);
  for (std::size_t i = 1; i < chains.size(); ++i) {
    auto slots = static_cast<std::uint64_t>((*g.chains[chains[i]].event.period + step - 1) / step);
    sc.chains[chains[i]].offset = static_cast<Time>(index % slots) * step;
    index /= slots;
  }
  return sc;
}

Observed worst_observed_serial(const TaskGraph& g, const Configuration& cfg, Time step) {
  Observed o = empty_observed(g);
  std::uint64_t n = grid_size(g, step);
  for (std::uint64_t i = 0; i < n; ++i) merge(o, simulate(g, cfg, grid_scenario(g, step, i)));
  return o;
}

Observed worst_observed(const TaskGraph& g, const Configuration& cfg, Time step) {
  Observed o = empty_observed(g);
  const auto n = static_cast<std::int64_t>(grid_size(g, step));
  // The first point runs outside the parallel region so input errors surface as exceptions.
  merge(o, simulate(g, cfg, grid_scenario(g, step, 0)));
#pragma omp parallel
  {
    Observed local = empty_observed(g);
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t i = 1; i < n; ++i) merge(local, simulate(g, cfg, grid_scenario(g, step, static_cast<std::uint64_t>(i))));
#pragma omp critical
    merge(o, local);
  }
  return o;
}

}  // namespace mcc
