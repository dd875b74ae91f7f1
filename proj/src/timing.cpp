#include "mcc/timing.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <set>
#include <unordered_set>

namespace mcc {

std::string model_str(InterferenceModel m) {
  return m == InterferenceModel::BusyWindow ? "busy-window" : "single-blocking";
}

InterferenceModel parse_model(std::string_view text) {
  if (text == "busy-window") return InterferenceModel::BusyWindow;
  if (text == "single-blocking") return InterferenceModel::SingleBlocking;
  throw ModelError("unknown interference model '" + std::string(text) + "'");
}

std::string rational_str(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

constexpr Time kDivergent = std::numeric_limits<Time>::max() / 4;

struct Range {
  std::size_t chain = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Node-level classification of one range analysis.
struct Detail {
  std::set<std::string> resources;
  Time c_range = 0;
  std::vector<std::vector<bool>> interf;  // [chain][node], own chain all false
  std::vector<Time> C;
  std::vector<Time> K;
  std::vector<std::optional<std::size_t>> first_gap;  // first non-interfering node, when K > 0
  std::optional<Time> bound;
};

class Analyzer {
 public:
  Analyzer(const TaskGraph& g, const std::map<TaskId, std::string>& mapping, InterferenceModel model)
      : g_(g), model_(model) {
    Time total = 0;
    std::optional<Time> min_period;
    res_.resize(g.chains.size());
    for (std::size_t c = 0; c < g.chains.size(); ++c) {
      const Chain& ch = g.chains[c];
      for (const auto& n : ch.nodes) {
        auto it = mapping.find(n.id);
        if (it == mapping.end()) throw AnalysisError("task " + n.id.str() + " is not mapped");
        res_[c].push_back(it->second);
        total += n.wcet;
      }
      if (ch.event.period) min_period = std::min(min_period.value_or(*ch.event.period), *ch.event.period);
    }
    // Fixed-point iteration cap: 10 * sum(wcet) / min period, at least 10.
    cap_ = min_period ? std::max<Time>(10, 10 * total / *min_period) : 10;
  }

  const TaskGraph& graph() const { return g_; }
  const std::string& res(std::size_t c, std::size_t i) const { return res_[c][i]; }

  template <class Above>
  Detail analyse(const Range& r, Above above) const {
    Detail d;
    const Chain& own = g_.chains[r.chain];
    for (std::size_t i = r.begin; i < r.end; ++i) {
      d.resources.insert(res_[r.chain][i]);
      d.c_range += own.nodes[i].wcet;
    }
    std::size_t n = g_.chains.size();
    d.interf.assign(n, {});
    d.C.assign(n, 0);
    d.K.assign(n, 0);
    d.first_gap.assign(n, std::nullopt);
    for (std::size_t j = 0; j < n; ++j) {
      const Chain& ch = g_.chains[j];
      d.interf[j].assign(ch.nodes.size(), false);
      if (j == r.chain) continue;
      for (std::size_t i = 0; i < ch.nodes.size(); ++i) {
        const std::string& rr = res_[j][i];
        if (d.resources.count(rr) && above(ch.nodes[i].thread, rr)) {
          d.interf[j][i] = true;
          d.C[j] += ch.nodes[i].wcet;
        }
      }
      if (ch.event.one_shot() || model_ == InterferenceModel::SingleBlocking) continue;
      auto gap = std::find(d.interf[j].begin(), d.interf[j].end(), false);
      for (auto it = gap; it != d.interf[j].end(); ++it)
        if (*it) d.K[j] += ch.nodes[it - d.interf[j].begin()].wcet;
      if (d.K[j] > 0) d.first_gap[j] = static_cast<std::size_t>(gap - d.interf[j].begin());
    }
    d.bound = solve(d);
    return d;
  }

  /// Rank-based view: a task interferes on r if its thread outranks the range's lowest thread on r.
  Detail analyse(const Range& r, const std::map<ThreadId, std::size_t>& rank) const {
    std::map<std::string, std::size_t> min_rank;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      auto& m = min_rank[res_[r.chain][i]];
      m = std::max(m, rank_of(rank, g_.chains[r.chain].nodes[i].thread));
    }
    return analyse(r, [&](const ThreadId& u, const std::string& rr) { return rank_of(rank, u) < min_rank.at(rr); });
  }

  static std::size_t rank_of(const std::map<ThreadId, std::size_t>& rank, const ThreadId& t) {
    auto it = rank.find(t);
    if (it == rank.end()) throw AnalysisError("thread " + t.str() + " has no priority");
    return it->second;
  }

  /// Busy-window self-overlap guard over every periodic chain of the mode.
  bool guard_ok(const std::map<ThreadId, std::size_t>& rank) const {
    if (model_ != InterferenceModel::BusyWindow) return true;
    for (std::size_t c = 0; c < g_.chains.size(); ++c) {
      const Chain& ch = g_.chains[c];
      if (ch.event.one_shot()) continue;
      auto d = analyse(Range{c, 0, ch.nodes.size()}, rank);
      if (!d.bound || *d.bound + ch.event.jitter > *ch.event.period) return false;
    }
    return true;
  }

 private:
  std::optional<Time> solve(const Detail& d) const {
    Time fixed = d.c_range;
    for (std::size_t j = 0; j < d.C.size(); ++j) fixed += d.K[j];
    if (model_ == InterferenceModel::SingleBlocking) {
      Time b = d.c_range;
      for (auto c : d.C) b += c;
      return b;
    }
    Time w = d.c_range;
    for (Time it = 0; it <= cap_; ++it) {
      Time next = fixed;
      for (std::size_t j = 0; j < d.C.size(); ++j)
        if (d.C[j] > 0) next += g_.chains[j].event.eta(w) * d.C[j];
      if (next == w) return w;
      if (next > kDivergent) return std::nullopt;
      w = next;
    }
    return std::nullopt;
  }

  const TaskGraph& g_;
  InterferenceModel model_;
  std::vector<std::vector<std::string>> res_;
  Time cap_ = 10;
};

std::map<ThreadId, std::size_t> ranks_of(const PriorityOrder& pi) {
  std::map<ThreadId, std::size_t> rank;
  for (std::size_t i = 0; i < pi.size(); ++i) rank.emplace(pi[i], i);
  return rank;
}

void append(std::vector<Literal>& out, const std::vector<Literal>& more) { out.insert(out.end(), more.begin(), more.end()); }

void tidy(std::vector<Literal>& ls) {
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
}

std::vector<Literal> graph_context(const Analyzer& an) {
  const TaskGraph& g = an.graph();
  std::vector<Literal> ctx;
  for (std::size_t c = 0; c < g.chains.size(); ++c) {
    append(ctx, chain_context(g, c));
    for (std::size_t i = 0; i < g.chains[c].nodes.size(); ++i) ctx.push_back(MapLit{g.chains[c].nodes[i].id, an.res(c, i)});
  }
  tidy(ctx);
  return ctx;
}

/// Nogood for a finite miss: the interferers stay above the range's lowest threads; with
/// carry-in, the lowest threads and each carry-in gap are pinned as well so the bound
/// cannot shrink under any order satisfying all pairs.
Constraint miss_nogood(const Analyzer& an, const Range& r, const Detail& d, const std::map<ThreadId, std::size_t>& rank) {
  const TaskGraph& g = an.graph();
  const Chain& own = g.chains[r.chain];
  std::map<std::string, ThreadId> min_thread;
  std::map<std::string, std::set<ThreadId>> range_threads;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    const auto& rr = an.res(r.chain, i);
    const ThreadId& t = own.nodes[i].thread;
    range_threads[rr].insert(t);
    auto it = min_thread.find(rr);
    if (it == min_thread.end() || rank.at(t) > rank.at(it->second)) min_thread[rr] = t;
  }
  std::vector<Literal> ctx = chain_context(g, r.chain);
  for (std::size_t i = r.begin; i < r.end; ++i) ctx.push_back(MapLit{own.nodes[i].id, an.res(r.chain, i)});

  std::vector<ThreadPair> pairs;
  bool carry = false;
  for (std::size_t j = 0; j < g.chains.size(); ++j) {
    if (d.C[j] == 0) continue;
    append(ctx, chain_context(g, j));
    for (std::size_t i = 0; i < g.chains[j].nodes.size(); ++i) {
      if (!d.interf[j][i]) continue;
      const auto& rr = an.res(j, i);
      ctx.push_back(MapLit{g.chains[j].nodes[i].id, rr});
      pairs.push_back({g.chains[j].nodes[i].thread, min_thread.at(rr)});
    }
    if (auto gap = d.first_gap[j]) {
      carry = true;
      const auto& node = g.chains[j].nodes[*gap];
      const auto& rr = an.res(j, *gap);
      ctx.push_back(MapLit{node.id, rr});
      if (d.resources.count(rr)) pairs.push_back({min_thread.at(rr), node.thread});
    }
  }
  if (carry)
    for (const auto& [rr, threads] : range_threads)
      for (const auto& u : threads)
        if (u != min_thread.at(rr)) pairs.push_back({u, min_thread.at(rr)});
  tidy(ctx);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return {PriorityNogood{std::move(ctx), std::move(pairs)}, "timing"};
}

Constraint exclusion_nogood(const Analyzer& an, const PriorityOrder& pi) {
  std::vector<ThreadPair> pairs;
  for (std::size_t i = 0; i + 1 < pi.size(); ++i) pairs.push_back({pi[i], pi[i + 1]});
  return {PriorityNogood{graph_context(an), std::move(pairs)}, "timing"};
}

}  // namespace

std::vector<Literal> chain_context(const TaskGraph& g, std::size_t chain) {
  std::vector<Literal> out;
  for (std::optional<std::size_t> c = chain; c;) {
    const Chain& ch = g.chains[*c];
    out.push_back(SelLit{ch.root.component});
    for (const auto& v : ch.via) out.push_back(ConnLit{v.client, v.service, v.provider});
    c = ch.trigger ? std::optional<std::size_t>(ch.trigger->first) : std::nullopt;
  }
  tidy(out);
  return out;
}

std::map<std::string, Rational> utilization(const TaskGraph& g, const std::map<TaskId, std::string>& mapping) {
  std::map<std::string, Rational> u;
  for (const auto& ch : g.chains) {
    std::map<std::string, Time> load;
    for (const auto& n : ch.nodes) {
      auto it = mapping.find(n.id);
      if (it == mapping.end()) throw AnalysisError("task " + n.id.str() + " is not mapped");
      load[it->second] += n.wcet;
    }
    for (const auto& [r, c] : load) u[r] += ch.event.one_shot() ? Rational(0) : Rational(c, *ch.event.period);
  }
  return u;
}

std::optional<Time> chain_latency_bound(const TaskGraph& g, std::size_t chain, std::size_t begin, std::size_t end,
                                        const Configuration& cfg, InterferenceModel model) {
  Analyzer an(g, cfg.mapping, model);
  auto rank = ranks_of(cfg.priorities);
  if (!an.guard_ok(rank)) return std::nullopt;
  return an.analyse(Range{chain, begin, end}, rank).bound;
}

std::string RequirementVerdict::str(InterferenceModel m) const {
  return req.str() + ": bound=" + (bound ? std::to_string(*bound) : std::string("unbounded")) + " " +
         (pass ? "PASS" : "FAIL") + " model=" + model_str(m);
}

bool TimingVerdict::pass() const {
  return overloaded.empty() &&
         std::all_of(requirements.begin(), requirements.end(), [](const RequirementVerdict& r) { return r.pass; });
}

std::vector<std::string> TimingVerdict::lines() const {
  std::vector<std::string> out;
  for (const auto& [r, u] : utilization)
    out.push_back("utilization " + r + " mode=" + mode_str(mode) + ": U=" + rational_str(u) +
                  (u > Rational(1) ? " OVERLOAD" : " ok"));
  for (const auto& r : requirements) out.push_back(r.str(model));
  for (const auto& [t, b] : chain_bounds)
    out.push_back("chain " + t.str() + " mode=" + mode_str(mode) + ": bound=" + (b ? std::to_string(*b) : "unbounded"));
  return out;
}

TimingVerdict check_timing(const TaskGraph& g, const Configuration& cfg, InterferenceModel model) {
  TimingVerdict v;
  v.mode = g.mode;
  v.model = model;
  v.utilization = utilization(g, cfg.mapping);
  Analyzer an(g, cfg.mapping, model);

  for (const auto& [r, u] : v.utilization) {
    if (u <= Rational(1)) continue;
    v.overloaded.push_back(r);
    std::vector<Literal> ctx;
    for (std::size_t c = 0; c < g.chains.size(); ++c) {
      const Chain& ch = g.chains[c];
      if (ch.event.one_shot()) continue;
      bool on_r = false;
      for (std::size_t i = 0; i < ch.nodes.size(); ++i)
        if (an.res(c, i) == r && ch.nodes[i].wcet > 0) {
          on_r = true;
          ctx.push_back(MapLit{ch.nodes[i].id, r});
        }
      if (on_r) append(ctx, chain_context(g, c));
    }
    tidy(ctx);
    v.feedback.push_back({ForbidConjunction{std::move(ctx)}, "timing"});
  }
  if (!v.overloaded.empty()) return v;

  auto rank = ranks_of(cfg.priorities);
  bool guard = an.guard_ok(rank);
  bool excluded = false;
  for (std::size_t c = 0; c < g.chains.size(); ++c) {
    const Chain& ch = g.chains[c];
    auto whole = an.analyse(Range{c, 0, ch.nodes.size()}, rank);
    v.chain_bounds.emplace_back(ch.root, guard ? whole.bound : std::nullopt);
    for (const auto& req : ch.requirements) {
      Range r{c, req.begin, req.end};
      auto d = an.analyse(r, rank);
      if (!guard) d.bound.reset();
      RequirementVerdict rv{c, req, d.bound, d.bound && *d.bound <= req.bound};
      v.requirements.push_back(rv);
      if (rv.pass) continue;
      Constraint k = rv.bound ? miss_nogood(an, r, d, rank) : exclusion_nogood(an, cfg.priorities);
      if (!rv.bound) {
        if (excluded) continue;
        excluded = true;
      }
      if (std::find(v.feedback.begin(), v.feedback.end(), k) == v.feedback.end()) v.feedback.push_back(std::move(k));
    }
  }
  return v;
}

std::vector<Constraint> derive_precedences(const TaskGraph& g, const std::map<TaskId, std::string>& mapping) {
  Analyzer an(g, mapping, InterferenceModel::SingleBlocking);
  std::vector<Constraint> out;
  for (std::size_t c = 0; c < g.chains.size(); ++c) {
    const Chain& own = g.chains[c];
    for (const auto& req : own.requirements) {
      Time cr = range_wcet(own, req.begin, req.end);
      std::map<std::string, std::set<ThreadId>> on;
      std::map<std::string, std::vector<Literal>> range_maps;
      for (std::size_t i = req.begin; i < req.end; ++i) {
        on[an.res(c, i)].insert(own.nodes[i].thread);
        range_maps[an.res(c, i)].push_back(MapLit{own.nodes[i].id, an.res(c, i)});
      }
      for (const auto& [r, range_threads] : on) {
        for (std::size_t j = 0; j < g.chains.size(); ++j) {
          if (j == c) continue;
          std::map<ThreadId, Time> load;
          std::map<ThreadId, std::vector<Literal>> maps;
          for (std::size_t i = 0; i < g.chains[j].nodes.size(); ++i) {
            if (an.res(j, i) != r) continue;
            const auto& n = g.chains[j].nodes[i];
            load[n.thread] += n.wcet;
            maps[n.thread].push_back(MapLit{n.id, r});
          }
          for (const auto& [t, w] : load) {
            if (cr + w <= req.bound) continue;
            std::vector<Literal> ctx = chain_context(g, c);
            append(ctx, chain_context(g, j));
            append(ctx, range_maps[r]);
            append(ctx, maps[t]);
            tidy(ctx);
            for (const auto& u : range_threads) {
              Constraint k{PriorityNogood{ctx, {{t, u}}}, "timing"};
              if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
            }
          }
        }
      }
    }
  }
  return out;
}

std::map<ThreadId, Time> thread_deadlines(const std::vector<const TaskGraph*>& graphs) {
  std::map<ThreadId, Time> out;
  for (const auto* g : graphs)
    for (const auto& ch : g->chains)
      for (const auto& req : ch.requirements)
        for (std::size_t i = req.begin; i < req.end; ++i) {
          auto [it, fresh] = out.emplace(ch.nodes[i].thread, req.bound);
          if (!fresh) it->second = std::min(it->second, req.bound);
        }
  return out;
}

PriorityOrder deadline_monotonic(const std::vector<const TaskGraph*>& graphs, std::vector<ThreadId> threads) {
  auto dl = thread_deadlines(graphs);
  auto key = [&](const ThreadId& t) {
    auto it = dl.find(t);
    return it == dl.end() ? std::numeric_limits<Time>::max() : it->second;
  };
  std::sort(threads.begin(), threads.end(), [&](const ThreadId& a, const ThreadId& b) {
    return std::make_pair(key(a), a) < std::make_pair(key(b), b);
  });
  return threads;
}

namespace {

struct SynthRange {
  const Analyzer* an;
  Range range;
  Time limit;
  std::vector<std::string> resources;
  std::vector<std::uint64_t> on;  // range threads per resource
};

class Synthesizer {
 public:
  Synthesizer(const std::vector<const Analyzer*>& analyzers, const std::vector<ThreadId>& threads,
              const PriorityConstraints& pc, const std::map<ThreadId, Time>& deadlines, InterferenceModel model,
              std::uint64_t budget)
      : threads_(threads), model_(model), budget_(budget) {
    if (threads.size() > 64) throw AnalysisError("priority synthesis supports at most 64 threads");
    for (std::size_t i = 0; i < threads.size(); ++i) index_[threads[i]] = i;
    below_.assign(threads.size(), 0);
    for (const auto& p : pc.precedences) below_[index_.at(p.above)] |= bit(p.below);
    for (const auto& ng : pc.nogoods) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (const auto& p : ng) pairs.emplace_back(index_.at(p.above), index_.at(p.below));
      nogoods_.push_back(std::move(pairs));
    }
    for (std::size_t i = 0; i < threads.size(); ++i) candidates_.push_back(i);
    auto dl = [&](std::size_t i) {
      auto it = deadlines.find(threads[i]);
      return it == deadlines.end() ? std::numeric_limits<Time>::max() : it->second;
    };
    std::sort(candidates_.begin(), candidates_.end(), [&](std::size_t a, std::size_t b) {
      return std::make_pair(dl(a), threads[a]) > std::make_pair(dl(b), threads[b]);
    });
    for (const auto* an : analyzers) add_ranges(*an);
  }

  std::optional<PriorityOrder> run() {
    std::uint64_t all = threads_.size() == 64 ? ~0ULL : (1ULL << threads_.size()) - 1;
    std::vector<char> alive(nogoods_.size(), 1);
    std::vector<std::vector<std::optional<std::uint64_t>>> snaps;
    for (const auto& r : ranges_) snaps.emplace_back(r.resources.size());
    std::vector<std::size_t> lowest_first;
    if (!rec(all, alive, snaps, lowest_first)) return std::nullopt;
    PriorityOrder out;
    for (auto it = lowest_first.rbegin(); it != lowest_first.rend(); ++it) out.push_back(threads_[*it]);
    return out;
  }

 private:
  std::uint64_t bit(const ThreadId& t) const { return 1ULL << index_.at(t); }

  void add_ranges(const Analyzer& an) {
    const TaskGraph& g = an.graph();
    auto add = [&](std::size_t c, std::size_t b, std::size_t e, Time limit) {
      if (b == e) return;
      SynthRange sr{&an, Range{c, b, e}, limit, {}, {}};
      for (std::size_t i = b; i < e; ++i) {
        const auto& r = an.res(c, i);
        auto it = std::find(sr.resources.begin(), sr.resources.end(), r);
        if (it == sr.resources.end()) {
          sr.resources.push_back(r);
          sr.on.push_back(0);
          it = sr.resources.end() - 1;
        }
        sr.on[it - sr.resources.begin()] |= bit(g.chains[c].nodes[i].thread);
      }
      ranges_.push_back(std::move(sr));
    };
    for (std::size_t c = 0; c < g.chains.size(); ++c) {
      const Chain& ch = g.chains[c];
      for (const auto& req : ch.requirements) add(c, req.begin, req.end, req.bound);
      if (model_ == InterferenceModel::BusyWindow && !ch.event.one_shot()) add(c, 0, ch.nodes.size(), *ch.event.period - ch.event.jitter);
    }
  }

  bool check(const SynthRange& r, const std::vector<std::optional<std::uint64_t>>& snap) const {
    auto d = r.an->analyse(r.range, [&](const ThreadId& u, const std::string& res) {
      auto it = std::find(r.resources.begin(), r.resources.end(), res);
      return (*snap[it - r.resources.begin()] & bit(u)) != 0;
    });
    return d.bound && *d.bound <= r.limit;
  }

  std::string key(std::uint64_t S, const std::vector<char>& alive,
                  const std::vector<std::vector<std::optional<std::uint64_t>>>& snaps) const {
    std::string k(reinterpret_cast<const char*>(&S), sizeof S);
    k.append(alive.begin(), alive.end());
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      bool some = false, all = true;
      for (const auto& s : snaps[i]) (s ? some : all) = s ? true : false;
      if (!some || all) continue;
      k += '|' + std::to_string(i);
      for (const auto& s : snaps[i]) k += ':' + (s ? std::to_string(*s) : std::string("-"));
    }
    return k;
  }

  bool rec(std::uint64_t S, std::vector<char>& alive, std::vector<std::vector<std::optional<std::uint64_t>>>& snaps,
           std::vector<std::size_t>& out) {
    if (S == 0) return true;
    std::string k = key(S, alive, snaps);
    if (failed_.count(k)) return false;
    for (std::size_t t : candidates_) {
      if (!(S >> t & 1)) continue;
      if (++nodes_ > budget_) return false;
      std::uint64_t rest = S & ~(1ULL << t);
      if (below_[t] & rest) continue;

      std::vector<char> next_alive = alive;
      bool violated = false;
      for (std::size_t n = 0; n < nogoods_.size() && !violated; ++n) {
        if (!next_alive[n]) continue;
        bool all_hold = true;
        for (auto [a, b] : nogoods_[n]) {
          if (a == t && (rest >> b & 1)) next_alive[n] = 0;
          if (rest >> b & 1) all_hold = false;
        }
        if (next_alive[n] && all_hold) violated = true;
      }
      if (violated) continue;

      auto next_snaps = snaps;
      bool ok = true;
      for (std::size_t i = 0; i < ranges_.size() && ok; ++i) {
        bool changed = false;
        for (std::size_t ri = 0; ri < ranges_[i].resources.size(); ++ri)
          if (!next_snaps[i][ri] && (ranges_[i].on[ri] >> t & 1)) {
            next_snaps[i][ri] = rest;
            changed = true;
          }
        if (!changed) continue;
        bool complete = std::all_of(next_snaps[i].begin(), next_snaps[i].end(), [](const auto& s) { return s.has_value(); });
        if (complete && !check(ranges_[i], next_snaps[i])) ok = false;
      }
      if (!ok) continue;

      if (rec(rest, next_alive, next_snaps, out)) {
        out.insert(out.begin(), t);
        return true;
      }
      if (nodes_ > budget_) return false;
    }
    failed_.insert(std::move(k));
    return false;
  }

  const std::vector<ThreadId>& threads_;
  InterferenceModel model_;
  std::map<ThreadId, std::size_t> index_;
  std::vector<std::uint64_t> below_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> nogoods_;
  std::vector<std::size_t> candidates_;
  std::vector<SynthRange> ranges_;
  std::unordered_set<std::string> failed_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<PriorityOrder> synthesize_priorities(const std::vector<const TaskGraph*>& graphs,
                                                   const std::map<TaskId, std::string>& mapping,
                                                   const std::vector<ThreadId>& threads,
                                                   const PriorityConstraints& pc, InterferenceModel model,
                                                   std::uint64_t node_budget) {
  std::vector<std::unique_ptr<Analyzer>> owned;
  std::vector<const Analyzer*> analyzers;
  for (const auto* g : graphs) {
    owned.push_back(std::make_unique<Analyzer>(*g, mapping, model));
    analyzers.push_back(owned.back().get());
  }
  for (const auto* g : graphs)
    for (const auto& ch : g->chains)
      for (const auto& n : ch.nodes)
        if (std::find(threads.begin(), threads.end(), n.thread) == threads.end())
          throw AnalysisError("thread " + n.thread.str() + " is not being ordered");
  for (const auto* g : graphs)
    for (const auto& u : utilization(*g, mapping))
      if (u.second > Rational(1)) return std::nullopt;
  return Synthesizer(analyzers, threads, pc, thread_deadlines(graphs), model, node_budget).run();
}

}  // namespace mcc
