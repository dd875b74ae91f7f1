#include "mcc/constraints.hpp"

#include <algorithm>
#include <sstream>

namespace mcc {

std::string literal_str(const Literal& l) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SelLit>) {
          return "sel[" + v.component + "]";
        } else if constexpr (std::is_same_v<T, ConnLit>) {
          return "conn[" + v.client + "," + v.service + "]=" + v.provider;
        } else {
          return "map[" + v.task.str() + "]=" + v.resource;
        }
      },
      l);
}

bool holds(const Literal& l, const Configuration& cfg) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SelLit>) {
          return cfg.components.count(v.component) > 0;
        } else if constexpr (std::is_same_v<T, ConnLit>) {
          return cfg.connections.count({v.client, v.service, v.provider}) > 0;
        } else {
          auto it = cfg.mapping.find(v.task);
          return it != cfg.mapping.end() && it->second == v.resource;
        }
      },
      l);
}

bool holds_all(const std::vector<Literal>& ls, const Configuration& cfg) {
  return std::all_of(ls.begin(), ls.end(), [&](const Literal& l) { return holds(l, cfg); });
}

namespace {

std::string join_literals(const std::vector<Literal>& ls) {
  std::string out;
  for (std::size_t i = 0; i < ls.size(); ++i) out += (i ? " & " : "") + literal_str(ls[i]);
  return out;
}

std::string join_pairs(const std::vector<ThreadPair>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + ps[i].str();
  return out;
}

bool above(const PriorityOrder& order, const ThreadPair& p) {
  auto a = std::find(order.begin(), order.end(), p.above);
  auto b = std::find(order.begin(), order.end(), p.below);
  return a != order.end() && b != order.end() && a < b;
}

}  // namespace

std::string Constraint::str() const {
  std::string body = std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Structural>) {
          return "structural " + condition_label(v.condition);
        } else if constexpr (std::is_same_v<T, ForbidConjunction>) {
          return v.literals.empty() ? "forbid true" : "forbid " + join_literals(v.literals);
        } else if constexpr (std::is_same_v<T, PriorityPrecedence>) {
          return "precedence " + v.pair.str();
        } else {
          std::string ctx = v.context.empty() ? "" : " when " + join_literals(v.context);
          return "nogood not all {" + join_pairs(v.pairs) + "}" + ctx;
        }
      },
      kind);
  return origin.empty() ? body : origin + ": " + body;
}

bool implies_precedence(const Constraint& k, const ThreadId& hi, const ThreadId& lo) {
  if (const auto* p = std::get_if<PriorityPrecedence>(&k.kind)) return p->pair.above == hi && p->pair.below == lo;
  if (const auto* n = std::get_if<PriorityNogood>(&k.kind))
    return n->pairs.size() == 1 && n->pairs.front().above == lo && n->pairs.front().below == hi;
  return false;
}

bool PriorityConstraints::admits(const PriorityOrder& order) const {
  for (const auto& p : precedences)
    if (!above(order, p)) return false;
  for (const auto& ng : nogoods)
    if (std::all_of(ng.begin(), ng.end(), [&](const ThreadPair& p) { return above(order, p); })) return false;
  return true;
}

namespace {

struct LexSearch {
  const std::vector<ThreadId>& threads;
  const PriorityConstraints& pc;
  std::vector<ThreadId> order;
  std::vector<bool> placed;

  /// 1 = holds for every completion, -1 = fails for every completion, 0 = open.
  int status(const ThreadPair& p) const {
    bool a = std::find(order.begin(), order.end(), p.above) != order.end();
    bool b = std::find(order.begin(), order.end(), p.below) != order.end();
    if (a) return b ? (above(order, p) ? 1 : -1) : 1;
    return b ? -1 : 0;
  }

  bool dead() const {
    for (const auto& p : pc.precedences)
      if (status(p) == -1) return true;
    for (const auto& ng : pc.nogoods)
      if (std::all_of(ng.begin(), ng.end(), [&](const ThreadPair& p) { return status(p) == 1; })) return true;
    return false;
  }

  bool run() {
    if (dead()) return false;
    if (order.size() == threads.size()) return true;
    for (std::size_t i = 0; i < threads.size(); ++i) {
      if (placed[i]) continue;
      placed[i] = true;
      order.push_back(threads[i]);
      if (run()) return true;
      order.pop_back();
      placed[i] = false;
    }
    return false;
  }
};

}  // namespace

std::optional<PriorityOrder> LexicographicPriorities::propose(const Structure& s, const PriorityConstraints& pc) {
  std::vector<ThreadId> sorted = s.threads;
  std::sort(sorted.begin(), sorted.end());
  LexSearch search{sorted, pc, {}, std::vector<bool>(sorted.size(), false)};
  if (!search.run()) return std::nullopt;
  return search.order;
}

ConstraintStore ConstraintStore::init_space(const SoftwareModel& software, const PlatformModel& platform,
                                            const std::set<std::string>& pinned,
                                            std::optional<Configuration> preferred) {
  ConstraintStore st;
  st.software_ = &software;
  st.platform_ = &platform;
  st.preferred_ = std::move(preferred);
  st.candidates_ = connection_candidates(software, pinned);

  for (const auto& t : tasks_of(software, st.candidates_.reachable)) {
    auto& dom = st.task_domains_[t.id];
    for (const auto& r : platform.resources)
      if (r.type == t.step->resource_type) dom.push_back(r.name);
  }

  st.always_selected_ = pinned;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [req, dom] : st.candidates_.domains)
      if (dom.size() == 1 && st.always_selected_.count(req.client) && st.always_selected_.insert(dom.front()).second)
        grew = true;
  }

  for (auto c : {Condition::ConnectionTyping, Condition::UniqueProvider, Condition::MappingType,
                 Condition::ThreadPriority, Condition::MaxClients})
    st.constraints_.push_back({Structural{c}, "structural"});

  State init;
  init.cfg.components = pinned;
  for (const auto& p : pinned)
    for (const auto& r : st.candidates_.requirements_of(p)) init.open.insert(r);
  st.initial_ = std::move(init);
  return st;
}

const std::vector<std::string>& ConstraintStore::resources_for(const TaskId& task) const {
  static const std::vector<std::string> none;
  auto it = task_domains_.find(task);
  return it == task_domains_.end() ? none : it->second;
}

std::vector<Literal> ConstraintStore::normalize(std::vector<Literal> literals) const {
  for (auto& l : literals) {
    if (const auto* c = std::get_if<ConnLit>(&l)) {
      if (candidates_.providers({c->client, c->service}).size() == 1) l = SelLit{c->client};
    } else if (const auto* m = std::get_if<MapLit>(&l)) {
      if (resources_for(m->task).size() == 1) l = SelLit{m->task.component};
    }
  }
  std::set<std::string> implied = always_selected_;
  for (const auto& l : literals) {
    if (const auto* c = std::get_if<ConnLit>(&l)) {
      implied.insert(c->client);
      implied.insert(c->provider);
    } else if (const auto* m = std::get_if<MapLit>(&l)) {
      implied.insert(m->task.component);
    }
  }
  std::erase_if(literals, [&](const Literal& l) {
    const auto* s = std::get_if<SelLit>(&l);
    return s && implied.count(s->component);
  });
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  return literals;
}

void ConstraintStore::add_constraint(Constraint k) {
  if (auto* f = std::get_if<ForbidConjunction>(&k.kind)) {
    f->literals = normalize(std::move(f->literals));
  } else if (auto* n = std::get_if<PriorityNogood>(&k.kind)) {
    n->context = normalize(std::move(n->context));
    std::sort(n->pairs.begin(), n->pairs.end());
    n->pairs.erase(std::unique(n->pairs.begin(), n->pairs.end()), n->pairs.end());
    if (n->context.empty() && n->pairs.size() == 1) {
      ThreadPair inverse{n->pairs.front().below, n->pairs.front().above};
      k.kind = PriorityPrecedence{inverse};
    }
  }
  if (std::find(constraints_.begin(), constraints_.end(), k) != constraints_.end()) return;
  constraints_.push_back(std::move(k));
}

bool ConstraintStore::pruned(const Configuration& partial) const {
  for (const auto& k : constraints_)
    if (const auto* f = std::get_if<ForbidConjunction>(&k.kind); f && holds_all(f->literals, partial)) return true;
  return false;
}

std::optional<ConstraintStore::Variable> ConstraintStore::next_variable(const State& s) const {
  if (!s.open.empty()) return Variable{*s.open.begin(), std::nullopt};
  for (const auto& t : tasks_of(*software_, s.cfg.components))
    if (!s.cfg.mapping.count(t.id)) return Variable{std::nullopt, t.id};
  return std::nullopt;
}

std::vector<std::string> ConstraintStore::options_for(const Variable& v) const {
  std::vector<std::string> opts;
  const std::string* preferred = nullptr;
  if (v.pair) {
    opts = candidates_.providers(*v.pair);
    if (preferred_) preferred = preferred_->provider_of(v.pair->client, v.pair->service);
  } else {
    opts = resources_for(*v.task);
    if (preferred_)
      if (auto it = preferred_->mapping.find(*v.task); it != preferred_->mapping.end()) preferred = &it->second;
  }
  if (preferred) {
    auto it = std::find(opts.begin(), opts.end(), *preferred);
    if (it != opts.end()) std::rotate(opts.begin(), it, it + 1);
  }
  return opts;
}

std::optional<ConstraintStore::State> ConstraintStore::apply(const State& s, const Variable& v,
                                                              const std::string& option) const {
  State next = s;
  if (v.task) {
    next.cfg.mapping[*v.task] = option;
    return next;
  }
  const Requirement& req = *v.pair;
  auto key = std::make_pair(option, req.service);
  int used = next.clients[key];
  auto iface = software_->services.find(req.service);
  if (iface != software_->services.end() && iface->second.max_clients && used >= *iface->second.max_clients)
    return std::nullopt;
  next.clients[key] = used + 1;
  next.open.erase(req);
  next.cfg.connections.insert({req.client, req.service, option});
  if (next.cfg.components.insert(option).second)
    for (const auto& r : candidates_.requirements_of(option)) next.open.insert(r);
  return next;
}

bool ConstraintStore::descend(State s) {
  for (;;) {
    if (pruned(s.cfg)) return false;
    auto v = next_variable(s);
    if (!v) {
      current_ = Structure{s.cfg, threads_of(*software_, s.cfg.components)};
      return true;
    }
    stack_.push_back({*v, options_for(*v), 0, std::move(s)});
    auto next = try_next(stack_.back());
    if (!next) return false;
    s = std::move(*next);
  }
}

std::optional<ConstraintStore::State> ConstraintStore::try_next(Frame& f) const {
  while (f.idx < f.options.size())
    if (auto r = apply(f.state, f.var, f.options[f.idx++])) return r;
  return std::nullopt;
}

std::optional<Structure> ConstraintStore::next_structure() {
  current_.reset();
  emitted_.clear();
  if (!started_) {
    started_ = true;
    if (descend(*initial_)) return current_;
  }
  while (!stack_.empty()) {
    auto next = try_next(stack_.back());
    if (!next) {
      stack_.pop_back();
      continue;
    }
    if (descend(std::move(*next))) return current_;
  }
  return std::nullopt;
}

PriorityConstraints ConstraintStore::priority_constraints_for(const Configuration& structure) const {
  std::set<ThreadId> present;
  for (const auto& t : threads_of(*software_, structure.components)) present.insert(t);
  auto in = [&](const ThreadPair& p) { return present.count(p.above) && present.count(p.below); };

  PriorityConstraints pc;
  for (const auto& k : constraints_) {
    if (const auto* p = std::get_if<PriorityPrecedence>(&k.kind)) {
      if (in(p->pair)) pc.precedences.push_back(p->pair);
    } else if (const auto* n = std::get_if<PriorityNogood>(&k.kind)) {
      if (holds_all(n->context, structure) && std::all_of(n->pairs.begin(), n->pairs.end(), in))
        pc.nogoods.push_back(n->pairs);
    }
  }
  bool same = current_ && current_->config.components == structure.components &&
              current_->config.connections == structure.connections && current_->config.mapping == structure.mapping;
  if (same) {
    for (const auto& order : emitted_) {
      std::vector<ThreadPair> chain;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) chain.push_back({order[i], order[i + 1]});
      pc.nogoods.push_back(std::move(chain));
    }
  }
  return pc;
}

std::optional<Configuration> ConstraintStore::next_priority(PriorityProvider& provider) {
  if (!current_ || pruned(current_->config)) return std::nullopt;
  PriorityConstraints pc = priority_constraints_for(current_->config);
  auto order = provider.propose(*current_, pc);
  if (!order) return std::nullopt;
  std::vector<ThreadId> a = *order, b = current_->threads;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b || !pc.admits(*order)) throw AnalysisError("priority provider proposed an inadmissible order");
  emitted_.push_back(*order);
  Configuration cfg = current_->config;
  cfg.priorities = *order;
  return cfg;
}

std::optional<Configuration> ConstraintStore::next_candidate(PriorityProvider& provider) {
  for (;;) {
    if (current_)
      if (auto c = next_priority(provider)) return c;
    if (!next_structure()) return std::nullopt;
  }
}

std::optional<Configuration> ConstraintStore::next_candidate() {
  LexicographicPriorities lex;
  return next_candidate(lex);
}

std::string ConstraintStore::dump() const {
  std::ostringstream out;
  out << "variables\n";
  for (const auto& c : candidates_.reachable) {
    out << "  sel[" << c << "]";
    if (candidates_.pinned.count(c)) out << " pinned";
    else if (always_selected_.count(c)) out << " forced";
    out << "\n";
  }
  for (const auto& [req, dom] : candidates_.domains) {
    out << "  conn[" << req.client << "," << req.service << "] in {";
    for (std::size_t i = 0; i < dom.size(); ++i) out << (i ? ", " : "") << dom[i];
    out << "}\n";
  }
  for (const auto& [task, dom] : task_domains_) {
    out << "  map[" << task.str() << "] in {";
    for (std::size_t i = 0; i < dom.size(); ++i) out << (i ? ", " : "") << dom[i];
    out << "}\n";
  }
  out << "  rank over selected threads\n";
  out << "constraints\n";
  for (std::size_t i = 0; i < constraints_.size(); ++i) out << "  k" << i << " " << constraints_[i].str() << "\n";
  return out.str();
}

}  // namespace mcc
