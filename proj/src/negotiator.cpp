#include "mcc/negotiator.hpp"

#include <algorithm>
#include <sstream>

#include "mcc/control_flow.hpp"

namespace mcc {

std::string NegotiationTrace::str() const {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

namespace {

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string order_str(const PriorityOrder& pi) {
  std::vector<std::string> names;
  for (const auto& t : pi) names.push_back(t.str());
  return join(names, " > ");
}

std::string structure_str(const Configuration& cfg) {
  std::vector<std::string> conns;
  for (const auto& c : cfg.connections) conns.push_back(c.str());
  std::map<std::string, std::vector<std::string>> by_res;
  for (const auto& [t, r] : cfg.mapping) by_res[r].push_back(t.str());
  std::vector<std::string> maps;
  for (const auto& [r, ts] : by_res) maps.push_back(r + ": " + join(ts, " "));
  return "C={" + join({cfg.components.begin(), cfg.components.end()}, ", ") + "} SC={" + join(conns, ", ") +
         "} M={" + join(maps, "; ") + "}";
}

bool same_threads(PriorityOrder a, PriorityOrder b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

/// Tries the running order first, then exact synthesis under the store's constraints.
class NegotiationPriorities : public PriorityProvider {
 public:
  NegotiationPriorities(std::optional<PriorityOrder> running, InterferenceModel model)
      : running_(std::move(running)), model_(model) {}

  void reset(std::vector<const TaskGraph*> graphs, const std::map<TaskId, std::string>* mapping) {
    graphs_ = std::move(graphs);
    mapping_ = mapping;
    tried_running_ = false;
    synthesis_failed_ = false;
  }

  std::optional<PriorityOrder> propose(const Structure& s, const PriorityConstraints& pc) override {
    if (!tried_running_) {
      tried_running_ = true;
      if (running_ && same_threads(*running_, s.threads) && pc.admits(*running_)) {
        source_ = "running";
        return running_;
      }
    }
    source_ = "synthesized";
    auto r = synthesize_priorities(graphs_, *mapping_, s.threads, pc, model_);
    if (!r) synthesis_failed_ = true;
    return r;
  }

  bool synthesis_failed() const { return synthesis_failed_; }
  const std::string& source() const { return source_; }

 private:
  std::optional<PriorityOrder> running_;
  InterferenceModel model_;
  std::vector<const TaskGraph*> graphs_;
  const std::map<TaskId, std::string>* mapping_ = nullptr;
  bool tried_running_ = false;
  bool synthesis_failed_ = false;
  std::string source_;
};

std::vector<Literal> structure_literals(const Configuration& cfg) {
  std::vector<Literal> out;
  for (const auto& c : cfg.connections) out.push_back(ConnLit{c.client, c.service, c.provider});
  return out;
}

}  // namespace

std::vector<std::string> evaluate(const SoftwareModel& software, const PlatformModel& platform,
                                  const Configuration& cfg, InterferenceModel model, bool& pass) {
  std::vector<std::string> out;
  pass = true;
  auto wf = check_well_formed(cfg, software, platform);
  for (const auto& v : wf) out.push_back("wellformed: " + v.str());
  if (wf.empty()) out.push_back("wellformed: ok");
  pass = wf.empty();

  auto cf = check_not_until(software, cfg);
  for (const auto& v : cf.violations) out.push_back(v.str());
  if (cf.pass()) out.push_back("control_flow: ok");
  pass = pass && cf.pass();
  if (!wf.empty()) return out;

  try {
    for (Mode m : {Mode::Initialization, Mode::Normal}) {
      auto g = build_task_graph(software, cfg, m);
      auto v = check_timing(g, cfg, model);
      for (const auto& l : v.lines()) out.push_back(l);
      pass = pass && v.pass();
    }
  } catch (const AnalysisError& e) {
    out.push_back(std::string("unfold: ") + e.what());
    pass = false;
  }
  return out;
}

NegotiationResult negotiate(const SystemModel& sys, const std::vector<UpdateRequest>& requests,
                            const NegotiationOptions& options) {
  NegotiationResult result;
  SoftwareModel& software = result.software;
  software = sys.software;
  for (const auto& r : requests) software = apply_update(software, r);
  result.answer.previous = sys.config;

  auto& trace = result.trace;
  auto log = [&](std::string line) { trace.lines.push_back(std::move(line)); };

  std::set<std::string> pinned;
  for (const auto& [name, c] : software.contracts)
    for (const auto& t : c.threads)
      if (std::holds_alternative<TimeActivation>(t.activation)) pinned.insert(name);

  std::optional<Configuration> preferred;
  if (!sys.config.components.empty()) preferred = sys.config;
  ConstraintStore store = ConstraintStore::init_space(software, sys.platform, pinned, preferred);
  NegotiationPriorities provider(preferred ? std::optional<PriorityOrder>(preferred->priorities) : std::nullopt,
                                 options.model);

  log("negotiate model=" + model_str(options.model) + " pinned={" + join({pinned.begin(), pinned.end()}, ", ") + "}");

  auto feedback = [&](const std::vector<Constraint>& ks) {
    for (const auto& k : ks) {
      std::size_t before = store.constraints().size();
      store.add_constraint(k);
      if (store.constraints().size() > before) log("  add " + store.constraints().back().str());
    }
  };
  auto over_budget = [&] {
    if (trace.candidates < options.budget) return false;
    log("BUDGET exhausted after " + std::to_string(trace.candidates) + " candidates");
    return true;
  };
  auto fail = [&](const std::string& reason) {
    result.answer.yes = false;
    result.answer.reason = reason;
    for (const auto& k : store.constraints())
      if (!std::holds_alternative<Structural>(k.kind)) result.answer.constraints.push_back(k);
    return result;
  };

  for (std::size_t structures = 1;; ++structures) {
    if (over_budget()) return fail("budget-exhausted");
    auto s = store.next_structure();
    if (!s) {
      log("EXHAUSTED after " + std::to_string(trace.candidates) + " candidates");
      return fail("exhausted");
    }
    ++trace.candidates;
    Configuration cfg = s->config;
    log("structure " + std::to_string(structures) + ": " + structure_str(cfg));

    Configuration probe = cfg;
    probe.priorities = s->threads;
    auto wf = check_well_formed(probe, software, sys.platform);
    if (!wf.empty()) {
      for (const auto& v : wf) log("  wellformed: " + v.str());
      feedback({{ForbidConjunction{structure_literals(cfg)}, "structural"}});
      continue;
    }

    auto cf = check_not_until(software, cfg);
    if (!cf.pass()) {
      for (const auto& v : cf.violations) log("  " + v.str());
      feedback(cf.feedback);
      continue;
    }
    log("  control_flow: ok");

    TaskGraph init, normal;
    try {
      init = build_task_graph(software, cfg, Mode::Initialization);
      normal = build_task_graph(software, cfg, Mode::Normal);
    } catch (const AnalysisError& e) {
      log(std::string("  unfold: ") + e.what());
      feedback({{ForbidConjunction{structure_literals(cfg)}, "structural"}});
      continue;
    }

    bool overloaded = false;
    for (const TaskGraph* g : {&init, &normal}) {
      auto u = utilization(*g, cfg.mapping);
      if (std::none_of(u.begin(), u.end(), [](const auto& e) { return e.second > Rational(1); })) continue;
      auto v = check_timing(*g, probe, options.model);
      for (const auto& l : v.lines()) log("  " + l);
      feedback(v.feedback);
      overloaded = true;
    }
    if (overloaded) continue;

    feedback(derive_precedences(init, cfg.mapping));
    feedback(derive_precedences(normal, cfg.mapping));

    provider.reset({&init, &normal}, &cfg.mapping);
    for (;;) {
      if (over_budget()) return fail("budget-exhausted");
      auto cand = store.next_priority(provider);
      if (!cand) break;
      ++trace.candidates;
      log("  candidate " + std::to_string(trace.candidates) + " priorities (" + provider.source() +
          "): " + order_str(cand->priorities));
      bool pass = true;
      std::vector<Constraint> ks;
      for (const TaskGraph* g : {&init, &normal}) {
        auto v = check_timing(*g, *cand, options.model);
        for (const auto& l : v.lines()) log("    " + l);
        pass = pass && v.pass();
        ks.insert(ks.end(), v.feedback.begin(), v.feedback.end());
      }
      if (pass) {
        log("ACCEPT candidate " + std::to_string(trace.candidates));
        bool ok = false;
        result.answer.yes = true;
        result.answer.config = *cand;
        result.answer.report = evaluate(software, sys.platform, *cand, options.model, ok);
        if (!ok) throw AnalysisError("accepted configuration fails its standalone re-check");
        return result;
      }
      feedback(ks);
    }
    if (provider.synthesis_failed()) {
      Configuration dm = cfg;
      dm.priorities = deadline_monotonic({&init, &normal}, s->threads);
      log("  no admissible priority order; deadline-monotonic probe: " + order_str(dm.priorities));
      for (const TaskGraph* g : {&init, &normal}) {
        auto v = check_timing(*g, dm, options.model);
        for (const auto& l : v.lines()) log("    " + l);
        feedback(v.feedback);
      }
    }
  }
}

std::string render_answer(const Answer& a) {
  std::ostringstream out;
  if (a.yes) {
    out << "answer yes\n";
    for (const auto& l : a.report) out << "  " << l << "\n";
  } else {
    out << "answer no (" << a.reason << ")\n";
    for (const auto& k : a.constraints) out << "  " << k.str() << "\n";
  }
  return out.str();
}

}  // namespace mcc
