#include "mcc/control_flow.hpp"

#include <algorithm>

namespace mcc {

std::map<ThreadId, std::set<Mode>> thread_modes(const SoftwareModel& software, const Configuration& cfg) {
  std::map<ThreadId, std::set<Mode>> modes;
  for (const auto& c : cfg.components) {
    for (const auto& t : software.contract(c).threads) {
      auto& m = modes[{c, t.name}];
      if (std::holds_alternative<Initialization>(t.activation)) m.insert(Mode::Initialization);
      if (std::holds_alternative<TimeActivation>(t.activation)) m.insert(Mode::Normal);
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : cfg.components) {
      for (const auto& t : software.contract(c).threads) {
        const auto caller_modes = modes[{c, t.name}];
        for (const auto& s : t.steps) {
          const auto* call = std::get_if<CallStep>(&s);
          if (!call) continue;
          const std::string* p = cfg.provider_of(c, call->target.service);
          if (!p || !cfg.components.count(*p)) continue;
          const Thread* entry = software.contract(*p).entry_thread(call->target);
          if (!entry) continue;
          auto& em = modes[{*p, entry->name}];
          for (auto m : caller_modes) changed |= em.insert(m).second;
        }
      }
    }
  }
  return modes;
}

std::vector<CallSite> call_profile(const SoftwareModel& software, const Configuration& cfg) {
  auto modes = thread_modes(software, cfg);
  std::vector<CallSite> out;
  for (const auto& c : cfg.components) {
    for (const auto& t : software.contract(c).threads) {
      ThreadId id{c, t.name};
      for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto* call = std::get_if<CallStep>(&t.steps[i]);
        if (!call) continue;
        const std::string* p = cfg.provider_of(c, call->target.service);
        for (auto m : modes[id]) out.push_back({c, id, call->target, m, i, p ? *p : std::string()});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const CallSite& a, const CallSite& b) {
    return std::tie(a.client, a.thread, a.step, a.mode) < std::tie(b.client, b.thread, b.step, b.mode);
  });
  return out;
}

std::string CfViolation::str() const {
  return "control_flow: " + provider + "." + forbidden.str() + " reachable before " + prerequisite.str() + " via " +
         client + "/" + thread.name;
}

CfVerdict check_not_until(const SoftwareModel& software, const Configuration& cfg) {
  auto profile = call_profile(software, cfg);
  CfVerdict verdict;
  for (const auto& owner : cfg.components) {
    for (const auto& req : software.contract(owner).control_flow) {
      for (const auto& site : profile) {
        if (!site.method.same_method(req.forbidden) || site.provider.empty()) continue;
        if (site.provider != owner && site.client != owner) continue;
        bool self_init = std::any_of(profile.begin(), profile.end(), [&](const CallSite& s) {
          return s.thread == site.thread && s.mode == site.mode && s.step < site.step &&
                 s.method.same_method(req.prerequisite) && s.provider == site.provider;
        });
        if (self_init) continue;
        bool ok = false;
        if (site.mode == Mode::Normal) {
          ok = std::any_of(profile.begin(), profile.end(), [&](const CallSite& s) {
            return s.mode == Mode::Initialization && s.method.same_method(req.prerequisite) &&
                   s.provider == site.provider;
          });
        }
        if (ok) continue;
        CfViolation v{site.provider, req.forbidden, req.prerequisite, site.client, site.thread};
        if (std::any_of(verdict.violations.begin(), verdict.violations.end(), [&](const CfViolation& o) {
              return o.str() == v.str();
            }))
          continue;
        verdict.violations.push_back(v);
        Constraint k{ForbidConjunction{{ConnLit{site.client, site.method.service, site.provider}}}, "control_flow"};
        if (std::find(verdict.feedback.begin(), verdict.feedback.end(), k) == verdict.feedback.end())
          verdict.feedback.push_back(std::move(k));
      }
    }
  }
  return verdict;
}

}  // namespace mcc
