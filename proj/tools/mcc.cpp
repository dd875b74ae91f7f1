// Command-line front end: negotiate, validate, deps, graph, simulate, bound, ast.
// Exit status: 0 = yes / pass, 1 = no / fail, 2 = input error.

#include <filesystem>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "mcc/control_flow.hpp"
#include "mcc/deps.hpp"
#include "mcc/io.hpp"
#include "mcc/negotiator.hpp"
#include "mcc/sim.hpp"
#include "mcc/timing.hpp"

namespace fs = std::filesystem;
using namespace mcc;

namespace {

struct Inputs {
  std::string contracts;
  std::string services;
  std::string platform;
  std::string config;
  std::string model = "busy-window";
};

void add_model_inputs(CLI::App* cmd, Inputs& in, bool platform, bool config) {
  cmd->add_option("--contracts", in.contracts, "Directory of *.contract files")->required();
  cmd->add_option("--services", in.services, "Service repository file")->required();
  if (platform) cmd->add_option("--platform", in.platform, "Platform file")->required();
  if (config) cmd->add_option("--config", in.config, "Configuration file")->required();
  cmd->add_option("--model", in.model, "Interference model")->check(CLI::IsMember({"busy-window", "single-blocking"}));
}

std::set<std::string> time_components(const SoftwareModel& sw) {
  std::set<std::string> out;
  for (const auto& [name, c] : sw.contracts)
    for (const auto& t : c.threads)
      if (std::holds_alternative<TimeActivation>(t.activation)) out.insert(name);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contract-based negotiation of embedded software updates"};
  app.require_subcommand(1);

  Inputs in;
  std::string request, out_dir = ".", mode = "both", chain, contract_file, dot;
  std::vector<std::string> pins;
  bool trace = false, dump_store = false;
  Time step = 1;
  std::optional<std::uint64_t> seed;

  auto* neg = app.add_subcommand("negotiate", "Search for a feasible configuration after an update");
  add_model_inputs(neg, in, true, false);
  neg->add_option("--config", in.config, "Running configuration (optional)");
  neg->add_option("--request", request, "Request file")->required();
  neg->add_option("--out", out_dir, "Output directory");
  neg->add_flag("--trace", trace, "Print the negotiation trace");
  neg->add_flag("--dump-store", dump_store, "Print the final constraint store");

  auto* val = app.add_subcommand("validate", "Check a configuration against every viewpoint");
  add_model_inputs(val, in, true, true);

  auto* deps = app.add_subcommand("deps", "Must/may connection candidates");
  add_model_inputs(deps, in, false, false);
  deps->add_option("--pin", pins, "Pinned components (default: time-activated ones)");
  deps->add_option("--dot", dot, "Also write a Graphviz file");

  auto* graph = app.add_subcommand("graph", "Unfolded task chains of a configuration");
  add_model_inputs(graph, in, false, true);
  graph->add_option("--mode", mode, "Mode")->check(CLI::IsMember({"initialization", "normal", "both"}));

  auto* sim = app.add_subcommand("simulate", "Worst observed latencies over an offset grid");
  add_model_inputs(sim, in, true, true);
  sim->add_option("--step", step, "Offset grid step")->check(CLI::PositiveNumber);
  sim->add_flag("--trace", trace, "Print the schedule of the synchronous (or seeded) scenario");
  sim->add_option("--seed", seed, "Simulate one random scenario drawn with this seed");

  auto* bound = app.add_subcommand("bound", "Latency bounds of a configuration");
  add_model_inputs(bound, in, true, true);
  bound->add_option("--chain", chain, "Root thread (Component.thread) for a whole-chain bound");

  auto* ast = app.add_subcommand("ast", "Structural dump of one contract");
  ast->add_option("contract", contract_file, "Contract file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ast->parsed()) {
      std::cout << dump_ast(load_contract_file(contract_file));
      return 0;
    }

    SoftwareModel sw = load_contract_dir(in.contracts, in.services);
    InterferenceModel model = parse_model(in.model);

    if (deps->parsed()) {
      std::set<std::string> pinned(pins.begin(), pins.end());
      if (pins.empty()) pinned = time_components(sw);
      auto cc = connection_candidates(sw, pinned);
      std::cout << render_edge_list(cc) << "solutions " << count_solutions(cc, sw.services) << "\n";
      if (!dot.empty()) write_file(dot, render_dot(cc));
      return 0;
    }

    if (graph->parsed()) {
      Configuration cfg = load_configuration(in.config);
      for (Mode m : {Mode::Initialization, Mode::Normal})
        if (mode == "both" || mode == mode_str(m)) std::cout << render_chains(build_task_graph(sw, cfg, m));
      return 0;
    }

    PlatformModel platform = load_platform(in.platform);

    if (neg->parsed()) {
      SystemModel sys{sw, platform, {}};
      if (!in.config.empty()) sys.config = load_configuration(in.config);
      auto requests = load_requests(request);
      auto res = negotiate(sys, requests, {model});
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "trace.txt", res.trace.str());
      write_file(fs::path(out_dir) / "answer.txt", render_answer(res.answer));
      write_file(fs::path(out_dir) / "previous.cfg", render_configuration(res.answer.previous));
      if (res.answer.yes) write_file(fs::path(out_dir) / "configuration.cfg", render_configuration(*res.answer.config));
      if (trace) std::cout << res.trace.str();
      std::cout << render_answer(res.answer);
      if (dump_store) {
        SystemModel after{res.software, platform, sys.config};
        auto store = ConstraintStore::init_space(after.software, platform, time_components(res.software));
        for (const auto& k : res.answer.constraints) store.add_constraint(k);
        std::cout << store.dump();
      }
      return res.answer.yes ? 0 : 1;
    }

    Configuration cfg = load_configuration(in.config);

    if (val->parsed()) {
      bool pass = false;
      for (const auto& l : evaluate(sw, platform, cfg, model, pass)) std::cout << l << "\n";
      std::cout << (pass ? "PASS" : "FAIL") << "\n";
      return pass ? 0 : 1;
    }

    if (bound->parsed()) {
      if (auto v = check_well_formed(cfg, sw, platform); !v.empty()) {
        for (const auto& x : v) std::cout << "wellformed: " << x.str() << "\n";
        return 1;
      }
      bool pass = true;
      for (Mode m : {Mode::Initialization, Mode::Normal}) {
        auto g = build_task_graph(sw, cfg, m);
        if (!chain.empty()) {
          auto root = QualifiedName::parse(chain);
          for (std::size_t c = 0; c < g.chains.size(); ++c)
            if (g.chains[c].root == root) {
              auto b = chain_latency_bound(g, c, 0, g.chains[c].nodes.size(), cfg, model);
              std::cout << "chain " << chain << " mode=" << mode_str(m)
                        << ": bound=" << (b ? std::to_string(*b) : "unbounded") << " model=" << in.model << "\n";
            }
          continue;
        }
        auto v = check_timing(g, cfg, model);
        for (const auto& l : v.lines()) std::cout << l << "\n";
        pass = pass && v.pass();
      }
      return pass ? 0 : 1;
    }

    if (sim->parsed()) {
      if (auto v = check_well_formed(cfg, sw, platform); !v.empty()) {
        for (const auto& x : v) std::cout << "wellformed: " << x.str() << "\n";
        return 1;
      }
      for (Mode m : {Mode::Initialization, Mode::Normal}) {
        auto g = build_task_graph(sw, cfg, m);
        if (seed || trace) {
          ReleaseScenario sc = grid_scenario(g, step, 0);
          if (seed) {
            std::mt19937_64 rng(*seed + static_cast<std::uint64_t>(m));
            for (std::size_t c = 0; c < g.chains.size(); ++c) {
              const auto& ev = g.chains[c].event;
              if (ev.one_shot()) continue;
              sc.chains[c].offset = std::uniform_int_distribution<Time>(0, *ev.period - 1)(rng);
              sc.chains[c].jitter.clear();
              for (Time t = 0; t < sc.horizon; t += *ev.period)
                sc.chains[c].jitter.push_back(std::uniform_int_distribution<Time>(0, ev.jitter)(rng));
            }
          }
          auto r = simulate(g, cfg, sc, trace);
          for (const auto& l : r.trace) std::cout << l << "\n";
          for (std::size_t c = 0; c < g.chains.size(); ++c) {
            Time worst = 0;
            for (auto l : r.latencies[c]) worst = std::max(worst, l);
            std::cout << "scenario " << g.chains[c].root.str() << " mode=" << mode_str(m) << ": max latency=" << worst
                      << "\n";
          }
          if (seed) continue;
        }
        auto o = worst_observed(g, cfg, step);
        for (std::size_t c = 0; c < g.chains.size(); ++c) {
          std::cout << "observed " << g.chains[c].root.str() << " mode=" << mode_str(m)
                    << ": max latency=" << o.chain_max[c] << "\n";
          for (std::size_t i = 0; i < g.chains[c].requirements.size(); ++i)
            std::cout << "observed " << g.chains[c].requirements[i].str() << ": max latency=" << o.requirement_max[c][i]
                      << "\n";
        }
      }
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AnalysisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
