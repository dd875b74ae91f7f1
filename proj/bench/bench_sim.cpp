// Offset-grid search: serial reference vs OpenMP.

#include <benchmark/benchmark.h>

#include "mcc/io.hpp"
#include "mcc/sim.hpp"

using namespace mcc;

namespace {

struct Instance {
  TaskGraph graph;
  Configuration cfg;
};

/// Post-update automotive system, lane chain above the park chain.
const Instance& instance() {
  static const Instance inst = [] {
    const std::string corpus = MCC_CORPUS;
    SoftwareModel sw = load_contract_dir(corpus + "/contracts", corpus + "/services.repo");
    for (const char* up : {"/uploads/S.contract", "/uploads/L.contract"})
      sw = apply_update(sw, {ChangeType::Add, load_contract_file(corpus + up)});
    Configuration cfg = parse_configuration(
        "[selected]\nL\nO1\nO2\nP\nS\nT\n"
        "[connections]\nL -> object_masking -> O2\nL -> object_recognition -> O2\nL -> steering -> S\n"
        "P -> trajectory_calculation -> T\nT -> object_recognition -> O1\n"
        "[mapping]\nL.la1 -> CPU1\nL.la2 -> CPU1\nL.la3 -> CPU1\nL.la4 -> CPU1\nO1.or1 -> CPU1\nO2.om -> CPU1\n"
        "O2.or2 -> CPU1\nP.p1 -> CPU1\nP.p2 -> CPU1\nS.s -> CPU1\nT.tc1 -> CPU1\nT.tc2 -> CPU1\nT.tci -> CPU1\n"
        "[priorities]\n0 L.lane_assist\n1 O2.object_masking_get\n2 O2.object_recognition_get\n"
        "3 S.steering_set_angle\n4 O1.object_recognition_get\n5 P.park_assist\n6 T.trajectory_calculation_get\n"
        "7 P.init\n8 T.trajectory_calculation_init\n");
    return Instance{build_task_graph(sw, cfg, Mode::Normal), cfg};
  }();
  return inst;
}

void BM_GridSerial(benchmark::State& state) {
  const auto& in = instance();
  for (auto _ : state) benchmark::DoNotOptimize(worst_observed_serial(in.graph, in.cfg, state.range(0)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid_size(in.graph, state.range(0))));
}

void BM_GridParallel(benchmark::State& state) {
  const auto& in = instance();
  for (auto _ : state) benchmark::DoNotOptimize(worst_observed(in.graph, in.cfg, state.range(0)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid_size(in.graph, state.range(0))));
}

}  // namespace

BENCHMARK(BM_GridSerial)->Arg(1)->Arg(5);
BENCHMARK(BM_GridParallel)->Arg(1)->Arg(5);

BENCHMARK_MAIN();
