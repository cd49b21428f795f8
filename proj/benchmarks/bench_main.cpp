#include <benchmark/benchmark.h>

#include "bpmncheck/benchgen.hpp"
#include "bpmncheck/explore.hpp"
#include "bpmncheck/generate.hpp"
#include "bpmncheck/state.hpp"

using namespace bpmncheck;

static void BM_CanonicalKey(benchmark::State& state) {
    BpmnModel model = gen_parallel(static_cast<int>(state.range(0)));
    ExecutionState start = generate_start_state(model);
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonical_key(start));
    }
}
BENCHMARK(BM_CanonicalKey)->Arg(2)->Arg(10);

static void BM_ApplyRule(benchmark::State& state) {
    BpmnModel model = gen_parallel(static_cast<int>(state.range(0)));
    RuleSet rs = generate_rules(model);
    ExecutionState start = normalize(rs.start_state);
    for (auto _ : state) {
        for (const auto& rule : rs.rules) benchmark::DoNotOptimize(apply_rule(rule, start));
    }
}
BENCHMARK(BM_ApplyRule)->Arg(2)->Arg(10);

static void BM_RuleGeneration(benchmark::State& state) {
    BpmnModel model = gen_blocks(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_rules(model));
    }
}
BENCHMARK(BM_RuleGeneration)->Arg(10)->Arg(50)->Arg(100)->Arg(300);

static void BM_Explore(benchmark::State& state) {
    BpmnModel model = gen_parallel(static_cast<int>(state.range(0)));
    RuleSet rs = generate_rules(model);
    for (auto _ : state) {
        Lts lts = explore(rs);
        benchmark::DoNotOptimize(lts.stats.state_count);
    }
}
BENCHMARK(BM_Explore)->Arg(3)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
