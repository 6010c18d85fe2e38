#include <wleng/controller.hpp>
#include <wleng/harness.hpp>
#include <wleng/rl.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace wleng;

const Environment& default_env() {
    static const Environment env = Environment::create(generate_topology({}));
    return env;
}

void BM_ComputePaths(benchmark::State& state) {
    const Topology& t = default_env().topology;
    const auto& access = t.access_nodes();
    const auto& dcs = t.dc_nodes();
    std::size_t i = 0;
    for (auto _ : state) {
        const NodeIndex a = access[i % access.size()];
        const NodeIndex d = dcs[(i / access.size()) % dcs.size()];
        ++i;
        if (a == d) continue;
        benchmark::DoNotOptimize(t.compute_paths(a, d));
    }
}
BENCHMARK(BM_ComputePaths);

void BM_Place(benchmark::State& state) {
    const auto stream = generate_stream(1, 4096, default_env().topology);
    Environment env = default_env();
    Rng rng(1);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto outcome = place(env, stream.workloads[i++ % stream.workloads.size()], Policy::PathUtilOpt, {}, rng);
        if (!is_placed(outcome)) env.reset();
        benchmark::DoNotOptimize(outcome);
    }
}
BENCHMARK(BM_Place);

void BM_EncodeState(benchmark::State& state) {
    const auto w = generate_stream(1, 1, default_env().topology).workloads.front();
    for (auto _ : state) benchmark::DoNotOptimize(encode_state(default_env(), w, {}));
}
BENCHMARK(BM_EncodeState);

void BM_Train(benchmark::State& state) {
    const auto steps = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(train(default_env(), steps, {}, 1));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * steps));
}
BENCHMARK(BM_Train)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_RunIteration(benchmark::State& state) {
    const auto stream = generate_stream(1, 2000, default_env().topology);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_iteration(default_env(), stream, Algorithm::LatencyOpt, nullptr, {}, 1));
    }
}
BENCHMARK(BM_RunIteration)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
