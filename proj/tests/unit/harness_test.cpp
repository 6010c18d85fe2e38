#include <wleng/error.hpp>
#include <wleng/harness.hpp>

#include <gtest/gtest.h>

#include <algorithm>

namespace wleng {
namespace {

WorkloadSpec two_slot_workload(NodeIndex access, Bandwidth demand = 128 * kMbps) {
    WorkloadSpec w;
    w.vcpus = 4;
    w.memory_gb = 8;
    w.storage_gb = 512;
    w.access_pops = {access};
    w.demand_bw = demand;
    return w;
}

WorkloadStream repeat(const WorkloadSpec& w, std::size_t n) {
    return WorkloadStream{0, std::vector<WorkloadSpec>(n, w)};
}

TEST(RunIteration, TwoNodeToyStopsOnHeadroom) {
    const auto env = Environment::create(
        Topology({{"a", NodeRole::Access}, {"d", NodeRole::Dc, 4}}, {{"a", "d", 10 * kGbps, 1000}}));
    const auto stream = repeat(two_slot_workload(0), 5);
    for (Algorithm a : {Algorithm::Random, Algorithm::DataCentreOpt, Algorithm::PathUtilOpt, Algorithm::LatencyOpt}) {
        const auto r = run_iteration(env, stream, a, nullptr, {}, 1);
        EXPECT_EQ(r.placed_count, 1u);
        EXPECT_EQ(r.stop_reason, StopReason::DcCapacity);
    }
}

TEST(RunIteration, FirstWorkloadInfeasible) {
    const auto env = Environment::create(
        Topology({{"a", NodeRole::Access}, {"d", NodeRole::Dc, 100}}, {{"a", "d", kGbps, 1000}}));
    const auto r = run_iteration(env, repeat(two_slot_workload(0, 950 * kMbps), 3), Algorithm::PathUtilOpt, nullptr,
                                 {}, 1);
    EXPECT_EQ(r.placed_count, 0u);
    EXPECT_EQ(r.stop_reason, StopReason::Bandwidth);
}

TEST(RunIteration, StreamExhausted) {
    const auto env = Environment::create(
        Topology({{"a", NodeRole::Access}, {"d", NodeRole::Dc, 1000}}, {{"a", "d", 100 * kGbps, 1000}}));
    const auto r = run_iteration(env, repeat(two_slot_workload(0), 50), Algorithm::Random, nullptr, {}, 1);
    EXPECT_EQ(r.placed_count, 50u);
    EXPECT_EQ(r.stop_reason, StopReason::StreamExhausted);
}

TEST(RunIteration, SkipInfeasibleKeepsGoing) {
    const auto env = Environment::create(
        Topology({{"a", NodeRole::Access}, {"d", NodeRole::Dc, 100}}, {{"a", "d", kGbps, 1000}}));
    WorkloadStream s = repeat(two_slot_workload(0, 100 * kMbps), 4);
    s.workloads[1].demand_bw = 950 * kMbps;
    RunOptions opt;
    EXPECT_EQ(run_iteration(env, s, Algorithm::PathUtilOpt, nullptr, opt, 1).placed_count, 1u);
    opt.skip_infeasible = true;
    EXPECT_EQ(run_iteration(env, s, Algorithm::PathUtilOpt, nullptr, opt, 1).placed_count, 3u);
}

TEST(RunIteration, QLearningNeedsMatchingTable) {
    const auto env = Environment::create(
        Topology({{"a", NodeRole::Access}, {"d", NodeRole::Dc, 4}}, {{"a", "d", 10 * kGbps, 1000}}));
    const auto stream = repeat(two_slot_workload(0), 2);
    EXPECT_THROW(run_iteration(env, stream, Algorithm::QLearning, nullptr, {}, 1), ValidationError);
    const QTable wrong(Hyperparams{}, {"x"});
    EXPECT_THROW(run_iteration(env, stream, Algorithm::QLearning, &wrong, {}, 1), ValidationError);
    const QTable empty(Hyperparams{}, {"d"});
    EXPECT_EQ(run_iteration(env, stream, Algorithm::QLearning, &empty, {}, 1).placed_count, 1u);
}

TEST(RunIteration, Deterministic) {
    const auto env = Environment::create(generate_topology({}));
    const auto stream = generate_stream(3, 300, env.topology);
    const auto a = run_iteration(env, stream, Algorithm::Random, nullptr, {}, 77);
    const auto b = run_iteration(env, stream, Algorithm::Random, nullptr, {}, 77);
    EXPECT_EQ(a, b);
}

// Every workload has legs from a, d1 and d2. Hosting at d2 sends two legs
// over the thin a-d2 link, hosting at d1 only one, so PathUtilOpt always
// picks d1 while DataCentreOpt prefers d2's bigger cluster and fills the
// thin link twice as fast.
Environment skewed_toy() {
    return Environment::create(Topology(
        {{"a", NodeRole::Access}, {"d1", NodeRole::Dc, 100}, {"d2", NodeRole::Dc, 200}},
        {{"a", "d1", 40 * kGbps, 1000}, {"a", "d2", 5 * kGbps, 1000}}));
}

TEST(RunComparison, PathUtilWinsToy) {
    const auto env = skewed_toy();
    ExperimentConfig cfg;
    cfg.iterations = 3;
    cfg.stream_length = 200;
    cfg.algorithms = {Algorithm::DataCentreOpt, Algorithm::PathUtilOpt};
    cfg.workloads.selection = AccessSelection::FixedSize;
    cfg.workloads.fixed_k = 3;
    const auto result = run_comparison(env, cfg);
    EXPECT_EQ(result.report.at(Algorithm::PathUtilOpt).win_rate, 1.0);
    EXPECT_EQ(result.report.at(Algorithm::DataCentreOpt).win_rate, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_GT(result.raw[2 * i + 1].placed_count, result.raw[2 * i].placed_count);
    }
}

TEST(RunComparison, RandomOnlyNormalizesToOne) {
    const auto env = Environment::create(generate_topology({}));
    ExperimentConfig cfg;
    cfg.iterations = 4;
    cfg.stream_length = 200;
    cfg.algorithms = {Algorithm::Random};
    const auto result = run_comparison(env, cfg);
    EXPECT_EQ(result.report.at(Algorithm::Random).normalized_mean, 1.0);
    EXPECT_EQ(result.report.at(Algorithm::Random).win_rate, 1.0);
}

TEST(RunComparison, SameConfigSameBytes) {
    const auto env = Environment::create(generate_topology({}));
    ExperimentConfig cfg;
    cfg.iterations = 6;
    cfg.stream_length = 300;
    cfg.algorithms = {Algorithm::Random, Algorithm::LatencyOpt, Algorithm::PathUtilOpt};
    cfg.threads = 3;
    const auto a = results_csv(run_comparison(env, cfg).raw);
    cfg.threads = 1;
    const auto b = results_csv(run_comparison(env, cfg).raw);
    EXPECT_EQ(a, b);
}

TEST(RunComparison, AlgorithmsShareStreamsAndIgnoreOrder) {
    const auto env = Environment::create(generate_topology({}));
    ExperimentConfig cfg;
    cfg.iterations = 5;
    cfg.stream_length = 300;
    cfg.algorithms = {Algorithm::Random, Algorithm::DataCentreOpt, Algorithm::PathUtilOpt, Algorithm::LatencyOpt};
    const auto forward = run_comparison(env, cfg).raw;
    for (std::size_t i = 0; i < cfg.iterations; ++i) {
        for (std::size_t k = 1; k < 4; ++k) {
            EXPECT_EQ(forward[i * 4 + k].stream_fingerprint, forward[i * 4].stream_fingerprint);
        }
    }
    std::reverse(cfg.algorithms.begin(), cfg.algorithms.end());
    const auto backward = run_comparison(env, cfg).raw;
    for (const auto& f : forward) {
        const auto it = std::find_if(backward.begin(), backward.end(), [&](const IterationResult& b) {
            return b.algorithm == f.algorithm && b.iteration == f.iteration;
        });
        ASSERT_NE(it, backward.end());
        EXPECT_EQ(it->placed_count, f.placed_count);
    }
}

TEST(RunComparison, ConfigValidation) {
    const auto env = Environment::create(generate_topology({}));
    ExperimentConfig cfg;
    cfg.iterations = 0;
    EXPECT_THROW(run_comparison(env, cfg), ValidationError);
    cfg = {};
    cfg.algorithms = {Algorithm::QLearning};
    EXPECT_THROW(run_comparison(env, cfg), ValidationError);
    cfg = {};
    cfg.run.controller.threshold = 1.5;
    EXPECT_THROW(run_comparison(env, cfg), ValidationError);
}

IterationResult row(Algorithm a, std::size_t i, std::size_t n) {
    return IterationResult{a, i, n, StopReason::Bandwidth, 0};
}

TEST(Report, SingleRow) {
    const auto rep = summarize({row(Algorithm::LatencyOpt, 0, 17)});
    const auto& s = rep.at(Algorithm::LatencyOpt);
    EXPECT_EQ(s.mean, 17.0);
    EXPECT_EQ(s.min, 17u);
    EXPECT_EQ(s.max, 17u);
    EXPECT_FALSE(s.normalized_mean);
}

TEST(Report, FixtureArithmetic) {
    const std::vector<IterationResult> raw = {
        row(Algorithm::Random, 0, 10),      row(Algorithm::PathUtilOpt, 0, 14), row(Algorithm::QLearning, 0, 14),
        row(Algorithm::Random, 1, 12),      row(Algorithm::PathUtilOpt, 1, 11), row(Algorithm::QLearning, 1, 15),
        row(Algorithm::Random, 2, 13),      row(Algorithm::PathUtilOpt, 2, 16), row(Algorithm::QLearning, 2, 12),
        row(Algorithm::Random, 3, 9),       row(Algorithm::PathUtilOpt, 3, 15), row(Algorithm::QLearning, 3, 17),
    };
    const auto files = emit_report(raw);
    const auto& r = files.report.at(Algorithm::Random);
    const auto& p = files.report.at(Algorithm::PathUtilOpt);
    const auto& q = files.report.at(Algorithm::QLearning);
    EXPECT_DOUBLE_EQ(r.mean, 11.0);
    EXPECT_DOUBLE_EQ(p.mean, 14.0);
    EXPECT_DOUBLE_EQ(q.mean, 14.5);
    EXPECT_EQ(r.min, 9u);
    EXPECT_EQ(r.max, 13u);
    EXPECT_EQ(p.min, 11u);
    EXPECT_EQ(q.max, 17u);
    EXPECT_EQ(*r.normalized_mean, 1.0);
    EXPECT_DOUBLE_EQ(*p.normalized_mean, 14.0 / 11.0);
    EXPECT_DOUBLE_EQ(*q.normalized_mean, 14.5 / 11.0);
    // iteration 0 is a tie between PathUtilOpt and QLearning.
    EXPECT_EQ(p.wins, 2u);
    EXPECT_EQ(q.wins, 3u);
    EXPECT_EQ(r.wins, 0u);
    EXPECT_DOUBLE_EQ(q.win_rate, 0.75);
    EXPECT_DOUBLE_EQ(p.win_rate, 0.5);

    EXPECT_NE(files.summary.find("\"win_rate\": 0.75"), std::string::npos);
    EXPECT_EQ(files.plot.substr(0, files.plot.find('\n')), "algorithm,iteration,placed_count,normalized_to_random_mean");
    EXPECT_NE(files.plot.find("QLearning,3,17,1.545455\n"), std::string::npos);
    EXPECT_EQ(std::count(files.plot.begin(), files.plot.end(), '\n'), 13);
}

TEST(Report, StrictWinnersSumToOne) {
    const std::vector<IterationResult> raw = {row(Algorithm::Random, 0, 3), row(Algorithm::LatencyOpt, 0, 4),
                                              row(Algorithm::Random, 1, 6), row(Algorithm::LatencyOpt, 1, 5),
                                              row(Algorithm::Random, 2, 2), row(Algorithm::LatencyOpt, 2, 7)};
    const auto rep = summarize(raw);
    EXPECT_DOUBLE_EQ(rep.at(Algorithm::Random).win_rate + rep.at(Algorithm::LatencyOpt).win_rate, 1.0);
}

TEST(Report, EmptyInputRejected) {
    EXPECT_THROW(emit_report({}), ValidationError);
}

TEST(ResultsCsv, RoundTrip) {
    std::vector<IterationResult> raw = {row(Algorithm::Random, 0, 10), row(Algorithm::QLearning, 0, 12)};
    raw[1].stop_reason = StopReason::StreamExhausted;
    const auto text = results_csv(raw);
    EXPECT_EQ(text, "algorithm,iteration,placed_count,stop_reason\n"
                    "Random,0,10,bandwidth\n"
                    "QLearning,0,12,stream_exhausted\n");
    EXPECT_EQ(parse_results_csv(text), raw);
    EXPECT_THROW(parse_results_csv("a,b\n"), ValidationError);
}

TEST(RewardLog, GoldenFormat) {
    const std::vector<RewardWindow> log = {{0, -2345.5, 3}, {1, 1810.25, 0}};
    EXPECT_EQ(reward_log_csv(log), "window_index,total_reward,placements_failed\n"
                                   "0,-2345.500000,3\n"
                                   "1,1810.250000,0\n");
}

TEST(RunTraining, FilesAreStable) {
    const auto env = Environment::create(generate_topology({}));
    TrainingConfig cfg;
    cfg.workload_count = 5000;
    cfg.seed = 8;
    const auto a = run_training(env, cfg);
    const auto b = run_training(env, cfg);
    EXPECT_EQ(a.qtable, b.qtable);
    EXPECT_EQ(a.reward_log, b.reward_log);
    EXPECT_EQ(std::count(a.reward_log.begin(), a.reward_log.end(), '\n'), 6);
}

TEST(Algorithms, ParseNames) {
    for (Algorithm a : kAllAlgorithms) EXPECT_EQ(parse_algorithm(to_string(a)), a);
    EXPECT_EQ(parse_algorithm("q-learning"), Algorithm::QLearning);
    EXPECT_EQ(parse_algorithm_list("random,PathUtilOpt"),
              (std::vector<Algorithm>{Algorithm::Random, Algorithm::PathUtilOpt}));
    EXPECT_THROW(parse_algorithm_list("random,random"), ValidationError);
    EXPECT_THROW(parse_algorithm_list("nope"), ValidationError);
}

} // namespace
} // namespace wleng
