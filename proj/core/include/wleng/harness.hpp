#pragma once

#include <wleng/controller.hpp>
#include <wleng/environment.hpp>
#include <wleng/rl.hpp>
#include <wleng/workload.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wleng {

enum class Algorithm { Random, DataCentreOpt, PathUtilOpt, LatencyOpt, QLearning };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Random, Algorithm::DataCentreOpt, Algorithm::PathUtilOpt,
                                               Algorithm::LatencyOpt, Algorithm::QLearning};

std::string_view to_string(Algorithm algorithm);
/// Case-insensitive; also accepts "qlearning"/"q-learning".
std::optional<Algorithm> parse_algorithm(std::string_view text);
/// Comma-separated list. Throws ValidationError on unknown or repeated names.
std::vector<Algorithm> parse_algorithm_list(std::string_view text);

enum class StopReason { Bandwidth, DcCapacity, Latency, StreamExhausted };

std::string_view to_string(StopReason reason);
std::optional<StopReason> parse_stop_reason(std::string_view text);

struct IterationResult {
    Algorithm algorithm = Algorithm::Random;
    std::size_t iteration = 0;
    std::size_t placed_count = 0;
    StopReason stop_reason = StopReason::StreamExhausted;
    std::uint64_t stream_fingerprint = 0; ///< of the stream this run consumed

    bool operator==(const IterationResult&) const = default;
};

struct RunOptions {
    ControllerConfig controller{};
    /// Keep going past infeasible workloads instead of stopping at the first.
    bool skip_infeasible = false;
};

/// FNV-1a over every field of every workload.
std::uint64_t stream_fingerprint(const WorkloadStream& stream);

/// Places the stream in order on a fresh copy of `env_template`, stopping at
/// the first infeasible workload. `qtable` is required iff the algorithm is
/// QLearning; `seed` drives Random's choices.
IterationResult run_iteration(const Environment& env_template, const WorkloadStream& stream, Algorithm algorithm,
                              const QTable* qtable, const RunOptions& options, std::uint64_t seed,
                              std::size_t iteration = 0);

struct ExperimentConfig {
    std::size_t iterations = 100;
    std::size_t stream_length = 2000;
    std::uint64_t base_seed = 1;
    std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
    RunOptions run{};
    WorkloadGeneratorConfig workloads{};
    std::shared_ptr<const QTable> qtable;
    /// Worker threads for iterations; 0 picks hardware concurrency.
    std::size_t threads = 0;
};

void validate(const ExperimentConfig& config);

struct AlgorithmSummary {
    Algorithm algorithm = Algorithm::Random;
    double mean = 0.0;
    std::size_t min = 0;
    std::size_t max = 0;
    /// Mean divided by Random's mean; absent when Random did not run or
    /// placed nothing on average.
    std::optional<double> normalized_mean;
    /// Fraction of iterations in which this algorithm placed the most;
    /// tied algorithms are all credited.
    double win_rate = 0.0;
    std::size_t wins = 0;
};

struct ComparisonReport {
    std::size_t iterations = 0;
    std::vector<AlgorithmSummary> algorithms;

    [[nodiscard]] const AlgorithmSummary& at(Algorithm a) const;
};

struct ComparisonResult {
    ComparisonReport report;
    std::vector<IterationResult> raw; ///< ordered by (iteration, algorithm)
};

/// Iteration i draws one stream from base_seed + i and runs every algorithm
/// on it from a fresh environment.
ComparisonResult run_comparison(const Environment& env_template, const ExperimentConfig& config);

/// Aggregates raw results. Throws ValidationError on empty input.
ComparisonReport summarize(const std::vector<IterationResult>& raw);

/// algorithm,iteration,placed_count,stop_reason
std::string results_csv(const std::vector<IterationResult>& raw);
std::vector<IterationResult> parse_results_csv(std::string_view text);

/// Structured (JSON) summary of a report.
std::string summary_json(const ComparisonReport& report);

/// One row per (algorithm, iteration) with the count normalised by that
/// iteration's Random result when available.
std::string plot_csv(const std::vector<IterationResult>& raw);

struct ReportFiles {
    ComparisonReport report;
    std::string summary;
    std::string plot;
};

ReportFiles emit_report(const std::vector<IterationResult>& raw);

/// window_index,total_reward,placements_failed
std::string reward_log_csv(const std::vector<RewardWindow>& log);

struct TrainingConfig {
    std::uint64_t workload_count = 100'000;
    Hyperparams hyperparams{};
    std::uint64_t seed = 1;
    ControllerConfig controller{};
    WorkloadGeneratorConfig workloads{};
};

struct TrainingFiles {
    TrainingResult result;
    std::string qtable;
    std::string reward_log;
};

TrainingFiles run_training(const Environment& env_template, const TrainingConfig& config);

void write_text_file(const std::string& path, std::string_view contents);

} // namespace wleng
