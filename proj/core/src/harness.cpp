#include <wleng/harness.hpp>

#include <wleng/error.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace wleng {

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::Random: return "Random";
    case Algorithm::DataCentreOpt: return "DataCentreOpt";
    case Algorithm::PathUtilOpt: return "PathUtilOpt";
    case Algorithm::LatencyOpt: return "LatencyOpt";
    case Algorithm::QLearning: return "QLearning";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
    std::string key;
    for (char c : text) {
        if (c == '-' || c == '_' || c == ' ') continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    for (Algorithm a : kAllAlgorithms) {
        std::string name;
        for (char c : to_string(a)) name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (key == name) return a;
    }
    return std::nullopt;
}

std::vector<Algorithm> parse_algorithm_list(std::string_view text) {
    std::vector<Algorithm> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view name = text.substr(start, comma - start);
        auto a = parse_algorithm(name);
        if (!a) throw ValidationError("unknown algorithm '" + std::string(name) + "'");
        if (std::find(out.begin(), out.end(), *a) != out.end()) {
            throw ValidationError("algorithm '" + std::string(name) + "' listed twice");
        }
        out.push_back(*a);
        start = comma + 1;
    }
    return out;
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::Bandwidth: return "bandwidth";
    case StopReason::DcCapacity: return "dc_capacity";
    case StopReason::Latency: return "latency";
    case StopReason::StreamExhausted: return "stream_exhausted";
    }
    return "?";
}

std::optional<StopReason> parse_stop_reason(std::string_view text) {
    for (StopReason r : {StopReason::Bandwidth, StopReason::DcCapacity, StopReason::Latency,
                         StopReason::StreamExhausted}) {
        if (text == to_string(r)) return r;
    }
    return std::nullopt;
}

std::uint64_t stream_fingerprint(const WorkloadStream& stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(stream.seed);
    mix(stream.workloads.size());
    for (const auto& w : stream.workloads) {
        mix(static_cast<std::uint64_t>(w.vcpus));
        mix(static_cast<std::uint64_t>(w.memory_gb));
        mix(static_cast<std::uint64_t>(w.storage_gb));
        mix(static_cast<std::uint64_t>(w.demand_bw));
        mix(w.access_pops.size());
        for (NodeIndex p : w.access_pops) mix(p);
        mix(w.l_max_ms ? static_cast<std::uint64_t>(latency_from_ms(*w.l_max_ms)) : ~0ULL);
    }
    return h;
}

namespace {

StopReason stop_reason_for(InfeasibleReason r) {
    switch (r) {
    case InfeasibleReason::Bandwidth: return StopReason::Bandwidth;
    case InfeasibleReason::Latency: return StopReason::Latency;
    case InfeasibleReason::DcCapacity:
    case InfeasibleReason::NoCandidates: return StopReason::DcCapacity;
    }
    return StopReason::DcCapacity;
}

Policy fixed_policy(Algorithm a) {
    switch (a) {
    case Algorithm::Random: return Policy::Random;
    case Algorithm::DataCentreOpt: return Policy::DataCentreOpt;
    case Algorithm::PathUtilOpt: return Policy::PathUtilOpt;
    case Algorithm::LatencyOpt: return Policy::LatencyOpt;
    case Algorithm::QLearning: break;
    }
    throw ValidationError("QLearning has no fixed policy");
}

} // namespace

IterationResult run_iteration(const Environment& env_template, const WorkloadStream& stream, Algorithm algorithm,
                              const QTable* qtable, const RunOptions& options, std::uint64_t seed,
                              std::size_t iteration) {
    validate(options.controller);
    if (algorithm == Algorithm::QLearning) {
        if (!qtable) throw ValidationError("QLearning needs a trained Q-table");
        if (qtable->dc_ids() != dc_ids_of(env_template.topology)) {
            throw ValidationError("Q-table dc nodes do not match the topology");
        }
    }

    Environment env = env_template;
    env.reset();
    Rng rng(seed);

    IterationResult result;
    result.algorithm = algorithm;
    result.iteration = iteration;
    result.stream_fingerprint = stream_fingerprint(stream);
    result.stop_reason = StopReason::StreamExhausted;

    for (const WorkloadSpec& w : stream.workloads) {
        const Policy policy =
            algorithm == Algorithm::QLearning
                ? act_greedy(*qtable, encode_state(env, w, qtable->hyperparams().state, options.controller.quantum))
                : fixed_policy(algorithm);
        const PlacementOutcome outcome = place(env, w, policy, options.controller, rng);
        if (const auto* failed = std::get_if<Infeasible>(&outcome)) {
            if (options.skip_infeasible) continue;
            result.stop_reason = stop_reason_for(failed->reason);
            break;
        }
        ++result.placed_count;
    }
    return result;
}

void validate(const ExperimentConfig& config) {
    if (config.iterations < 1) throw ValidationError("iterations must be >= 1");
    if (config.stream_length < 1) throw ValidationError("stream length must be >= 1");
    if (config.algorithms.empty()) throw ValidationError("algorithm set is empty");
    validate(config.run.controller);
    const bool wants_q = std::find(config.algorithms.begin(), config.algorithms.end(), Algorithm::QLearning) !=
                         config.algorithms.end();
    if (wants_q && !config.qtable) throw ValidationError("QLearning needs a trained Q-table");
}

ComparisonResult run_comparison(const Environment& env_template, const ExperimentConfig& config) {
    validate(config);
    const std::size_t per_iteration = config.algorithms.size();
    std::vector<IterationResult> raw(config.iterations * per_iteration);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < config.iterations; i = next++) {
            try {
                const std::uint64_t seed = config.base_seed + i;
                const WorkloadStream stream =
                    generate_stream(seed, config.stream_length, env_template.topology, config.workloads);
                for (std::size_t k = 0; k < per_iteration; ++k) {
                    raw[i * per_iteration + k] = run_iteration(env_template, stream, config.algorithms[k],
                                                               config.qtable.get(), config.run,
                                                               derive_seed(seed, 3), i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, config.iterations);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    return ComparisonResult{summarize(raw), std::move(raw)};
}

TrainingFiles run_training(const Environment& env_template, const TrainingConfig& config) {
    TrainingFiles files;
    files.result = train(env_template, config.workload_count, config.hyperparams, config.seed, config.controller,
                         config.workloads);
    files.qtable = save_qtable(files.result.qtable);
    files.reward_log = reward_log_csv(files.result.reward_log);
    return files;
}

void write_text_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << contents;
    if (!out) throw ValidationError("write to '" + path + "' failed");
}

} // namespace wleng
