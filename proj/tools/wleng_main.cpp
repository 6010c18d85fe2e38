// Command-line front end: topology and workload generation, Q-learning
// training, single-stream evaluation and multi-iteration comparison.

#include <wleng/error.hpp>
#include <wleng/harness.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <string>

namespace {

using namespace wleng;

SlotQuantum parse_quantum(const std::string& text) {
    SlotQuantum q;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(text);
    if (!(in >> q.vcpus >> c1 >> q.memory_gb >> c2 >> q.storage_gb) || c1 != ',' || c2 != ',' || !in.eof()) {
        throw ValidationError("--quantum expects V,M,H (e.g. 2,4,256), got '" + text + "'");
    }
    validate(q);
    return q;
}

RoutingMode parse_routing(const std::string& text) {
    if (text == "ecmp") return RoutingMode::Ecmp;
    if (text == "single") return RoutingMode::SingleShortest;
    throw ValidationError("--routing expects ecmp or single");
}

// Options shared by every subcommand that runs the controller.
struct ControllerOptions {
    std::string quantum = "2,4,256";
    double threshold = 0.9;
    bool relaxed_headroom = false;
    std::string routing = "ecmp";
    std::optional<double> l_max;
    std::optional<std::size_t> fixed_access_k;

    void attach(CLI::App* cmd) {
        cmd->add_option("--quantum", quantum, "Slot quantum V,M,H (vCPU, GB memory, GB storage)");
        cmd->add_option("--threshold", threshold, "Maximum post-placement link utilisation T")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_flag("--relaxed-headroom", relaxed_headroom, "Admit placements that leave a cluster with F = 0");
        cmd->add_option("--routing", routing, "ecmp or single")->check(CLI::IsMember({"ecmp", "single"}));
        cmd->add_option("--l-max", l_max, "Latency bound (ms) applied to generated workloads");
        cmd->add_option("--fixed-access-k", fixed_access_k, "Generate workloads with exactly k access POPs");
    }

    ControllerConfig controller() const {
        ControllerConfig c;
        c.quantum = parse_quantum(quantum);
        c.threshold = threshold;
        c.strict_headroom = !relaxed_headroom;
        validate(c);
        return c;
    }

    WorkloadGeneratorConfig workloads() const {
        WorkloadGeneratorConfig w;
        w.l_max_ms = l_max;
        if (fixed_access_k) {
            w.selection = AccessSelection::FixedSize;
            w.fixed_k = *fixed_access_k;
        }
        return w;
    }
};

Environment load_environment(const std::string& path, const std::string& routing) {
    return Environment::create(load_topology_file(path), parse_routing(routing));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint WAN and data-centre workload placement simulator"};
    app.require_subcommand(1);

    // gen-topology
    auto* gen_topo = app.add_subcommand("gen-topology", "Generate a synthetic topology file");
    TopologyGeneratorParams tp;
    double capacity_gbps = 10.0;
    std::string topo_out;
    gen_topo->add_option("--pops", tp.pop_count, "Number of access POPs")->required();
    gen_topo->add_option("--dcs", tp.dc_count, "How many POPs host a DC")->required();
    gen_topo->add_option("--capacity-gbps", capacity_gbps, "Uniform link capacity (Gb/s)");
    gen_topo->add_option("--latency-min", tp.latency_min_ms, "Minimum link latency (ms)");
    gen_topo->add_option("--latency-max", tp.latency_max_ms, "Maximum link latency (ms)");
    gen_topo->add_option("--avg-degree", tp.avg_degree, "Target average node degree");
    gen_topo->add_option("--slots-per-dc", tp.slots_per_dc, "Cluster capacity in slots");
    gen_topo->add_option("--seed", tp.seed, "Generator seed");
    gen_topo->add_option("-o,--output", topo_out, "Output topology file")->required();

    // gen-workloads
    auto* gen_work = app.add_subcommand("gen-workloads", "Generate a workload stream file");
    std::string gw_topology;
    std::string gw_out;
    std::size_t gw_count = 2000;
    std::uint64_t gw_seed = 1;
    std::optional<double> gw_lmax;
    std::optional<std::size_t> gw_fixed_k;
    gen_work->add_option("--topology", gw_topology, "Topology file")->required();
    gen_work->add_option("--count", gw_count, "Number of workloads")->check(CLI::PositiveNumber);
    gen_work->add_option("--seed", gw_seed, "Stream seed");
    gen_work->add_option("--l-max", gw_lmax, "Latency bound (ms) stamped on every workload");
    gen_work->add_option("--fixed-access-k", gw_fixed_k, "Exactly k access POPs per workload");
    gen_work->add_option("-o,--output", gw_out, "Output stream file")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a Q-table");
    std::string tr_topology;
    std::string tr_out;
    std::string tr_log;
    std::uint64_t tr_workloads = 100'000;
    std::uint64_t tr_seed = 1;
    std::optional<std::uint64_t> tr_decay;
    bool tr_features = false;
    std::string tr_scope = "global";
    Hyperparams hp;
    ControllerOptions tr_ctl;
    train_cmd->add_option("--topology", tr_topology, "Topology file")->required();
    train_cmd->add_option("--workloads", tr_workloads, "Training workloads")->check(CLI::PositiveNumber);
    train_cmd->add_option("--alpha", hp.alpha, "Learning rate");
    train_cmd->add_option("--gamma", hp.gamma, "Discount factor");
    train_cmd->add_option("--epsilon-start", hp.epsilon_start, "Initial exploration rate");
    train_cmd->add_option("--epsilon-end", hp.epsilon_end, "Final exploration rate");
    train_cmd->add_option("--epsilon-decay-steps", tr_decay, "Linear decay length (default 80% of workloads)");
    train_cmd->add_option("--util-bins", hp.state.util_bins, "Utilisation bins per DC");
    train_cmd->add_option("--slot-bins", hp.state.slot_bins, "Slots-free bins per DC");
    train_cmd->add_flag("--workload-features", tr_features, "Add demand class and S to the state");
    train_cmd->add_option("--reward-scope", tr_scope, "global or workload")
        ->check(CLI::IsMember({"global", "workload"}));
    train_cmd->add_option("--seed", tr_seed, "Training seed");
    train_cmd->add_option("-o,--output", tr_out, "Output Q-table file")->required();
    train_cmd->add_option("--reward-log", tr_log, "Reward log CSV")->required();
    tr_ctl.attach(train_cmd);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Run one algorithm over a stored stream");
    std::string ev_topology;
    std::string ev_algorithm;
    std::string ev_qtable;
    std::string ev_stream;
    std::string ev_out;
    std::uint64_t ev_seed = 1;
    bool ev_skip = false;
    ControllerOptions ev_ctl;
    eval_cmd->add_option("--topology", ev_topology, "Topology file")->required();
    eval_cmd->add_option("--algorithm", ev_algorithm, "Random, DataCentreOpt, PathUtilOpt, LatencyOpt or QLearning")
        ->required();
    eval_cmd->add_option("--qtable", ev_qtable, "Trained Q-table (QLearning only)");
    eval_cmd->add_option("--stream", ev_stream, "Workload stream file")->required();
    eval_cmd->add_option("--seed", ev_seed, "Seed for Random's choices");
    eval_cmd->add_flag("--skip-infeasible", ev_skip, "Continue past infeasible workloads");
    eval_cmd->add_option("-o,--output", ev_out, "Results CSV")->required();
    ev_ctl.attach(eval_cmd);

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Compare algorithms over shared random streams");
    std::string cmp_topology;
    std::string cmp_algorithms = "Random,DataCentreOpt,PathUtilOpt,LatencyOpt,QLearning";
    std::string cmp_qtable;
    std::string cmp_out;
    std::string cmp_summary;
    std::string cmp_plot;
    ExperimentConfig cfg;
    ControllerOptions cmp_ctl;
    cmp_cmd->add_option("--topology", cmp_topology, "Topology file")->required();
    cmp_cmd->add_option("--iterations", cfg.iterations, "Iterations")->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--stream-length", cfg.stream_length, "Workloads per stream")->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--algorithms", cmp_algorithms, "Comma-separated algorithm list");
    cmp_cmd->add_option("--qtable", cmp_qtable, "Trained Q-table (needed for QLearning)");
    cmp_cmd->add_option("--base-seed", cfg.base_seed, "Iteration i uses seed base+i");
    cmp_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)");
    cmp_cmd->add_flag("--skip-infeasible", cfg.run.skip_infeasible, "Continue past infeasible workloads");
    cmp_cmd->add_option("-o,--output", cmp_out, "Results CSV")->required();
    cmp_cmd->add_option("--summary", cmp_summary, "Summary file")->required();
    cmp_cmd->add_option("--plot", cmp_plot, "Plot-ready CSV");
    cmp_ctl.attach(cmp_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*gen_topo) {
            tp.link_capacity = static_cast<Bandwidth>(std::llround(capacity_gbps * 1e9));
            write_text_file(topo_out, save_topology(generate_topology(tp)));
        } else if (*gen_work) {
            const Topology topology = load_topology_file(gw_topology);
            WorkloadGeneratorConfig wc;
            wc.l_max_ms = gw_lmax;
            if (gw_fixed_k) {
                wc.selection = AccessSelection::FixedSize;
                wc.fixed_k = *gw_fixed_k;
            }
            write_text_file(gw_out, save_stream(generate_stream(gw_seed, gw_count, topology, wc), topology));
        } else if (*train_cmd) {
            const Environment env = load_environment(tr_topology, tr_ctl.routing);
            TrainingConfig tc;
            tc.workload_count = tr_workloads;
            hp.epsilon_decay_steps = tr_decay;
            hp.state.workload_features = tr_features;
            hp.reward_scope = tr_scope == "global" ? RewardScope::Global : RewardScope::Workload;
            tc.hyperparams = hp;
            tc.seed = tr_seed;
            tc.controller = tr_ctl.controller();
            tc.workloads = tr_ctl.workloads();
            const TrainingFiles files = run_training(env, tc);
            write_text_file(tr_out, files.qtable);
            write_text_file(tr_log, files.reward_log);
            std::cout << "trained on " << tr_workloads << " workloads, " << files.result.qtable.size()
                      << " states visited\n";
        } else if (*eval_cmd) {
            const Environment env = load_environment(ev_topology, ev_ctl.routing);
            const auto algorithm = parse_algorithm(ev_algorithm);
            if (!algorithm) throw ValidationError("unknown algorithm '" + ev_algorithm + "'");
            std::optional<QTable> q;
            if (*algorithm == Algorithm::QLearning) {
                if (ev_qtable.empty()) throw ValidationError("QLearning needs --qtable");
                q = load_qtable_file(ev_qtable, expectation_for(env.topology));
            }
            const WorkloadStream stream = load_stream_file(ev_stream, env.topology);
            RunOptions options{ev_ctl.controller(), ev_skip};
            const IterationResult r =
                run_iteration(env, stream, *algorithm, q ? &*q : nullptr, options, ev_seed, 0);
            write_text_file(ev_out, results_csv({r}));
            std::cout << to_string(r.algorithm) << ": placed " << r.placed_count << ", stopped on "
                      << to_string(r.stop_reason) << "\n";
        } else if (*cmp_cmd) {
            const Environment env = load_environment(cmp_topology, cmp_ctl.routing);
            cfg.algorithms = parse_algorithm_list(cmp_algorithms);
            cfg.run.controller = cmp_ctl.controller();
            cfg.workloads = cmp_ctl.workloads();
            if (!cmp_qtable.empty()) {
                cfg.qtable = std::make_shared<const QTable>(load_qtable_file(cmp_qtable, expectation_for(env.topology)));
            }
            const ComparisonResult result = run_comparison(env, cfg);
            const ReportFiles report = emit_report(result.raw);
            write_text_file(cmp_out, results_csv(result.raw));
            write_text_file(cmp_summary, report.summary);
            if (!cmp_plot.empty()) write_text_file(cmp_plot, report.plot);
            for (const auto& s : report.report.algorithms) {
                std::cout << to_string(s.algorithm) << ": mean " << s.mean << " [" << s.min << ", " << s.max << "]";
                if (s.normalized_mean) std::cout << " normalized " << *s.normalized_mean;
                std::cout << " win rate " << s.win_rate << "\n";
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
