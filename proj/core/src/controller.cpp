#include <wleng/controller.hpp>

#include <wleng/error.hpp>

#include <algorithm>
#include <cctype>
#include <string>

namespace wleng {

std::string_view to_string(Policy policy) {
    switch (policy) {
    case Policy::Random: return "Random";
    case Policy::DataCentreOpt: return "DataCentreOpt";
    case Policy::PathUtilOpt: return "PathUtilOpt";
    case Policy::LatencyOpt: return "LatencyOpt";
    }
    return "?";
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

} // namespace

std::optional<Policy> parse_policy(std::string_view text) {
    for (Policy p : {Policy::Random, Policy::DataCentreOpt, Policy::PathUtilOpt, Policy::LatencyOpt}) {
        if (iequals(text, to_string(p))) return p;
    }
    return std::nullopt;
}

std::string_view to_string(InfeasibleReason reason) {
    switch (reason) {
    case InfeasibleReason::DcCapacity: return "dc_capacity";
    case InfeasibleReason::Bandwidth: return "bandwidth";
    case InfeasibleReason::Latency: return "latency";
    case InfeasibleReason::NoCandidates: return "no_candidates";
    }
    return "?";
}

void validate(const ControllerConfig& config) {
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
        throw ValidationError("threshold T must lie in [0, 1], got " + std::to_string(config.threshold));
    }
    validate(config.quantum);
}

bool dc_admission(const ClusterState& cluster, std::int64_t slots, bool strict_headroom) {
    const std::int64_t free_after = cluster.free_slots - slots;
    return strict_headroom ? free_after >= 1 : free_after >= 0;
}

bool network_admission(const Topology& topology, const PathSet& paths, Bandwidth demand, double threshold,
                       std::span<const Bandwidth> overlay) {
    return topology.max_path_utilization(paths, demand, overlay) <= threshold;
}

bool latency_admission(double max_latency_ms, std::optional<double> l_max_ms) {
    if (!l_max_ms) return true;
    return latency_from_ms(max_latency_ms) <= latency_from_ms(*l_max_ms);
}

Feasibility feasible_sites(const Environment& env, const WorkloadSpec& workload, const ControllerConfig& config) {
    if (workload.access_pops.empty()) {
        throw ValidationError("workload has no access POPs");
    }
    Feasibility result;
    const Topology& topo = env.topology;
    const std::int64_t slots = workload.slots(config.quantum);
    std::vector<Bandwidth> overlay(topo.links().size(), 0);

    bool any_dc = false;
    bool any_slot_pass = false;
    bool any_bandwidth_fail = false;

    for (const ClusterState& cluster : env.inventory.clusters()) {
        any_dc = true;
        if (!dc_admission(cluster, slots, config.strict_headroom)) continue;
        any_slot_pass = true;

        std::fill(overlay.begin(), overlay.end(), 0);
        CandidateEvaluation eval;
        eval.dc_node = cluster.dc_node;
        eval.slots_free_after = cluster.free_slots - slots;
        LatencyUs latency_sum = 0;
        LatencyUs latency_max = 0;
        bool ok = true;
        for (NodeIndex pop : workload.access_pops) {
            const PathSet& paths = env.routing->paths(pop, cluster.dc_node);
            const double util = topo.max_path_utilization(paths, workload.demand_bw, overlay);
            if (util > config.threshold) {
                any_bandwidth_fail = true;
                ok = false;
                break;
            }
            if (!latency_admission(latency_to_ms(paths.common_latency), workload.l_max_ms)) {
                ok = false;
                break;
            }
            for (const auto& [l, amount] : split_demand(paths, workload.demand_bw)) {
                overlay[l] += amount;
            }
            eval.worst_util_after = std::max(eval.worst_util_after, util);
            latency_sum += paths.common_latency;
            latency_max = std::max(latency_max, paths.common_latency);
        }
        if (!ok) continue;
        eval.avg_latency_ms = latency_to_ms(latency_sum) / static_cast<double>(workload.access_pops.size());
        eval.max_latency_ms = latency_to_ms(latency_max);
        result.candidates.push_back(eval);
    }

    if (result.candidates.empty()) {
        if (!any_dc) {
            result.dominant_reason = InfeasibleReason::NoCandidates;
        } else if (!any_slot_pass) {
            result.dominant_reason = InfeasibleReason::DcCapacity;
        } else if (any_bandwidth_fail) {
            result.dominant_reason = InfeasibleReason::Bandwidth;
        } else {
            result.dominant_reason = InfeasibleReason::Latency;
        }
    }
    return result;
}

NodeIndex select_by_policy(Policy policy, std::span<const CandidateEvaluation> candidates, Rng& rng) {
    if (candidates.empty()) {
        throw ValidationError("select_by_policy: empty candidate list");
    }
    if (policy == Policy::Random) {
        return candidates[rng.uniform_index(candidates.size())].dc_node;
    }
    // Candidates are in ascending dc order, so a strict comparison keeps the
    // first of any tie.
    const CandidateEvaluation* best = &candidates.front();
    for (const auto& c : candidates.subspan(1)) {
        bool better = false;
        switch (policy) {
        case Policy::DataCentreOpt: better = c.slots_free_after > best->slots_free_after; break;
        case Policy::PathUtilOpt: better = c.worst_util_after < best->worst_util_after; break;
        case Policy::LatencyOpt: better = c.avg_latency_ms < best->avg_latency_ms; break;
        case Policy::Random: break;
        }
        if (better) best = &c;
    }
    return best->dc_node;
}

PlacementOutcome place(Environment& env, const WorkloadSpec& workload, Policy policy,
                       const ControllerConfig& config, Rng& rng) {
    const Feasibility feasibility = feasible_sites(env, workload, config);
    if (feasibility.candidates.empty()) {
        return Infeasible{*feasibility.dominant_reason};
    }
    Placed placed;
    placed.dc_node = select_by_policy(policy, feasibility.candidates, rng);
    placed.slots = workload.slots(config.quantum);
    placed.allocation = env.inventory.allocate(placed.dc_node, placed.slots);
    placed.reservations.reserve(workload.access_pops.size());
    for (NodeIndex pop : workload.access_pops) {
        placed.reservations.push_back(
            env.topology.reserve(env.routing->paths(pop, placed.dc_node), workload.demand_bw));
    }
    return placed;
}

} // namespace wleng
