#pragma once

#include <wleng/environment.hpp>
#include <wleng/resources.hpp>
#include <wleng/rng.hpp>
#include <wleng/topology.hpp>
#include <wleng/workload.hpp>

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace wleng {

enum class Policy { Random, DataCentreOpt, PathUtilOpt, LatencyOpt };

std::string_view to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view text);

enum class InfeasibleReason { DcCapacity, Bandwidth, Latency, NoCandidates };

std::string_view to_string(InfeasibleReason reason);

struct ControllerConfig {
    /// Maximum acceptable post-placement link utilisation (T).
    double threshold = 0.9;
    /// When set, a cluster must keep at least one free slot after placement
    /// (F >= 1). Cleared, full packing (F >= 0) is allowed.
    bool strict_headroom = true;
    SlotQuantum quantum{};
};

/// Throws ValidationError if threshold is outside [0, 1] or the quantum is invalid.
void validate(const ControllerConfig& config);

/// What placing a workload at one DC would look like.
struct CandidateEvaluation {
    NodeIndex dc_node = 0;
    std::int64_t slots_free_after = 0; ///< F
    double worst_util_after = 0.0;     ///< max over legs; R = 1 - this
    double avg_latency_ms = 0.0;
    double max_latency_ms = 0.0;       ///< L_pmax

    bool operator==(const CandidateEvaluation&) const = default;
};

struct Feasibility {
    std::vector<CandidateEvaluation> candidates; ///< ascending dc node
    /// Why nothing fits; set only when candidates is empty.
    std::optional<InfeasibleReason> dominant_reason;
};

bool dc_admission(const ClusterState& cluster, std::int64_t slots, bool strict_headroom = true);

/// Accepts iff every link on every path stays at or below `threshold` once
/// `demand` is split across the paths (on top of the optional overlay).
bool network_admission(const Topology& topology, const PathSet& paths, Bandwidth demand, double threshold,
                       std::span<const Bandwidth> overlay = {});

bool latency_admission(double max_latency_ms, std::optional<double> l_max_ms);

/// Runs DC, network and latency admission for every dc node. Legs of one
/// workload are evaluated cumulatively in access-POP order, so a link shared
/// by two legs sees both demands.
Feasibility feasible_sites(const Environment& env, const WorkloadSpec& workload, const ControllerConfig& config);

/// Picks a DC per policy; ties go to the lowest dc node. Throws
/// ValidationError on an empty candidate list.
NodeIndex select_by_policy(Policy policy, std::span<const CandidateEvaluation> candidates, Rng& rng);

struct Placed {
    NodeIndex dc_node = 0;
    std::int64_t slots = 0;
    AllocationId allocation;
    std::vector<ReservationId> reservations; ///< one per leg
};

struct Infeasible {
    InfeasibleReason reason = InfeasibleReason::NoCandidates;
};

using PlacementOutcome = std::variant<Placed, Infeasible>;

inline bool is_placed(const PlacementOutcome& o) { return std::holds_alternative<Placed>(o); }

/// Admission, policy selection and commit. An Infeasible outcome leaves the
/// environment untouched.
PlacementOutcome place(Environment& env, const WorkloadSpec& workload, Policy policy,
                       const ControllerConfig& config, Rng& rng);

} // namespace wleng
