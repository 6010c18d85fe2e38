#pragma once

#include <wleng/topology.hpp>

#include <compare>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace wleng {

/// One slot bundles this much vCPU, memory and storage.
struct SlotQuantum {
    std::int64_t vcpus = 2;
    std::int64_t memory_gb = 4;
    std::int64_t storage_gb = 256;

    bool operator==(const SlotQuantum&) const = default;
};

/// Throws ValidationError unless every component is positive.
void validate(const SlotQuantum& quantum);

/// Smallest S such that S quanta cover the request in every component:
/// max(ceil(v/V), ceil(m/M), ceil(h/H)).
std::int64_t slots_required(std::int64_t vcpus, std::int64_t memory_gb, std::int64_t storage_gb,
                            const SlotQuantum& quantum);

struct ClusterState {
    NodeIndex dc_node = 0;
    std::int64_t total_slots = 0;
    std::int64_t free_slots = 0;

    bool operator==(const ClusterState&) const = default;
};

struct AllocationId {
    std::uint64_t value = 0;
    auto operator<=>(const AllocationId&) const = default;
};

/// Slot accounting for every DC cluster in a topology (one cluster per dc
/// node, capacity taken from the node's "slots").
class DcInventory {
public:
    explicit DcInventory(const Topology& topology);
    explicit DcInventory(std::vector<ClusterState> clusters);

    [[nodiscard]] const std::vector<ClusterState>& clusters() const { return clusters_; }
    /// Throws ValidationError if the node hosts no cluster.
    [[nodiscard]] const ClusterState& cluster(NodeIndex dc_node) const;

    /// Sum of free slots over sum of total slots, in [0, 1].
    [[nodiscard]] double slots_free_fraction() const;

    /// Throws StateError if the cluster has fewer than `slots` free.
    AllocationId allocate(NodeIndex dc_node, std::int64_t slots);
    /// Throws StateError on an unknown or already released handle.
    void release(AllocationId id);
    void reset_inventory();

    [[nodiscard]] std::size_t live_allocations() const { return live_.size(); }

    bool operator==(const DcInventory& other) const { return clusters_ == other.clusters_; }

private:
    std::size_t position(NodeIndex dc_node) const;

    std::vector<ClusterState> clusters_;
    std::unordered_map<std::uint64_t, std::pair<std::size_t, std::int64_t>> live_;
    std::uint64_t next_allocation_ = 1;
};

/// Fraction of a cluster's slots that are free.
inline double free_fraction(const ClusterState& c) {
    return static_cast<double>(c.free_slots) / static_cast<double>(c.total_slots);
}

} // namespace wleng
