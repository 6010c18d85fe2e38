#pragma once

#include <wleng/resources.hpp>
#include <wleng/topology.hpp>

#include <memory>
#include <vector>

namespace wleng {

/// Precomputed path sets for every (access node, dc node) pair of a
/// topology. Shared read-only by every copy of an environment.
class RoutingTable {
public:
    RoutingTable(const Topology& topology, RoutingMode mode);

    /// Path set from `access` to `dc`; local (no links) when they coincide.
    [[nodiscard]] const PathSet& paths(NodeIndex access, NodeIndex dc) const;
    [[nodiscard]] RoutingMode mode() const { return mode_; }

    /// Path sets from every access node toward `dc`, in access-node order.
    [[nodiscard]] const std::vector<PathSet>& toward(NodeIndex dc) const;

private:
    RoutingMode mode_;
    std::vector<std::size_t> dc_slot_;     // node index -> row, or npos
    std::vector<std::size_t> access_slot_; // node index -> column, or npos
    std::vector<std::vector<PathSet>> table_;
};

/// The mutable world one simulation run owns: link reservations, cluster
/// slots, and the shared routing table.
struct Environment {
    Topology topology;
    DcInventory inventory;
    std::shared_ptr<const RoutingTable> routing;

    static Environment create(Topology topology, RoutingMode mode = RoutingMode::Ecmp);

    /// Clears every reservation and allocation.
    void reset() {
        topology.reset_network();
        inventory.reset_inventory();
    }
};

} // namespace wleng
