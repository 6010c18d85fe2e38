#include <wleng/environment.hpp>

#include <wleng/error.hpp>

#include <limits>

namespace wleng {

namespace {
constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
}

RoutingTable::RoutingTable(const Topology& topology, RoutingMode mode)
    : mode_(mode),
      dc_slot_(topology.nodes().size(), npos),
      access_slot_(topology.nodes().size(), npos) {
    const auto& access = topology.access_nodes();
    for (std::size_t i = 0; i < access.size(); ++i) access_slot_[access[i]] = i;
    for (std::size_t d = 0; d < topology.dc_nodes().size(); ++d) {
        const NodeIndex dc = topology.dc_nodes()[d];
        dc_slot_[dc] = d;
        std::vector<PathSet> row;
        row.reserve(access.size());
        for (NodeIndex a : access) {
            if (a == dc) {
                PathSet local;
                local.source = a;
                local.destination = dc;
                local.paths.push_back({a});
                local.path_links.emplace_back();
                row.push_back(std::move(local));
            } else {
                row.push_back(topology.compute_paths(a, dc, mode));
            }
        }
        table_.push_back(std::move(row));
    }
}

const std::vector<PathSet>& RoutingTable::toward(NodeIndex dc) const {
    if (dc >= dc_slot_.size() || dc_slot_[dc] == npos) {
        throw ValidationError("routing: node " + std::to_string(dc) + " is not a dc");
    }
    return table_[dc_slot_[dc]];
}

const PathSet& RoutingTable::paths(NodeIndex access, NodeIndex dc) const {
    const auto& row = toward(dc);
    if (access >= access_slot_.size() || access_slot_[access] == npos) {
        throw ValidationError("routing: node " + std::to_string(access) + " is not an access node");
    }
    return row[access_slot_[access]];
}

Environment Environment::create(Topology topology, RoutingMode mode) {
    auto routing = std::make_shared<const RoutingTable>(topology, mode);
    DcInventory inventory(topology);
    return Environment{std::move(topology), std::move(inventory), std::move(routing)};
}

} // namespace wleng
