#include <wleng/resources.hpp>

#include <wleng/error.hpp>

#include <algorithm>

namespace wleng {

namespace {

std::int64_t ceil_div(std::int64_t num, std::int64_t den) { return (num + den - 1) / den; }

} // namespace

void validate(const SlotQuantum& quantum) {
    if (quantum.vcpus <= 0 || quantum.memory_gb <= 0 || quantum.storage_gb <= 0) {
        throw ValidationError("slot quantum components must all be positive");
    }
}

std::int64_t slots_required(std::int64_t vcpus, std::int64_t memory_gb, std::int64_t storage_gb,
                            const SlotQuantum& quantum) {
    validate(quantum);
    if (vcpus <= 0 || memory_gb <= 0 || storage_gb <= 0) {
        throw ValidationError("workload resource requirements must be positive");
    }
    return std::max({ceil_div(vcpus, quantum.vcpus), ceil_div(memory_gb, quantum.memory_gb),
                     ceil_div(storage_gb, quantum.storage_gb)});
}

DcInventory::DcInventory(const Topology& topology) {
    for (NodeIndex dc : topology.dc_nodes()) {
        const auto slots = topology.node(dc).slots;
        clusters_.push_back(ClusterState{dc, slots, slots});
    }
}

DcInventory::DcInventory(std::vector<ClusterState> clusters) : clusters_(std::move(clusters)) {
    if (clusters_.empty()) {
        throw ValidationError("inventory needs at least one cluster");
    }
    std::sort(clusters_.begin(), clusters_.end(),
              [](const ClusterState& x, const ClusterState& y) { return x.dc_node < y.dc_node; });
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        const auto& c = clusters_[i];
        if (c.total_slots < 1 || c.free_slots < 0 || c.free_slots > c.total_slots) {
            throw ValidationError("cluster at node " + std::to_string(c.dc_node) + " has invalid slot counts");
        }
        if (i > 0 && clusters_[i - 1].dc_node == c.dc_node) {
            throw ValidationError("two clusters at node " + std::to_string(c.dc_node));
        }
    }
}

std::size_t DcInventory::position(NodeIndex dc_node) const {
    auto it = std::lower_bound(clusters_.begin(), clusters_.end(), dc_node,
                               [](const ClusterState& c, NodeIndex n) { return c.dc_node < n; });
    if (it == clusters_.end() || it->dc_node != dc_node) {
        throw ValidationError("node " + std::to_string(dc_node) + " hosts no cluster");
    }
    return static_cast<std::size_t>(it - clusters_.begin());
}

const ClusterState& DcInventory::cluster(NodeIndex dc_node) const {
    return clusters_[position(dc_node)];
}

double DcInventory::slots_free_fraction() const {
    std::int64_t free = 0;
    std::int64_t total = 0;
    for (const auto& c : clusters_) {
        free += c.free_slots;
        total += c.total_slots;
    }
    return total == 0 ? 0.0 : static_cast<double>(free) / static_cast<double>(total);
}

AllocationId DcInventory::allocate(NodeIndex dc_node, std::int64_t slots) {
    const std::size_t pos = position(dc_node);
    ClusterState& c = clusters_[pos];
    if (slots < 0 || c.free_slots < slots) {
        throw StateError("allocate: cluster at node " + std::to_string(dc_node) + " has " +
                         std::to_string(c.free_slots) + " free slots, " + std::to_string(slots) +
                         " requested");
    }
    c.free_slots -= slots;
    const AllocationId id{next_allocation_++};
    live_.emplace(id.value, std::make_pair(pos, slots));
    return id;
}

void DcInventory::release(AllocationId id) {
    auto it = live_.find(id.value);
    if (it == live_.end()) {
        throw StateError("release: allocation " + std::to_string(id.value) +
                         " is not live (double release or invalidated by reset)");
    }
    clusters_[it->second.first].free_slots += it->second.second;
    live_.erase(it);
}

void DcInventory::reset_inventory() {
    for (auto& c : clusters_) c.free_slots = c.total_slots;
    live_.clear();
}

} // namespace wleng
