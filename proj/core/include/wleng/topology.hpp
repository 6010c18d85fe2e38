#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wleng {

using NodeIndex = std::size_t;
using LinkIndex = std::size_t;

/// Bandwidth in bits per second.
using Bandwidth = std::int64_t;

/// Latency in microseconds. Files carry milliseconds, rounded to 1 us on load.
using LatencyUs = std::int64_t;

inline constexpr Bandwidth kMbps = 1'000'000;
inline constexpr Bandwidth kGbps = 1'000'000'000;

constexpr LatencyUs latency_from_ms(double ms) {
    return static_cast<LatencyUs>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5));
}
constexpr double latency_to_ms(LatencyUs us) { return static_cast<double>(us) / 1000.0; }

/// A dc node is a POP that also hosts a DC cluster: it originates traffic
/// like an access node and is a candidate placement site.
enum class NodeRole { Access, Dc, Transit };

std::string_view to_string(NodeRole role);
std::optional<NodeRole> parse_node_role(std::string_view text);

struct Node {
    std::string id;
    NodeRole role = NodeRole::Access;
    std::int64_t slots = 0; ///< cluster capacity; dc nodes only

    bool operator==(const Node&) const = default;
};

/// Link as written in a topology file (endpoints by id).
struct LinkSpec {
    std::string a;
    std::string b;
    Bandwidth capacity = 0;
    LatencyUs latency = 0;
};

/// Link inside a validated topology; endpoints satisfy a < b.
struct Link {
    NodeIndex a = 0;
    NodeIndex b = 0;
    Bandwidth capacity = 0;
    LatencyUs latency = 0;

    bool operator==(const Link&) const = default;
};

/// Every equal-cost shortest path between two nodes, in lexicographic order
/// of node sequence. A local set (source == destination) holds the single
/// trivial path and touches no links.
struct PathSet {
    NodeIndex source = 0;
    NodeIndex destination = 0;
    std::vector<std::vector<NodeIndex>> paths;
    std::vector<std::vector<LinkIndex>> path_links;
    LatencyUs common_latency = 0;

    [[nodiscard]] bool local() const { return source == destination; }
};

enum class RoutingMode {
    Ecmp,           ///< all equal-cost shortest paths, demand split equally
    SingleShortest  ///< canonically-first shortest path only
};

struct ReservationId {
    std::uint64_t value = 0;
    auto operator<=>(const ReservationId&) const = default;
};

/// Per-link increments produced by splitting a demand over a path set.
/// Links shared by several paths appear once with the summed share.
using LinkLoad = std::vector<std::pair<LinkIndex, Bandwidth>>;

/// Floor-divides demand across the paths; the remainder goes to the first
/// path so that the shares sum to demand exactly.
LinkLoad split_demand(const PathSet& paths, Bandwidth demand);

/// Undirected, connected network graph plus committed bandwidth reservations.
///
/// Nodes are kept sorted by id and links by (a, b), so indices are canonical
/// and two topologies built from the same elements compare equal.
class Topology {
public:
    struct Adjacency {
        NodeIndex neighbor;
        LinkIndex link;
    };

    /// Validates and builds a topology. Throws ValidationError naming the
    /// offending element for: duplicate node ids, unknown link endpoints,
    /// self-loops, parallel links, nonpositive capacity, negative latency,
    /// missing/invalid dc slots, missing access or dc role, disconnection.
    Topology(std::vector<Node> nodes, std::vector<LinkSpec> links);

    [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<Link>& links() const { return links_; }
    [[nodiscard]] const Node& node(NodeIndex i) const { return nodes_.at(i); }
    [[nodiscard]] const Link& link(LinkIndex i) const { return links_.at(i); }
    [[nodiscard]] std::span<const Adjacency> neighbors(NodeIndex i) const { return adjacency_.at(i); }

    [[nodiscard]] std::optional<NodeIndex> find_node(std::string_view id) const;
    /// Throws ValidationError for an unknown id.
    [[nodiscard]] NodeIndex node_index(std::string_view id) const;
    [[nodiscard]] std::optional<LinkIndex> find_link(NodeIndex u, NodeIndex v) const;

    /// Nodes that originate workload traffic (role access or dc), ascending.
    [[nodiscard]] const std::vector<NodeIndex>& access_nodes() const { return access_nodes_; }
    /// Nodes hosting a DC cluster, ascending.
    [[nodiscard]] const std::vector<NodeIndex>& dc_nodes() const { return dc_nodes_; }

    /// Equal-cost shortest paths under link-latency weights. Throws
    /// ValidationError if src == dst or either index is out of range.
    [[nodiscard]] PathSet compute_paths(NodeIndex src, NodeIndex dst,
                                        RoutingMode mode = RoutingMode::Ecmp) const;
    [[nodiscard]] PathSet compute_paths(std::string_view src, std::string_view dst,
                                        RoutingMode mode = RoutingMode::Ecmp) const;

    /// Max over every link on every path of (reserved + share) / capacity,
    /// where extra_demand is split as in split_demand. `overlay`, when
    /// non-empty, adds a per-link what-if load (indexed by LinkIndex).
    [[nodiscard]] double max_path_utilization(const PathSet& paths, Bandwidth extra_demand,
                                              std::span<const Bandwidth> overlay = {}) const;

    ReservationId reserve(const PathSet& paths, Bandwidth demand);
    /// Throws StateError if the handle is unknown, already released, or was
    /// invalidated by reset_network.
    void release(ReservationId id);
    void reset_network();

    [[nodiscard]] Bandwidth reserved(LinkIndex i) const { return reserved_.at(i); }
    [[nodiscard]] std::span<const Bandwidth> reserved() const { return reserved_; }
    [[nodiscard]] double utilization(LinkIndex i) const;
    [[nodiscard]] std::size_t live_reservations() const { return live_.size(); }

private:
    std::vector<LatencyUs> dijkstra(NodeIndex from) const;

    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::vector<std::vector<Adjacency>> adjacency_;
    std::vector<NodeIndex> access_nodes_;
    std::vector<NodeIndex> dc_nodes_;
    std::unordered_map<std::string, NodeIndex> index_by_id_;

    std::vector<Bandwidth> reserved_;
    std::unordered_map<std::uint64_t, LinkLoad> live_;
    std::uint64_t next_reservation_ = 1;
};

/// Parses a topology file (JSON: {"nodes": [...], "links": [...]}).
Topology load_topology(std::string_view text);
Topology load_topology_file(const std::string& path);

/// Canonical serialisation: nodes sorted by id, links by (a, b).
/// Reservations are not part of the file.
std::string save_topology(const Topology& topology);

struct TopologyGeneratorParams {
    std::size_t pop_count = 11;
    std::size_t dc_count = 7;
    Bandwidth link_capacity = 10 * kGbps;
    double latency_min_ms = 1.0;
    double latency_max_ms = 30.0;
    double avg_degree = 3.0;
    std::int64_t slots_per_dc = 500;
    std::uint64_t seed = 42;
};

/// Random spanning tree plus uniformly chosen extra links up to the target
/// average degree. Every node is an access POP; dc_count of them host a DC.
/// Throws ValidationError when the parameters cannot be satisfied.
Topology generate_topology(const TopologyGeneratorParams& params);

} // namespace wleng
