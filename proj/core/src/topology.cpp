#include <wleng/topology.hpp>

#include <wleng/error.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

namespace wleng {

std::string_view to_string(NodeRole role) {
    switch (role) {
    case NodeRole::Access: return "access";
    case NodeRole::Dc: return "dc";
    case NodeRole::Transit: return "transit";
    }
    return "?";
}

std::optional<NodeRole> parse_node_role(std::string_view text) {
    if (text == "access") return NodeRole::Access;
    if (text == "dc") return NodeRole::Dc;
    if (text == "transit") return NodeRole::Transit;
    return std::nullopt;
}

LinkLoad split_demand(const PathSet& paths, Bandwidth demand) {
    LinkLoad load;
    if (paths.path_links.empty()) {
        return load;
    }
    const auto n = static_cast<Bandwidth>(paths.path_links.size());
    const Bandwidth share = demand / n;
    const Bandwidth remainder = demand % n;
    for (std::size_t p = 0; p < paths.path_links.size(); ++p) {
        const Bandwidth amount = share + (p == 0 ? remainder : 0);
        for (LinkIndex l : paths.path_links[p]) {
            load.emplace_back(l, amount);
        }
    }
    std::sort(load.begin(), load.end());
    LinkLoad merged;
    for (const auto& [link, amount] : load) {
        if (!merged.empty() && merged.back().first == link) {
            merged.back().second += amount;
        } else {
            merged.emplace_back(link, amount);
        }
    }
    return merged;
}

Topology::Topology(std::vector<Node> nodes, std::vector<LinkSpec> links) {
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& x, const Node& y) { return x.id < y.id; });
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        if (n.id.empty()) {
            throw ValidationError("topology: node with empty id");
        }
        if (i > 0 && nodes[i - 1].id == n.id) {
            throw ValidationError("topology: duplicate node id '" + n.id + "'");
        }
        if (n.role == NodeRole::Dc && n.slots < 1) {
            throw ValidationError("topology: dc node '" + n.id + "' needs slots >= 1");
        }
        if (n.role != NodeRole::Dc && n.slots != 0) {
            throw ValidationError("topology: node '" + n.id + "' carries slots but is not a dc");
        }
        index_by_id_.emplace(n.id, i);
    }
    nodes_ = std::move(nodes);

    for (const LinkSpec& ls : links) {
        const std::string label = "link " + ls.a + "-" + ls.b;
        auto a = find_node(ls.a);
        auto b = find_node(ls.b);
        if (!a) throw ValidationError("topology: " + label + " references unknown node '" + ls.a + "'");
        if (!b) throw ValidationError("topology: " + label + " references unknown node '" + ls.b + "'");
        if (*a == *b) throw ValidationError("topology: " + label + " is a self-loop");
        if (ls.capacity <= 0) throw ValidationError("topology: " + label + " has nonpositive capacity");
        if (ls.latency < 0) throw ValidationError("topology: " + label + " has negative latency");
        links_.push_back(Link{std::min(*a, *b), std::max(*a, *b), ls.capacity, ls.latency});
    }
    std::sort(links_.begin(), links_.end(), [](const Link& x, const Link& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (std::size_t i = 1; i < links_.size(); ++i) {
        if (links_[i - 1].a == links_[i].a && links_[i - 1].b == links_[i].b) {
            throw ValidationError("topology: duplicate link " + nodes_[links_[i].a].id + "-" +
                                  nodes_[links_[i].b].id);
        }
    }

    adjacency_.resize(nodes_.size());
    for (LinkIndex l = 0; l < links_.size(); ++l) {
        adjacency_[links_[l].a].push_back({links_[l].b, l});
        adjacency_[links_[l].b].push_back({links_[l].a, l});
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end(),
                  [](const Adjacency& x, const Adjacency& y) { return x.neighbor < y.neighbor; });
    }

    for (NodeIndex i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].role != NodeRole::Transit) access_nodes_.push_back(i);
        if (nodes_[i].role == NodeRole::Dc) dc_nodes_.push_back(i);
    }
    if (access_nodes_.empty()) {
        throw ValidationError("topology: no access node");
    }
    if (dc_nodes_.empty()) {
        throw ValidationError("topology: no dc node");
    }

    std::vector<bool> seen(nodes_.size(), false);
    std::vector<NodeIndex> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const NodeIndex u = stack.back();
        stack.pop_back();
        for (const auto& [v, l] : adjacency_[u]) {
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    for (NodeIndex i = 0; i < nodes_.size(); ++i) {
        if (!seen[i]) {
            throw ValidationError("topology: graph is disconnected; node '" + nodes_[i].id +
                                  "' is unreachable from '" + nodes_[0].id + "'");
        }
    }

    reserved_.assign(links_.size(), 0);
}

std::optional<NodeIndex> Topology::find_node(std::string_view id) const {
    auto it = index_by_id_.find(std::string(id));
    if (it == index_by_id_.end()) return std::nullopt;
    return it->second;
}

NodeIndex Topology::node_index(std::string_view id) const {
    auto i = find_node(id);
    if (!i) throw ValidationError("unknown node id '" + std::string(id) + "'");
    return *i;
}

std::optional<LinkIndex> Topology::find_link(NodeIndex u, NodeIndex v) const {
    if (u >= adjacency_.size()) return std::nullopt;
    for (const auto& [n, l] : adjacency_[u]) {
        if (n == v) return l;
    }
    return std::nullopt;
}

std::vector<LatencyUs> Topology::dijkstra(NodeIndex from) const {
    constexpr LatencyUs inf = std::numeric_limits<LatencyUs>::max();
    std::vector<LatencyUs> dist(nodes_.size(), inf);
    using Item = std::pair<LatencyUs, NodeIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[from] = 0;
    queue.emplace(0, from);
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, l] : adjacency_[u]) {
            const LatencyUs nd = d + links_[l].latency;
            if (nd < dist[v]) {
                dist[v] = nd;
                queue.emplace(nd, v);
            }
        }
    }
    return dist;
}

PathSet Topology::compute_paths(NodeIndex src, NodeIndex dst, RoutingMode mode) const {
    if (src >= nodes_.size() || dst >= nodes_.size()) {
        throw ValidationError("compute_paths: node index out of range");
    }
    if (src == dst) {
        throw ValidationError("compute_paths: source and destination are both '" + nodes_[src].id + "'");
    }
    const auto from_src = dijkstra(src);
    const auto to_dst = dijkstra(dst);
    const LatencyUs shortest = from_src[dst];

    PathSet result;
    result.source = src;
    result.destination = dst;
    result.common_latency = shortest;

    // Depth-first walk restricted to edges lying on some shortest path.
    // Neighbours are visited in ascending index order, so paths come out in
    // lexicographic order.
    std::vector<NodeIndex> path{src};
    std::vector<LinkIndex> path_links;
    std::vector<bool> on_path(nodes_.size(), false);
    on_path[src] = true;
    const bool single = mode == RoutingMode::SingleShortest;

    std::function<void(NodeIndex)> walk = [&](NodeIndex u) {
        if (u == dst) {
            result.paths.push_back(path);
            result.path_links.push_back(path_links);
            return;
        }
        for (const auto& [v, l] : adjacency_[u]) {
            if (single && !result.paths.empty()) return;
            if (on_path[v]) continue;
            if (from_src[u] + links_[l].latency + to_dst[v] != shortest) continue;
            on_path[v] = true;
            path.push_back(v);
            path_links.push_back(l);
            walk(v);
            path.pop_back();
            path_links.pop_back();
            on_path[v] = false;
        }
    };
    walk(src);
    return result;
}

PathSet Topology::compute_paths(std::string_view src, std::string_view dst, RoutingMode mode) const {
    return compute_paths(node_index(src), node_index(dst), mode);
}

double Topology::max_path_utilization(const PathSet& paths, Bandwidth extra_demand,
                                      std::span<const Bandwidth> overlay) const {
    auto load_on = [&](LinkIndex l) {
        return reserved_[l] + (overlay.empty() ? 0 : overlay[l]);
    };
    double worst = 0.0;
    if (extra_demand == 0) {
        for (const auto& links : paths.path_links) {
            for (LinkIndex l : links) {
                worst = std::max(worst, static_cast<double>(load_on(l)) /
                                            static_cast<double>(links_[l].capacity));
            }
        }
        return worst;
    }
    for (const auto& [l, share] : split_demand(paths, extra_demand)) {
        worst = std::max(worst, static_cast<double>(load_on(l) + share) /
                                    static_cast<double>(links_[l].capacity));
    }
    return worst;
}

ReservationId Topology::reserve(const PathSet& paths, Bandwidth demand) {
    LinkLoad load = split_demand(paths, demand);
    for (const auto& [l, amount] : load) {
        reserved_[l] += amount;
    }
    const ReservationId id{next_reservation_++};
    live_.emplace(id.value, std::move(load));
    return id;
}

void Topology::release(ReservationId id) {
    auto it = live_.find(id.value);
    if (it == live_.end()) {
        throw StateError("release: reservation " + std::to_string(id.value) +
                         " is not live (double release or invalidated by reset)");
    }
    for (const auto& [l, amount] : it->second) {
        reserved_[l] -= amount;
    }
    live_.erase(it);
}

void Topology::reset_network() {
    std::fill(reserved_.begin(), reserved_.end(), 0);
    live_.clear();
}

double Topology::utilization(LinkIndex i) const {
    return static_cast<double>(reserved_.at(i)) / static_cast<double>(links_.at(i).capacity);
}

} // namespace wleng
