#include <wleng/topology.hpp>

#include <wleng/error.hpp>
#include <wleng/rng.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace wleng {

Topology generate_topology(const TopologyGeneratorParams& params) {
    const std::size_t n = params.pop_count;
    if (n < 1 || params.dc_count < 1 || params.dc_count > n) {
        throw ValidationError("generate_topology: need 1 <= dc_count <= pop_count");
    }
    if (params.avg_degree < 2.0) {
        throw ValidationError("generate_topology: avg_degree must be >= 2");
    }
    if (params.link_capacity <= 0) {
        throw ValidationError("generate_topology: link capacity must be positive");
    }
    if (params.latency_min_ms < 0 || params.latency_max_ms < params.latency_min_ms) {
        throw ValidationError("generate_topology: invalid latency range");
    }
    if (params.slots_per_dc < 1) {
        throw ValidationError("generate_topology: slots_per_dc must be >= 1");
    }
    const auto target_links = static_cast<std::size_t>(std::llround(params.avg_degree * static_cast<double>(n) / 2.0));
    const std::size_t max_links = n * (n - 1) / 2;
    if (target_links < n - 1 || target_links > max_links) {
        throw ValidationError("generate_topology: average degree " + std::to_string(params.avg_degree) +
                              " is infeasible for " + std::to_string(n) + " nodes");
    }

    Rng rng(params.seed);
    const std::size_t width = std::max<std::size_t>(2, std::to_string(n).size());
    auto make_id = [&](std::size_t i) {
        std::string digits = std::to_string(i + 1);
        return "pop" + std::string(width - digits.size(), '0') + digits;
    };

    // Partial Fisher-Yates picks the dc-hosting POPs.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < params.dc_count; ++i) {
        std::swap(order[i], order[i + rng.uniform_index(n - i)]);
    }
    std::vector<bool> is_dc(n, false);
    for (std::size_t i = 0; i < params.dc_count; ++i) is_dc[order[i]] = true;

    std::vector<Node> nodes;
    for (std::size_t i = 0; i < n; ++i) {
        Node node{make_id(i), is_dc[i] ? NodeRole::Dc : NodeRole::Access, is_dc[i] ? params.slots_per_dc : 0};
        nodes.push_back(std::move(node));
    }

    // Random spanning tree: shuffle, then attach each node to a uniformly
    // chosen earlier node.
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t u = order[i];
        const std::size_t v = order[rng.uniform_index(i)];
        edges.emplace(std::min(u, v), std::max(u, v));
    }
    std::vector<std::pair<std::size_t, std::size_t>> spare;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (!edges.contains({u, v})) spare.emplace_back(u, v);
        }
    }
    while (edges.size() < target_links) {
        const std::size_t pick = rng.uniform_index(spare.size());
        edges.insert(spare[pick]);
        spare[pick] = spare.back();
        spare.pop_back();
    }

    const LatencyUs lo = latency_from_ms(params.latency_min_ms);
    const LatencyUs hi = latency_from_ms(params.latency_max_ms);
    std::vector<LinkSpec> links;
    for (const auto& [u, v] : edges) {
        links.push_back(LinkSpec{make_id(u), make_id(v), params.link_capacity, rng.uniform_int(lo, hi)});
    }
    return Topology(std::move(nodes), std::move(links));
}

} // namespace wleng
