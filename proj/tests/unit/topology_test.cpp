#include <wleng/error.hpp>
#include <wleng/topology.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

namespace wleng {
namespace {

Topology line_abc() {
    return Topology({{"a", NodeRole::Access}, {"b", NodeRole::Transit}, {"c", NodeRole::Dc, 10}},
                    {{"a", "b", 10 * kGbps, 1000}, {"b", "c", 10 * kGbps, 1000}});
}

// a-b-c and a-d-c; latency of a-b configurable.
Topology square(LatencyUs ab = 1000) {
    return Topology({{"a", NodeRole::Access}, {"b", NodeRole::Transit}, {"c", NodeRole::Dc, 10},
                     {"d", NodeRole::Transit}},
                    {{"a", "b", 10 * kGbps, ab},
                     {"b", "c", 10 * kGbps, 1000},
                     {"a", "d", 10 * kGbps, 1000},
                     {"d", "c", 10 * kGbps, 1000}});
}

std::vector<std::string> ids(const Topology& t, const std::vector<NodeIndex>& path) {
    std::vector<std::string> out;
    for (NodeIndex n : path) out.push_back(t.node(n).id);
    return out;
}

TEST(LoadTopology, MinimalValidInput) {
    const auto t = load_topology(R"({"nodes":[{"id":"x","role":"access"},{"id":"y","role":"dc","slots":4}],
                                     "links":[{"a":"x","b":"y","capacity_bps":1000,"latency_ms":2.5}]})");
    ASSERT_EQ(t.nodes().size(), 2u);
    ASSERT_EQ(t.links().size(), 1u);
    EXPECT_EQ(t.reserved(0), 0);
    EXPECT_EQ(t.link(0).latency, 2500);
    EXPECT_EQ(t.node(1).slots, 4);
}

TEST(LoadTopology, DuplicateIdIsNamed) {
    try {
        load_topology(R"({"nodes":[{"id":"x","role":"access"},{"id":"x","role":"dc","slots":1}],"links":[]})");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos) << e.what();
    }
}

TEST(LoadTopology, DisconnectedNodeIsNamed) {
    try {
        load_topology(R"({"nodes":[{"id":"p","role":"access"},{"id":"q","role":"dc","slots":1},
                                   {"id":"r","role":"transit"}],
                          "links":[{"a":"p","b":"q","capacity_bps":10,"latency_ms":1}]})");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("'r'"), std::string::npos) << e.what();
    }
}

TEST(LoadTopology, SchemaViolations) {
    EXPECT_THROW(load_topology("not json"), ValidationError);
    EXPECT_THROW(load_topology(R"({"nodes":[]})"), ValidationError);
    // dc without slots
    EXPECT_THROW(load_topology(R"({"nodes":[{"id":"a","role":"access"},{"id":"b","role":"dc"}],
        "links":[{"a":"a","b":"b","capacity_bps":1,"latency_ms":1}]})"),
                 ValidationError);
    // nonpositive capacity
    EXPECT_THROW(load_topology(R"({"nodes":[{"id":"a","role":"access"},{"id":"b","role":"dc","slots":1}],
        "links":[{"a":"a","b":"b","capacity_bps":0,"latency_ms":1}]})"),
                 ValidationError);
    // self loop and unknown role
    EXPECT_THROW(load_topology(R"({"nodes":[{"id":"a","role":"dc","slots":1}],
        "links":[{"a":"a","b":"a","capacity_bps":1,"latency_ms":1}]})"),
                 ValidationError);
    EXPECT_THROW(load_topology(R"({"nodes":[{"id":"a","role":"core"}],"links":[]})"), ValidationError);
    // parallel link
    EXPECT_THROW(load_topology(R"({"nodes":[{"id":"a","role":"access"},{"id":"b","role":"dc","slots":1}],
        "links":[{"a":"a","b":"b","capacity_bps":1,"latency_ms":1},{"a":"b","b":"a","capacity_bps":1,"latency_ms":1}]})"),
                 ValidationError);
}

TEST(SaveTopology, CanonicalAndReloadable) {
    const auto t = square();
    const std::string text = save_topology(t);
    const auto back = load_topology(text);
    EXPECT_EQ(back.nodes(), t.nodes());
    EXPECT_EQ(back.links(), t.links());
    EXPECT_EQ(save_topology(back), text);
}

TEST(GenerateTopology, GlobalScale) {
    TopologyGeneratorParams p;
    const auto t = generate_topology(p);
    EXPECT_EQ(t.nodes().size(), 11u);
    EXPECT_EQ(t.dc_nodes().size(), 7u);
    EXPECT_EQ(t.access_nodes().size(), 11u);
    for (const Link& l : t.links()) {
        EXPECT_EQ(l.capacity, 10 * kGbps);
        EXPECT_GE(l.latency, 1000);
        EXPECT_LE(l.latency, 30000);
    }
    EXPECT_EQ(t.links().size(), 17u); // round(3.0 * 11 / 2)
}

TEST(GenerateTopology, InCountryScale) {
    TopologyGeneratorParams p;
    p.pop_count = 5;
    p.dc_count = 2;
    p.link_capacity = 80 * kGbps;
    p.latency_min_ms = 1;
    p.latency_max_ms = 5;
    p.seed = 7;
    const auto t = generate_topology(p);
    EXPECT_EQ(t.nodes().size(), 5u);
    EXPECT_EQ(t.dc_nodes().size(), 2u);
    for (const Link& l : t.links()) EXPECT_EQ(l.capacity, 80 * kGbps);
}

TEST(GenerateTopology, DeterministicBytes) {
    TopologyGeneratorParams p;
    EXPECT_EQ(save_topology(generate_topology(p)), save_topology(generate_topology(p)));
    TopologyGeneratorParams q = p;
    q.seed = 43;
    EXPECT_NE(save_topology(generate_topology(p)), save_topology(generate_topology(q)));
}

TEST(GenerateTopology, InfeasibleDegree) {
    TopologyGeneratorParams p;
    p.pop_count = 3;
    p.dc_count = 1;
    p.avg_degree = 3.0; // 3 nodes carry at most 3 links = degree 2
    EXPECT_THROW(generate_topology(p), ValidationError);
    p.pop_count = 2;
    p.avg_degree = 2.0;
    EXPECT_THROW(generate_topology(p), ValidationError);
    p.pop_count = 4;
    p.dc_count = 5;
    EXPECT_THROW(generate_topology(p), ValidationError);
}

TEST(ComputePaths, UniquePathOnLine) {
    const auto t = line_abc();
    const auto ps = t.compute_paths("a", "c");
    ASSERT_EQ(ps.paths.size(), 1u);
    EXPECT_EQ(ids(t, ps.paths[0]), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(ps.common_latency, 2000);
}

TEST(ComputePaths, SquareHasTwoEqualCostPaths) {
    const auto t = square();
    const auto ps = t.compute_paths("a", "c");
    ASSERT_EQ(ps.paths.size(), 2u);
    EXPECT_EQ(ids(t, ps.paths[0]), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(ids(t, ps.paths[1]), (std::vector<std::string>{"a", "d", "c"}));
    EXPECT_EQ(ps.common_latency, 2000);
    EXPECT_EQ(ps.paths, oracle::min_latency_simple_paths(t, ps.source, ps.destination));
}

TEST(ComputePaths, SquareWithSlowEdge) {
    const auto t = square(5000);
    const auto ps = t.compute_paths("a", "c");
    ASSERT_EQ(ps.paths.size(), 1u);
    EXPECT_EQ(ids(t, ps.paths[0]), (std::vector<std::string>{"a", "d", "c"}));
    EXPECT_EQ(ps.common_latency, 2000);
    EXPECT_EQ(ps.paths, oracle::min_latency_simple_paths(t, ps.source, ps.destination));
}

TEST(ComputePaths, SingleShortestModeKeepsFirst) {
    const auto t = square();
    const auto ps = t.compute_paths("a", "c", RoutingMode::SingleShortest);
    ASSERT_EQ(ps.paths.size(), 1u);
    EXPECT_EQ(ids(t, ps.paths[0]), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(ComputePaths, Errors) {
    const auto t = line_abc();
    EXPECT_THROW((void)t.compute_paths("a", "a"), ValidationError);
    EXPECT_THROW((void)t.compute_paths("a", "zz"), ValidationError);
}

TEST(ComputePaths, ZeroLatencyLinksStaySimple) {
    const Topology t({{"a", NodeRole::Access}, {"b", NodeRole::Transit}, {"c", NodeRole::Transit},
                      {"d", NodeRole::Dc, 1}},
                     {{"a", "b", 1, 0}, {"b", "c", 1, 0}, {"a", "c", 1, 0}, {"c", "d", 1, 1000}});
    const auto ps = t.compute_paths("a", "d");
    EXPECT_EQ(ps.paths, oracle::min_latency_simple_paths(t, ps.source, ps.destination));
    EXPECT_EQ(ps.paths.size(), 2u);
}

TEST(ComputePaths, MatchesEnumerationOnRandomGraphs) {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const auto t = oracle::random_small_topology(rng, 8, 2);
        for (NodeIndex s = 0; s < t.nodes().size(); ++s) {
            for (NodeIndex d = 0; d < t.nodes().size(); ++d) {
                if (s == d) continue;
                LatencyUs lat = 0;
                const auto expected = oracle::min_latency_simple_paths(t, s, d, &lat);
                const auto ps = t.compute_paths(s, d);
                ASSERT_EQ(ps.paths, expected);
                ASSERT_EQ(ps.common_latency, lat);
            }
        }
    }
}

// Square with 10 Gb/s links; a-b at 4 Gb/s and b-c at 7 Gb/s reserved.
class UtilizationTest : public ::testing::Test {
protected:
    Topology t = line_abc();
    PathSet ps = t.compute_paths("a", "c");

    void SetUp() override {
        t.reserve(t.compute_paths("a", "b"), 4 * kGbps);
        t.reserve(t.compute_paths("b", "c"), 7 * kGbps);
    }
};

TEST_F(UtilizationTest, CurrentMax) { EXPECT_DOUBLE_EQ(t.max_path_utilization(ps, 0), 0.7); }

TEST_F(UtilizationTest, WithExtraDemand) { EXPECT_DOUBLE_EQ(t.max_path_utilization(ps, kGbps), 0.8); }

TEST(Utilization, EqualSplitAcrossDisjointPaths) {
    const auto t = square();
    const auto ps = t.compute_paths("a", "c");
    EXPECT_DOUBLE_EQ(t.max_path_utilization(ps, kGbps), 0.05);
}

TEST(Utilization, MonotoneInDemand) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = oracle::random_small_topology(rng, 6, 2);
        const NodeIndex src = t.access_nodes().front();
        const NodeIndex dst = t.dc_nodes().back();
        if (src == dst) continue;
        const auto ps = t.compute_paths(src, dst);
        t.reserve(ps, rng.uniform_int(0, 3) * kGbps);
        double prev = t.max_path_utilization(ps, 0);
        for (Bandwidth d = 1; d < 5 * kGbps; d += 97 * kMbps + 13) {
            const double u = t.max_path_utilization(ps, d);
            ASSERT_GE(u, prev);
            prev = u;
        }
    }
}

TEST(Reserve, SinglePathAddsToEveryLink) {
    auto t = line_abc();
    const auto ps = t.compute_paths("a", "c");
    t.reserve(ps, 512 * kMbps);
    EXPECT_EQ(t.reserved(0), 512 * kMbps);
    EXPECT_EQ(t.reserved(1), 512 * kMbps);
}

TEST(Reserve, SplitsEquallyOverDisjointPaths) {
    auto t = square();
    t.reserve(t.compute_paths("a", "c"), kGbps);
    for (LinkIndex l = 0; l < t.links().size(); ++l) EXPECT_EQ(t.reserved(l), 500 * kMbps);
}

TEST(Reserve, RemainderGoesToFirstPath) {
    auto t = square();
    const auto ps = t.compute_paths("a", "c");
    t.reserve(ps, 7);
    // First path a-b-c carries 4, second a-d-c carries 3.
    EXPECT_EQ(t.reserved(*t.find_link(t.node_index("a"), t.node_index("b"))), 4);
    EXPECT_EQ(t.reserved(*t.find_link(t.node_index("a"), t.node_index("d"))), 3);
}

TEST(Reserve, ZeroDemandIsNoOp) {
    auto t = line_abc();
    const auto id = t.reserve(t.compute_paths("a", "c"), 0);
    EXPECT_EQ(t.reserved(0), 0);
    t.release(id);
    EXPECT_EQ(t.reserved(0), 0);
}

TEST(Release, RestoresPriorValues) {
    auto t = line_abc();
    const auto ps = t.compute_paths("a", "c");
    t.reserve(ps, 100);
    const auto id = t.reserve(ps, 12345);
    t.release(id);
    EXPECT_EQ(t.reserved(0), 100);
    EXPECT_EQ(t.reserved(1), 100);
}

TEST(Release, SharedLinkKeepsOtherShare) {
    auto t = line_abc();
    const auto first = t.reserve(t.compute_paths("a", "c"), 300);
    t.reserve(t.compute_paths("b", "c"), 700);
    t.release(first);
    EXPECT_EQ(t.reserved(1), 700);
    EXPECT_EQ(t.reserved(0), 0);
}

TEST(Release, DoubleReleaseThrows) {
    auto t = line_abc();
    const auto id = t.reserve(t.compute_paths("a", "c"), 1);
    t.release(id);
    EXPECT_THROW(t.release(id), StateError);
}

TEST(ResetNetwork, ClearsAndInvalidates) {
    auto t = square();
    const auto ps = t.compute_paths("a", "c");
    const auto id = t.reserve(ps, 3 * kGbps);
    t.reserve(t.compute_paths("b", "c"), kGbps);
    t.reset_network();
    for (LinkIndex l = 0; l < t.links().size(); ++l) EXPECT_EQ(t.reserved(l), 0);
    EXPECT_EQ(t.max_path_utilization(ps, 0), 0.0);
    EXPECT_THROW(t.release(id), StateError);
    t.reset_network(); // fresh state: no-op
    EXPECT_EQ(t.live_reservations(), 0u);
}

TEST(Conservation, RandomInterleavingReturnsToZero) {
    Rng rng(2024);
    auto t = generate_topology({});
    std::vector<std::pair<ReservationId, LinkLoad>> live;
    std::vector<Bandwidth> expected(t.links().size(), 0);
    for (int op = 0; op < 2000; ++op) {
        if (live.empty() || rng.bernoulli(0.6)) {
            const auto& acc = t.access_nodes();
            NodeIndex s = acc[rng.uniform_index(acc.size())];
            NodeIndex d = acc[rng.uniform_index(acc.size())];
            if (s == d) continue;
            const auto ps = t.compute_paths(s, d);
            const Bandwidth demand = rng.uniform_int(0, 900 * kMbps);
            live.emplace_back(t.reserve(ps, demand), split_demand(ps, demand));
            for (auto [l, a] : live.back().second) expected[l] += a;
        } else {
            const std::size_t pick = rng.uniform_index(live.size());
            t.release(live[pick].first);
            for (auto [l, a] : live[pick].second) expected[l] -= a;
            live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        for (LinkIndex l = 0; l < t.links().size(); ++l) ASSERT_EQ(t.reserved(l), expected[l]);
    }
    for (const auto& [id, load] : live) t.release(id);
    for (LinkIndex l = 0; l < t.links().size(); ++l) EXPECT_EQ(t.reserved(l), 0);
}

} // namespace
} // namespace wleng
