#include "sandnet/error.hpp"
#include "sandnet/graph.hpp"
#include "sandnet/roster.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace sandnet;

TEST(LoadGraph, SingleEdgeIsPath) {
    Graph g = load_graph("0 1", 2);
    EXPECT_EQ(g.size(), 2u);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_TRUE(g.adjacent(0, 1));
    EXPECT_TRUE(g.adjacent(1, 0));
}

TEST(LoadGraph, ReversedDuplicateCollapses) {
    EXPECT_EQ(load_graph("0 1\n1 0", 2).edge_count(), 1u);
}

TEST(LoadGraph, SelfLoopRejected) {
    EXPECT_THROW(load_graph("0 0", 1), ValidationError);
}

TEST(LoadGraph, OutOfRangeAndMalformedLinesRejected) {
    EXPECT_THROW(load_graph("0 5", 3), ValidationError);
    EXPECT_THROW(load_graph("0 x", 3), ParseError);
    EXPECT_THROW(load_graph("0 1 2", 3), ParseError);
}

TEST(LoadGraph, ParseErrorNamesLine) {
    try {
        load_graph("# nodes 3\n0 1\n1 q\n", 3);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(LoadGraph, NodeCountFromDeclarationOrEndpoints) {
    EXPECT_EQ(declared_node_count("# nodes 7\n0 1\n"), 7u);
    EXPECT_FALSE(declared_node_count("0 1\n").has_value());
    EXPECT_EQ(infer_node_count("# nodes 7\n0 1\n"), 7u);
    EXPECT_EQ(infer_node_count("0 1\n4 2\n"), 5u);
}

TEST(DegreeSequence, TriangleAndStar) {
    EXPECT_EQ(degree_sequence(testing_support::triangle()), (DegreeSequence{2, 2, 2}));
    EXPECT_EQ(degree_sequence(star_graph(3)), (DegreeSequence{3, 1, 1, 1}));
}

TEST(DegreeSequence, HandshakeOnFan) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = build_fan(generate_synthetic_roster({}, seed));
        auto d = degree_sequence(g);
        EXPECT_EQ(std::accumulate(d.begin(), d.end(), std::size_t{0}), 2 * g.edges().size());
        EXPECT_EQ(g.edges().size(), g.edge_count());
    }
}

TEST(Grid, Counts) {
    auto g22 = grid_graph(2, 2, false);
    EXPECT_EQ(g22.graph.size(), 4u);
    EXPECT_EQ(g22.graph.edge_count(), 4u);
    EXPECT_FALSE(g22.sink.has_value());

    auto g33 = grid_graph(3, 3, true);
    EXPECT_EQ(g33.graph.size(), 10u);
    ASSERT_TRUE(g33.sink.has_value());
    EXPECT_EQ(*g33.sink, 9u);
    EXPECT_EQ(g33.graph.degree(9), 8u);
    EXPECT_EQ(g33.graph.degree(4), 4u);  // centre
    EXPECT_EQ(g33.graph.degree(0), 3u);  // corner: two cells and the sink

    auto g11 = grid_graph(1, 1, true);
    EXPECT_EQ(g11.graph.size(), 2u);
    EXPECT_EQ(g11.graph.edge_count(), 1u);
}

TEST(Graph, EdgeListRoundTrip) {
    Graph g = random_graph(20, 0.2, 3);
    Graph back = load_graph(emit_edge_list(g), *declared_node_count(emit_edge_list(g)));
    EXPECT_EQ(back.edges(), g.edges());
    EXPECT_EQ(back.size(), g.size());
}

TEST(Graph, LabelMapRoundTrip) {
    Graph g = path_graph(3);
    g.set_labels({"A1", "A2", "B1"});
    EXPECT_EQ(parse_label_map(emit_label_map(g)), g.labels());
}

TEST(GraphProperty, SymmetricLooplessAndSorted) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Graph g = random_graph(15, 0.3, seed);
        for (NodeId a = 0; a < g.size(); ++a) {
            EXPECT_FALSE(g.adjacent(a, a));
            auto nb = g.neighbors(a);
            EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
            for (NodeId b = 0; b < g.size(); ++b) EXPECT_EQ(g.adjacent(a, b), g.adjacent(b, a));
        }
    }
}

TEST(GraphProperty, RandomConnectedIsConnected) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Graph g = random_connected_graph(2 + seed % 40, 0.05, seed);
        EXPECT_TRUE(is_connected(g));
    }
}

TEST(GraphProperty, RelabelPreservesStructure) {
    Graph g = random_connected_graph(12, 0.2, 11);
    std::vector<NodeId> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    Graph h = relabel(g, perm);
    EXPECT_EQ(h.edge_count(), g.edge_count());
    for (auto [a, b] : g.edges()) EXPECT_TRUE(h.adjacent(perm[a], perm[b]));
}

TEST(Graph, ComponentsNumberedBySmallestNode) {
    Graph g(5);
    g.add_edge(3, 4);
    g.add_edge(0, 2);
    auto c = connected_components(g);
    EXPECT_EQ(c, (std::vector<std::size_t>{0, 1, 0, 2, 2}));
    EXPECT_FALSE(is_connected(g));
}
