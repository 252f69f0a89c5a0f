#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sandnet {

using NodeId = std::uint32_t;

/// Undirected simple graph on nodes 0..n-1. Adjacency is symmetric and has no
/// self-loops; both are enforced by `add_edge`.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t node_count);

    std::size_t size() const noexcept { return neighbors_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Inserts {a, b}. Returns false if the edge already existed. Throws
    /// ValidationError on a self-loop or an out-of-range endpoint.
    bool add_edge(NodeId a, NodeId b);

    bool adjacent(NodeId a, NodeId b) const;
    std::span<const NodeId> neighbors(NodeId v) const { return neighbors_.at(v); }
    std::size_t degree(NodeId v) const { return neighbors_.at(v).size(); }

    /// Each edge once as (i, j) with i < j, in lexicographic order.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    void set_labels(std::vector<std::string> labels);

private:
    std::vector<std::vector<NodeId>> neighbors_;  // each list sorted ascending
    std::vector<std::uint8_t> matrix_;            // dense n*n relation
    std::vector<std::string> labels_;
    std::size_t edge_count_ = 0;
};

using DegreeSequence = std::vector<std::size_t>;

DegreeSequence degree_sequence(const Graph& g);

/// Parses "i j" lines ('#' lines and blanks ignored). Duplicate or reversed
/// lines collapse into one edge.
Graph load_graph(std::string_view text, std::size_t node_count);

/// Node count declared by a "# nodes N" comment, if any.
std::optional<std::size_t> declared_node_count(std::string_view text);

/// Node count from the declaration, else one past the largest endpoint.
std::size_t infer_node_count(std::string_view text);

/// Edge list with a leading "# nodes N" declaration, one "i j" line per edge.
std::string emit_edge_list(const Graph& g);

/// Sidecar "id,uid" CSV.
std::string emit_label_map(const Graph& g);
std::vector<std::string> parse_label_map(std::string_view text);

struct GridGraph {
    Graph graph;
    std::optional<NodeId> sink;
};

/// width x height 4-neighbour lattice, cell (x, y) = y * width + x. With
/// `add_sink` one extra node (id width*height) joins every boundary cell once.
GridGraph grid_graph(std::size_t width, std::size_t height, bool add_sink);

Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
/// Node 0 is the centre.
Graph star_graph(std::size_t leaves);

/// Erdos-Renyi G(n, p).
Graph random_graph(std::size_t n, double edge_probability, std::uint64_t seed);

/// Random spanning tree (each node i > 0 attaches to a uniform earlier node,
/// under a random relabelling) plus independent extra edges with probability p.
Graph random_connected_graph(std::size_t n, double extra_edge_probability, std::uint64_t seed);

/// Copy of g with node v renamed to permutation[v].
Graph relabel(const Graph& g, std::span<const NodeId> permutation);

/// Component id per node; ids are assigned in order of each component's smallest node.
std::vector<std::size_t> connected_components(const Graph& g);

bool is_connected(const Graph& g);

}  // namespace sandnet
