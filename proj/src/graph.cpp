#include "sandnet/graph.hpp"

#include "sandnet/error.hpp"
#include "sandnet/io.hpp"
#include "sandnet/rng.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <queue>
#include <sstream>

namespace sandnet {

Graph::Graph(std::size_t node_count) : neighbors_(node_count), matrix_(node_count * node_count, 0) {}

bool Graph::add_edge(NodeId a, NodeId b) {
    const std::size_t n = size();
    if (a >= n || b >= n) {
        throw ValidationError("edge endpoint out of range: " + std::to_string(a) + " " + std::to_string(b) +
                              " (n = " + std::to_string(n) + ")");
    }
    if (a == b) throw ValidationError("self-loop on node " + std::to_string(a));
    if (matrix_[a * n + b]) return false;
    matrix_[a * n + b] = 1;
    matrix_[b * n + a] = 1;
    auto insert_sorted = [](std::vector<NodeId>& list, NodeId v) {
        list.insert(std::lower_bound(list.begin(), list.end(), v), v);
    };
    insert_sorted(neighbors_[a], b);
    insert_sorted(neighbors_[b], a);
    ++edge_count_;
    return true;
}

bool Graph::adjacent(NodeId a, NodeId b) const {
    const std::size_t n = size();
    if (a >= n || b >= n) return false;
    return matrix_[a * n + b] != 0;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId i = 0; i < size(); ++i) {
        for (NodeId j : neighbors_[i]) {
            if (i < j) out.emplace_back(i, j);
        }
    }
    return out;
}

void Graph::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != size()) {
        throw ValidationError("label count " + std::to_string(labels.size()) + " does not match node count " +
                              std::to_string(size()));
    }
    labels_ = std::move(labels);
}

DegreeSequence degree_sequence(const Graph& g) {
    DegreeSequence deg(g.size());
    for (NodeId i = 0; i < g.size(); ++i) deg[i] = g.degree(i);
    return deg;
}

namespace {

template <typename Int>
Int parse_int(std::string_view token, std::size_t line) {
    Int value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

}  // namespace

std::optional<std::size_t> declared_node_count(std::string_view text) {
    for (std::string_view line : io::lines(text)) {
        line = io::trim(line);
        if (line.empty()) continue;
        if (line.front() != '#') break;
        auto words = tokens(line.substr(1));
        if (words.size() == 2 && words[0] == "nodes") return parse_int<std::size_t>(words[1], 0);
    }
    return std::nullopt;
}

std::size_t infer_node_count(std::string_view text) {
    if (auto declared = declared_node_count(text)) return *declared;
    std::size_t n = 0;
    std::size_t line_no = 0;
    for (std::string_view line : io::lines(text)) {
        ++line_no;
        line = io::trim(line);
        if (line.empty() || line.front() == '#') continue;
        for (auto tok : tokens(line)) n = std::max(n, parse_int<std::size_t>(tok, line_no) + 1);
    }
    return n;
}

Graph load_graph(std::string_view text, std::size_t node_count) {
    Graph g(node_count);
    std::size_t line_no = 0;
    for (std::string_view line : io::lines(text)) {
        ++line_no;
        line = io::trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto words = tokens(line);
        if (words.size() != 2) throw ParseError(line_no, "expected 'i j', got '" + std::string(line) + "'");
        const auto a = parse_int<NodeId>(words[0], line_no);
        const auto b = parse_int<NodeId>(words[1], line_no);
        try {
            g.add_edge(a, b);
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return g;
}

std::string emit_edge_list(const Graph& g) {
    std::ostringstream out;
    out << "# nodes " << g.size() << '\n';
    for (auto [i, j] : g.edges()) out << i << ' ' << j << '\n';
    return out.str();
}

std::string emit_label_map(const Graph& g) {
    std::ostringstream out;
    out << "id,uid\n";
    for (NodeId i = 0; i < g.size(); ++i) {
        out << i << ',' << (g.labels().empty() ? std::to_string(i) : g.labels()[i]) << '\n';
    }
    return out.str();
}

std::vector<std::string> parse_label_map(std::string_view text) {
    std::vector<std::string> labels;
    std::size_t line_no = 0;
    bool header_seen = false;
    for (std::string_view line : io::lines(text)) {
        ++line_no;
        line = io::trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "id,uid") throw ParseError(line_no, "expected header 'id,uid'");
            header_seen = true;
            continue;
        }
        auto fields = io::split(line, ',');
        if (fields.size() != 2) throw ParseError(line_no, "expected 'id,uid'");
        const auto id = parse_int<std::size_t>(fields[0], line_no);
        if (id != labels.size()) throw ParseError(line_no, "label ids must be 0..n-1 in order");
        labels.emplace_back(fields[1]);
    }
    return labels;
}

GridGraph grid_graph(std::size_t width, std::size_t height, bool add_sink) {
    if (width == 0 || height == 0) throw ValidationError("grid dimensions must be at least 1");
    const std::size_t cells = width * height;
    GridGraph out{Graph(cells + (add_sink ? 1 : 0)), std::nullopt};
    auto id = [width](std::size_t x, std::size_t y) { return static_cast<NodeId>(y * width + x); };
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            if (x + 1 < width) out.graph.add_edge(id(x, y), id(x + 1, y));
            if (y + 1 < height) out.graph.add_edge(id(x, y), id(x, y + 1));
        }
    }
    if (add_sink) {
        const auto sink = static_cast<NodeId>(cells);
        out.sink = sink;
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                if (x == 0 || y == 0 || x + 1 == width || y + 1 == height) out.graph.add_edge(id(x, y), sink);
            }
        }
    }
    return out;
}

Graph path_graph(std::size_t n) {
    Graph g(n);
    for (NodeId i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph complete_graph(std::size_t n) {
    Graph g(n);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) g.add_edge(i, j);
    }
    return g;
}

Graph star_graph(std::size_t leaves) {
    Graph g(leaves + 1);
    for (NodeId i = 1; i <= leaves; ++i) g.add_edge(0, i);
    return g;
}

Graph random_graph(std::size_t n, double edge_probability, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Graph g(n);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (rng.unit() < edge_probability) g.add_edge(i, j);
        }
    }
    return g;
}

Graph random_connected_graph(std::size_t n, double extra_edge_probability, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    Graph g(n);
    for (std::size_t i = 1; i < n; ++i) g.add_edge(order[i], order[rng.below(i)]);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (rng.unit() < extra_edge_probability) g.add_edge(i, j);
        }
    }
    return g;
}

Graph relabel(const Graph& g, std::span<const NodeId> permutation) {
    if (permutation.size() != g.size()) throw ValidationError("permutation size mismatch");
    Graph out(g.size());
    for (auto [i, j] : g.edges()) out.add_edge(permutation[i], permutation[j]);
    return out;
}

std::vector<std::size_t> connected_components(const Graph& g) {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> comp(g.size(), unset);
    std::size_t next = 0;
    for (NodeId s = 0; s < g.size(); ++s) {
        if (comp[s] != unset) continue;
        std::queue<NodeId> queue;
        queue.push(s);
        comp[s] = next;
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop();
            for (NodeId w : g.neighbors(v)) {
                if (comp[w] == unset) {
                    comp[w] = next;
                    queue.push(w);
                }
            }
        }
        ++next;
    }
    return comp;
}

bool is_connected(const Graph& g) {
    auto comp = connected_components(g);
    return std::all_of(comp.begin(), comp.end(), [](std::size_t c) { return c == 0; });
}

}  // namespace sandnet
