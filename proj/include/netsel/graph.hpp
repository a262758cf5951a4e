#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netsel {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Hop count from a BFS source; std::nullopt marks an unreachable node.
using Distance = std::optional<std::uint32_t>;

/// Simple undirected graph stored as sorted adjacency lists.
///
/// Invariants: no self-loops, symmetric adjacency, no duplicate neighbors and
/// edge_count() == sum of degrees / 2. Every mutating member preserves them.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t node_count);

    /// Builds a graph from an edge list. Duplicate and reversed pairs collapse
    /// into one edge; self-loops throw InvalidEdge, out-of-range ids throw
    /// InvalidNode.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId v) const;
    std::size_t degree(NodeId v) const { return neighbors(v).size(); }
    bool has_edge(NodeId u, NodeId v) const;

    /// Flips the presence of edge (u, v). Returns true when the edge exists
    /// afterwards.
    bool toggle_edge(NodeId u, NodeId v);

    /// Adds (u, v) unless present; returns false for an existing edge.
    bool add_edge(NodeId u, NodeId v);

    /// Canonical edge list: u < v, lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    void check_node(NodeId v) const;
    void check_pair(NodeId u, NodeId v) const;

    std::vector<std::vector<NodeId>> adjacency_;
    std::size_t edge_count_ = 0;
};

Graph build_graph(std::size_t node_count, std::span<const Edge> edges);

/// Copy of g with (u, v) flipped.
Graph toggle_edge(Graph g, NodeId u, NodeId v);

std::vector<std::size_t> degree_sequence(const Graph& g);

/// Subgraph induced by `nodes`, relabeled 0..|nodes|-1 in ascending id order.
/// Duplicate ids in `nodes` are ignored.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

std::vector<Distance> shortest_path_distances(const Graph& g, NodeId source);

/// Component label per node, labels numbered by smallest member id.
std::vector<std::size_t> connected_components(const Graph& g, std::size_t* count = nullptr);

// Edge-list text format: "# n=<N>" header (required), '#' comments, one
// "u<TAB>v" pair per line with 0-based ids.
Graph read_edge_list(std::string_view text);
std::string write_edge_list(const Graph& g);

struct LabeledGraph {
    Graph graph;
    std::vector<std::string> labels;  // labels[id] is the original node label
};

/// Reads an edge list with arbitrary whitespace-separated node labels and
/// remaps them to dense ids in order of first appearance. A "# n=" header is
/// not required and is ignored.
LabeledGraph read_labeled_edge_list(std::string_view text);

}  // namespace netsel
