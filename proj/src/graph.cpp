#include "netsel/graph.hpp"

#include <algorithm>
#include <deque>

#include "netsel/error.hpp"

namespace netsel {

Graph::Graph(std::size_t node_count) : adjacency_(node_count) {}

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
    Graph g(node_count);
    for (auto [u, v] : edges) {
        g.check_pair(u, v);
        g.adjacency_[u].push_back(v);
        g.adjacency_[v].push_back(u);
    }
    std::size_t total = 0;
    for (auto& nbrs : g.adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        total += nbrs.size();
    }
    g.edge_count_ = total / 2;
    return g;
}

void Graph::check_node(NodeId v) const {
    if (v >= adjacency_.size())
        fail(ErrorCode::InvalidNode, "node id " + std::to_string(v) + " out of range [0, " +
                                         std::to_string(adjacency_.size()) + ")");
}

void Graph::check_pair(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    if (u == v) fail(ErrorCode::InvalidEdge, "self-loop on node " + std::to_string(u));
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
    check_node(v);
    return adjacency_[v];
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
    const NodeId other = &a == &adjacency_[u] ? v : u;
    return std::binary_search(a.begin(), a.end(), other);
}

bool Graph::toggle_edge(NodeId u, NodeId v) {
    check_pair(u, v);
    auto& au = adjacency_[u];
    auto& av = adjacency_[v];
    auto iu = std::lower_bound(au.begin(), au.end(), v);
    auto iv = std::lower_bound(av.begin(), av.end(), u);
    if (iu != au.end() && *iu == v) {
        au.erase(iu);
        av.erase(iv);
        --edge_count_;
        return false;
    }
    au.insert(iu, v);
    av.insert(iv, u);
    ++edge_count_;
    return true;
}

bool Graph::add_edge(NodeId u, NodeId v) {
    if (has_edge(u, v)) return false;
    check_pair(u, v);
    toggle_edge(u, v);
    return true;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u)
        for (NodeId v : adjacency_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph build_graph(std::size_t node_count, std::span<const Edge> edges) {
    return Graph::from_edges(node_count, edges);
}

Graph toggle_edge(Graph g, NodeId u, NodeId v) {
    g.toggle_edge(u, v);
    return g;
}

std::vector<std::size_t> degree_sequence(const Graph& g) {
    std::vector<std::size_t> degrees(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) degrees[v] = g.degree(v);
    return degrees;
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
    std::vector<NodeId> keep(nodes.begin(), nodes.end());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (!keep.empty() && keep.back() >= g.node_count())
        fail(ErrorCode::InvalidNode, "node id " + std::to_string(keep.back()) + " out of range");

    constexpr NodeId absent = static_cast<NodeId>(-1);
    std::vector<NodeId> relabel(g.node_count(), absent);
    for (std::size_t i = 0; i < keep.size(); ++i) relabel[keep[i]] = static_cast<NodeId>(i);

    std::vector<Edge> edges;
    for (NodeId u : keep)
        for (NodeId v : g.neighbors(u))
            if (u < v && relabel[v] != absent) edges.emplace_back(relabel[u], relabel[v]);
    return Graph::from_edges(keep.size(), edges);
}

std::vector<Distance> shortest_path_distances(const Graph& g, NodeId source) {
    if (source >= g.node_count())
        fail(ErrorCode::InvalidNode, "source " + std::to_string(source) + " out of range");
    std::vector<Distance> dist(g.node_count());
    std::deque<NodeId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : g.neighbors(u)) {
            if (dist[v]) continue;
            dist[v] = *dist[u] + 1;
            queue.push_back(v);
        }
    }
    return dist;
}

std::vector<std::size_t> connected_components(const Graph& g, std::size_t* count) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(g.node_count(), unset);
    std::vector<NodeId> stack;
    std::size_t next = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u)) {
                if (label[v] != unset) continue;
                label[v] = next;
                stack.push_back(v);
            }
        }
        ++next;
    }
    if (count) *count = next;
    return label;
}

}  // namespace netsel
