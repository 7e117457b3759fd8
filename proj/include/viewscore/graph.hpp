#pragma once

#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "viewscore/errors.hpp"

namespace viewscore {

// Undirected simple graph. Edges are stored with the smaller index first.
struct Graph {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;

    int edge_count() const { return static_cast<int>(edges.size()); }
};

// Throws Validation naming the offending edge; `where` prefixes messages.
inline void validate_graph(const Graph& g, const std::string& where = "graph") {
    if (g.node_count < 0) throw_validation(where + ": negative node count");
    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        auto [i, j] = g.edges[k];
        if (i < 0 || j < 0 || i >= g.node_count || j >= g.node_count)
            throw_validation(where + ": edge " + std::to_string(k) + " (" + std::to_string(i) +
                             "," + std::to_string(j) + ") has node index out of [0," +
                             std::to_string(g.node_count) + ")");
        if (i == j)
            throw_validation(where + ": edge " + std::to_string(k) + " is a self-loop at node " +
                             std::to_string(i));
        auto key = std::minmax(i, j);
        if (!seen.insert(key).second)
            throw_validation(where + ": duplicate edge (" + std::to_string(key.first) + "," +
                             std::to_string(key.second) + ")");
    }
}

inline Graph make_graph(int node_count, std::vector<std::pair<int, int>> edges) {
    Graph g;
    g.node_count = node_count;
    g.edges = std::move(edges);
    for (auto& e : g.edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    validate_graph(g);
    return g;
}

inline double edge_density(const Graph& g) {
    if (g.node_count < 2) throw_domain("edge_density: needs at least 2 nodes");
    double n = static_cast<double>(g.node_count);
    return 2.0 * static_cast<double>(g.edges.size()) / (n * (n - 1.0));
}

inline std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.node_count));
    for (auto [i, j] : g.edges) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
    }
    return adj;
}

// All-pairs unweighted shortest paths; -1 marks unreachable pairs.
struct ShortestPaths {
    int n = 0;
    std::vector<int32_t> d; // row-major n*n

    int32_t at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
};

inline ShortestPaths bfs_all_pairs(const Graph& g) {
    ShortestPaths sp;
    sp.n = g.node_count;
    sp.d.assign(static_cast<std::size_t>(g.node_count) * g.node_count, -1);
    auto adj = adjacency_lists(g);
    std::vector<int> queue(static_cast<std::size_t>(g.node_count));
    for (int s = 0; s < g.node_count; ++s) {
        auto* row = sp.d.data() + static_cast<std::size_t>(s) * g.node_count;
        int head = 0, tail = 0;
        queue[tail++] = s;
        row[s] = 0;
        while (head < tail) {
            int u = queue[head++];
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (row[v] < 0) {
                    row[v] = row[u] + 1;
                    queue[tail++] = v;
                }
            }
        }
    }
    return sp;
}

} // namespace viewscore
