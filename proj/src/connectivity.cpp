#include "backnet/connectivity.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "backnet/errors.hpp"

namespace backnet {

Adjacency support_graph(const Plan& plan) {
    const std::size_t m = plan.size();
    Adjacency graph(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && (plan.linked(i, j) || plan.linked(j, i))) {
                graph(i, j) = 1;
            }
        }
    }
    return graph;
}

int edge_disjoint_paths(const Adjacency& graph, StationId s, StationId t) {
    const std::size_t n = graph.size();
    if (s >= n || t >= n) {
        throw InvalidQuery(fmt::format("station pair ({}, {}) outside a graph of size {}", s, t, n));
    }
    if (s == t) {
        throw InvalidQuery(fmt::format("path diversity of station {} with itself is undefined", s));
    }

    // Residual capacities; each undirected edge carries one unit either way.
    SquareMatrix<int> residual(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            residual(i, j) = (i != j && graph(i, j)) ? 1 : 0;
        }
    }

    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent(n);
    std::vector<std::size_t> queue;
    queue.reserve(n);
    int flow = 0;
    for (;;) {
        std::fill(parent.begin(), parent.end(), kNone);
        parent[s] = s;
        queue.clear();
        queue.push_back(s);
        for (std::size_t head = 0; head < queue.size() && parent[t] == kNone; ++head) {
            const std::size_t u = queue[head];
            for (std::size_t v = 0; v < n; ++v) {
                if (parent[v] == kNone && residual(u, v) > 0) {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if (parent[t] == kNone) break;
        for (std::size_t v = t; v != s; v = parent[v]) {
            --residual(parent[v], v);
            ++residual(v, parent[v]);
        }
        ++flow;
    }
    return flow;
}

int edge_connectivity(const Adjacency& graph) {
    const std::size_t n = graph.size();
    if (n < 2) return 0;

    int best = std::numeric_limits<int>::max();
    // Minimum degree bounds the answer and short-circuits isolated stations.
    for (std::size_t i = 0; i < n; ++i) {
        int degree = 0;
        for (std::size_t j = 0; j < n; ++j) {
            degree += (i != j && graph(i, j)) ? 1 : 0;
        }
        best = std::min(best, degree);
    }
    for (std::size_t t = 1; t < n && best > 0; ++t) {
        best = std::min(best, edge_disjoint_paths(graph, 0, t));
    }
    return best;
}

int path_diversity(const Plan& plan, StationId i, StationId j) {
    return edge_disjoint_paths(support_graph(plan), i, j);
}

int min_path_diversity(const Plan& plan) { return edge_connectivity(support_graph(plan)); }

}  // namespace backnet
