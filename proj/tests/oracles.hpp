// Test-only reference implementations: dense, explicit versions of the rank
// computations, kept independent of the library's sparse code paths.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hostqual/hostgraph.hpp"

namespace oracle {

using hostqual::HostGraph;
using hostqual::WeightKind;

// Dense column-stochastic transition: column j spreads over j's
// out-neighbors by weight, or uniformly over all nodes when j is dangling.
inline std::vector<std::vector<double>> dense_transition(const HostGraph& g,
                                                         WeightKind kind) {
    const size_t n = g.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (size_t j = 0; j < n; ++j) {
        const auto& out = g.out_edges[j];
        if (out.empty()) {
            for (size_t i = 0; i < n; ++i) {
                m[i][j] = 1.0 / static_cast<double>(n);
            }
            continue;
        }
        double total = 0.0;
        for (const auto& e : out) {
            total += hostqual::edge_weight(kind, e.count);
        }
        for (const auto& e : out) {
            m[e.node][j] = hostqual::edge_weight(kind, e.count) / total;
        }
    }
    return m;
}

inline std::vector<double> dense_matvec(const std::vector<std::vector<double>>& m,
                                        const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<double> y(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            y[i] += m[i][j] * x[j];
        }
    }
    return y;
}

// Fixed-iteration power method on the dense matrix.
inline std::vector<double> dense_hostrank(const HostGraph& g, WeightKind kind,
                                          double alpha, int iters) {
    const size_t n = g.size();
    auto m = dense_transition(g, kind);
    std::vector<double> r(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < iters; ++it) {
        auto mr = dense_matvec(m, r);
        for (size_t i = 0; i < n; ++i) {
            r[i] = (1.0 - alpha) / static_cast<double>(n) + alpha * mr[i];
        }
    }
    return r;
}

// Explicit series sum_{t=T+1..t_max} (1-alpha) alpha^t M^t u.
inline std::vector<double> dense_truncated_pagerank(const HostGraph& g, WeightKind kind,
                                                    double alpha, int T, int t_max) {
    const size_t n = g.size();
    auto m = dense_transition(g, kind);
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> acc(n, 0.0);
    double coef = 1.0 - alpha;
    for (int t = 1; t <= t_max; ++t) {
        v = dense_matvec(m, v);
        coef *= alpha;
        if (t > T) {
            for (size_t i = 0; i < n; ++i) {
                acc[i] += coef * v[i];
            }
        }
    }
    return acc;
}

// Supporter counts through boolean reachability matrices: R_d accumulates
// A^1 | A^2 | ... | A^d over the adjacency A (edge v->h sets A[v][h]).
inline std::vector<double> dense_supporters(const HostGraph& g, int d) {
    const size_t n = g.size();
    std::vector<std::vector<uint8_t>> adj(n, std::vector<uint8_t>(n, 0));
    for (size_t src = 0; src < n; ++src) {
        for (const auto& e : g.out_edges[src]) {
            adj[src][e.node] = 1;
        }
    }
    auto reach = adj;
    auto power = adj;
    for (int step = 2; step <= d; ++step) {
        std::vector<std::vector<uint8_t>> next(n, std::vector<uint8_t>(n, 0));
        for (size_t i = 0; i < n; ++i) {
            for (size_t k = 0; k < n; ++k) {
                if (!power[i][k]) continue;
                for (size_t j = 0; j < n; ++j) {
                    if (adj[k][j]) next[i][j] = 1;
                }
            }
        }
        power = next;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                if (power[i][j]) reach[i][j] = 1;
            }
        }
    }
    std::vector<double> counts(n, 0.0);
    for (size_t h = 0; h < n; ++h) {
        for (size_t v = 0; v < n; ++v) {
            if (v != h && reach[v][h]) {
                counts[h] += 1.0;
            }
        }
    }
    return counts;
}

// Seeded random graph over zero-padded node names; parallel entries and
// self-loops are left to build_graph's rules.
inline HostGraph random_graph(std::mt19937_64& rng, int max_nodes, int max_edges) {
    int n = 2 + static_cast<int>(rng() % (max_nodes - 1));
    auto name = [](int i) {
        std::string s = "h" + std::to_string(i);
        while (s.size() < 4) s.insert(1, "0");
        return s;
    };
    std::vector<hostqual::HostId> hosts;
    hosts.reserve(n);
    for (int i = 0; i < n; ++i) {
        hosts.push_back(name(i));
    }
    int m = static_cast<int>(rng() % (max_edges + 1));
    std::vector<hostqual::RawEdge> edges;
    edges.reserve(m);
    for (int e = 0; e < m; ++e) {
        int src = static_cast<int>(rng() % n);
        int dst = static_cast<int>(rng() % n);
        int64_t count = 1 + static_cast<int64_t>(rng() % 5);
        edges.push_back({name(src), name(dst), count});
    }
    return hostqual::build_graph(edges, 1, hosts);
}

}  // namespace oracle
