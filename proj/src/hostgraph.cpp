#include "hostqual/hostgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hostqual/errors.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

double edge_weight(WeightKind kind, int64_t n) {
    switch (kind) {
        case WeightKind::One: return 1.0;
        case WeightKind::LogN: return std::log1p(static_cast<double>(n));
        case WeightKind::N: return static_cast<double>(n);
    }
    throw InternalError("unhandled weight kind");
}

const char* weight_kind_token(WeightKind kind) {
    switch (kind) {
        case WeightKind::One: return "w1";
        case WeightKind::LogN: return "wlog";
        case WeightKind::N: return "wn";
    }
    throw InternalError("unhandled weight kind");
}

std::optional<int32_t> HostGraph::find(const HostId& host) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), host);
    if (it == nodes.end() || *it != host) {
        return std::nullopt;
    }
    return static_cast<int32_t>(it - nodes.begin());
}

int32_t HostGraph::require(const HostId& host) const {
    auto idx = find(host);
    if (!idx) {
        throw DataError("host '" + host + "' is not a graph node");
    }
    return *idx;
}

HostGraph build_graph(const std::vector<RawEdge>& edges, int64_t min_count,
                      const std::vector<HostId>& extra_hosts) {
    HostGraph g;
    g.nodes.reserve(edges.size() * 2 + extra_hosts.size());
    for (const auto& e : edges) {
        if (e.count <= 0) {
            throw DataError("edge " + e.src + " -> " + e.dst + " has count " +
                            std::to_string(e.count) + " (must be >= 1)");
        }
        g.nodes.push_back(e.src);
        g.nodes.push_back(e.dst);
    }
    g.nodes.insert(g.nodes.end(), extra_hosts.begin(), extra_hosts.end());
    std::sort(g.nodes.begin(), g.nodes.end());
    g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());

    // Sum parallel entries keyed by (src,dst); the threshold applies to the
    // summed raw count.
    std::map<std::pair<int32_t, int32_t>, int64_t> counts;
    for (const auto& e : edges) {
        int32_t s = *g.find(e.src);
        int32_t d = *g.find(e.dst);
        if (s == d) {
            continue;  // self-loops carry no inter-host endorsement
        }
        counts[{s, d}] += e.count;
    }

    g.out_edges.assign(g.nodes.size(), {});
    g.in_edges.assign(g.nodes.size(), {});
    for (const auto& [key, n] : counts) {
        if (n < min_count) {
            continue;
        }
        g.out_edges[key.first].push_back({key.second, n});
        g.in_edges[key.second].push_back({key.first, n});
    }
    // Map iteration is (src,dst)-ordered, so out lists are already sorted;
    // in lists need their own pass.
    for (auto& edges_in : g.in_edges) {
        std::sort(edges_in.begin(), edges_in.end(),
                  [](const GraphEdge& a, const GraphEdge& b) { return a.node < b.node; });
    }
    return g;
}

std::vector<RawEdge> read_edges_tsv(const std::filesystem::path& path) {
    std::vector<RawEdge> edges;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (f.size() != 3) {
            throw DataError(context + ": expected 3 fields, got " + std::to_string(f.size()));
        }
        RawEdge e;
        try {
            e.src = canonicalize_host(f[0]);
            e.dst = canonicalize_host(f[1]);
        } catch (const DataError& err) {
            throw DataError(context + ": " + err.what());
        }
        e.count = parse_int(f[2], context);
        if (e.count <= 0) {
            throw DataError(context + ": edge count must be >= 1");
        }
        edges.push_back(std::move(e));
    });
    return edges;
}

void TransitionMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n, 0.0);
    double dangling_mass = 0.0;
    for (int32_t src = 0; src < n; ++src) {
        if (dangling[src]) {
            dangling_mass += x[src];
            continue;
        }
        for (const auto& [dst, p] : out_probs[src]) {
            y[dst] += p * x[src];
        }
    }
    if (n > 0 && dangling_mass != 0.0) {
        double share = dangling_mass / n;
        for (int32_t i = 0; i < n; ++i) {
            y[i] += share;
        }
    }
}

TransitionMatrix transition_matrix(const HostGraph& g, WeightKind kind) {
    TransitionMatrix m;
    m.n = static_cast<int32_t>(g.size());
    m.out_probs.resize(g.size());
    m.dangling.assign(g.size(), 0);
    for (size_t src = 0; src < g.size(); ++src) {
        const auto& out = g.out_edges[src];
        if (out.empty()) {
            m.dangling[src] = 1;
            continue;
        }
        double total = 0.0;
        for (const auto& e : out) {
            total += edge_weight(kind, e.count);
        }
        auto& probs = m.out_probs[src];
        probs.reserve(out.size());
        for (const auto& e : out) {
            probs.emplace_back(e.node, edge_weight(kind, e.count) / total);
        }
    }
    return m;
}

}  // namespace hostqual
