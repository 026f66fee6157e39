#include "hostqual/hostfeat.hpp"

#include <cmath>

#include "hostqual/errors.hpp"

namespace hostqual {

namespace {

void check_node(const MeasureVector& m, int32_t node) {
    if (node < 0 || static_cast<size_t>(node) >= m.values.size()) {
        throw DataError("node index " + std::to_string(node) + " outside measure '" +
                        m.name + "' of size " + std::to_string(m.values.size()));
    }
}

double weighted_neighbor_mean(const MeasureVector& m, const std::vector<GraphEdge>& edges,
                              WeightKind kind) {
    if (edges.empty()) {
        return 0.0;
    }
    double num = 0.0;
    double den = 0.0;
    for (const auto& e : edges) {
        double w = edge_weight(kind, e.count);
        num += m.values[e.node] * w;
        den += w;
    }
    return num / den;
}

}  // namespace

double f1(const MeasureVector& m, int32_t node) {
    check_node(m, node);
    return m.values[node];
}

double f2_inlink(const MeasureVector& m, const HostGraph& g, WeightKind kind,
                 int32_t node) {
    check_node(m, node);
    return weighted_neighbor_mean(m, g.in_edges[node], kind);
}

double f3_outlink(const MeasureVector& m, const HostGraph& g, WeightKind kind,
                  int32_t node) {
    check_node(m, node);
    return weighted_neighbor_mean(m, g.out_edges[node], kind);
}

std::vector<MeasureVector> compute_link_measures(
    const HostGraph& g, const RankParams& p,
    const std::map<std::string, double>& domain_table, size_t* domain_misses) {
    std::vector<MeasureVector> measures;
    measures.reserve(10);
    measures.push_back(hostrank(g, WeightKind::N, p));
    measures.push_back(domain_pr(g.nodes, domain_table, domain_misses));
    for (int T = 1; T <= 4; ++T) {
        measures.push_back(truncated_pagerank(g, WeightKind::N, T, p));
    }
    for (int d = 1; d <= 4; ++d) {
        measures.push_back(supporters_exact(g, d));
    }
    return measures;
}

FeatureMatrix assemble_host_features(const HostGraph& g,
                                     const std::vector<MeasureVector>& measures) {
    if (measures.size() != 10) {
        throw ConfigError("host feature assembly needs exactly 10 measures, got " +
                          std::to_string(measures.size()));
    }
    for (const auto& m : measures) {
        if (m.values.size() != g.size()) {
            throw ConfigError("measure '" + m.name + "' covers " +
                              std::to_string(m.values.size()) + " nodes, graph has " +
                              std::to_string(g.size()));
        }
    }

    FeatureMatrix out;
    out.hosts = g.nodes;
    for (const auto& m : measures) {
        out.columns.push_back(m.name + "_f1");
        out.columns.push_back(m.name + "_f2_w1");
        out.columns.push_back(m.name + "_f2_wn");
        out.columns.push_back(m.name + "_f3_w1");
        out.columns.push_back(m.name + "_f3_wn");
    }
    out.rows.resize(g.size());
    for (int32_t h = 0; h < static_cast<int32_t>(g.size()); ++h) {
        auto& row = out.rows[h];
        row.reserve(out.columns.size());
        for (const auto& m : measures) {
            row.push_back(std::log1p(f1(m, h)));
            row.push_back(std::log1p(f2_inlink(m, g, WeightKind::One, h)));
            row.push_back(std::log1p(f2_inlink(m, g, WeightKind::N, h)));
            row.push_back(std::log1p(f3_outlink(m, g, WeightKind::One, h)));
            row.push_back(std::log1p(f3_outlink(m, g, WeightKind::N, h)));
        }
    }
    return out;
}

}  // namespace hostqual
