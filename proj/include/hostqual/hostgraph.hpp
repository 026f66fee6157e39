#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hostqual/corpus.hpp"

namespace hostqual {

enum class WeightKind { One, LogN, N };

// Hyperlink count -> edge weight. LogN is ln(1+n) so single-link edges keep
// nonzero weight.
double edge_weight(WeightKind kind, int64_t n);

const char* weight_kind_token(WeightKind kind);

struct RawEdge {
    HostId src;
    HostId dst;
    int64_t count = 0;
};

struct GraphEdge {
    int32_t node = 0;    // neighbor index
    int64_t count = 0;   // summed hyperlink count, >= 1
};

// Directed host graph with per-pair hyperlink counts. Nodes are ordered
// lexicographically by canonical name; in_edges is the exact transpose of
// out_edges; adjacency lists are sorted by neighbor index.
struct HostGraph {
    std::vector<HostId> nodes;
    std::vector<std::vector<GraphEdge>> out_edges;
    std::vector<std::vector<GraphEdge>> in_edges;

    size_t size() const { return nodes.size(); }
    bool empty() const { return nodes.empty(); }
    std::optional<int32_t> find(const HostId& host) const;
    int32_t require(const HostId& host) const;  // DataError when absent
};

// Sums parallel (src,dst) entries, drops self-loops, keeps edges with summed
// count >= min_count. extra_hosts become nodes even when isolated. Hosts are
// expected to be canonical already.
HostGraph build_graph(const std::vector<RawEdge>& edges, int64_t min_count = 1,
                      const std::vector<HostId>& extra_hosts = {});

// src_host<TAB>dst_host<TAB>count; hosts canonicalized on read.
std::vector<RawEdge> read_edges_tsv(const std::filesystem::path& path);

// Column-stochastic transition built from out-edge weights; dangling columns
// spread their mass uniformly over all nodes.
struct TransitionMatrix {
    int32_t n = 0;
    std::vector<std::vector<std::pair<int32_t, double>>> out_probs;  // per source
    std::vector<uint8_t> dangling;

    // y = M * x with a fixed sequential reduction order.
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

TransitionMatrix transition_matrix(const HostGraph& g, WeightKind kind);

}  // namespace hostqual
