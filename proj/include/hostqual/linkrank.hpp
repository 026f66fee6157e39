#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hostqual/hostgraph.hpp"

namespace hostqual {

struct RankParams {
    double alpha = 0.85;  // damping
    double tol = 1e-9;    // L1 stopping tolerance
    int max_iters = 200;
};

// Per-node values of one link measure, aligned with the graph's node order.
struct MeasureVector {
    std::string name;
    std::vector<double> values;
};

// Power iteration r <- (1-alpha)*u + alpha*M*r with uniform u; the result is
// normalized to sum to 1. Empty graph is an error.
MeasureVector hostrank(const HostGraph& g, WeightKind kind, const RankParams& p);

// Sum of the PageRank series terms (1-alpha)*alpha^t*(M^t u) for t > T,
// truncated once a term's L1 mass drops below tol. Not renormalized.
MeasureVector truncated_pagerank(const HostGraph& g, WeightKind kind, int T,
                                 const RankParams& p);

// Number of distinct nodes with a directed path of length <= d into each
// node, by reverse BFS.
MeasureVector supporters_exact(const HostGraph& g, int d);

// Seeded bit-propagation estimate of the supporter count: every node gets a
// one-bit sketch at a geometric position, sketches OR-propagate along edges
// for d rounds, and the size is decoded from the first-zero-bit position
// averaged over reps with the 0.77351 bias correction.
MeasureVector supporters_estimate(const HostGraph& g, int d, int bits, int reps,
                                  uint64_t seed);

// domain<TAB>value table.
std::map<std::string, double> read_domainpr_tsv(const std::filesystem::path& path);

// Longest-suffix lookup of each host against the table's domain keys
// (a.b.example.org matches b.example.org before example.org). Misses score 0
// and are tallied into miss_count when provided.
MeasureVector domain_pr(const std::vector<HostId>& hosts,
                        const std::map<std::string, double>& table,
                        size_t* miss_count = nullptr);

}  // namespace hostqual
