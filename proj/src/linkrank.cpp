#include "hostqual/linkrank.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "hostqual/errors.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

MeasureVector hostrank(const HostGraph& g, WeightKind kind, const RankParams& p) {
    if (g.empty()) {
        throw DataError("hostrank needs a nonempty graph");
    }
    const int n = static_cast<int>(g.size());
    TransitionMatrix m = transition_matrix(g, kind);
    std::vector<double> r(n, 1.0 / n);
    std::vector<double> next(n);
    const double teleport = (1.0 - p.alpha) / n;
    for (int iter = 0; iter < p.max_iters; ++iter) {
        m.multiply(r, next);
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] = teleport + p.alpha * next[i];
            delta += std::abs(next[i] - r[i]);
        }
        r.swap(next);
        if (delta < p.tol) {
            break;
        }
    }
    // Mass is conserved up to rounding; pin the sum at exactly 1.
    double sum = 0.0;
    for (double v : r) sum += v;
    for (double& v : r) v /= sum;
    return {"hostrank", std::move(r)};
}

MeasureVector truncated_pagerank(const HostGraph& g, WeightKind kind, int T,
                                 const RankParams& p) {
    if (g.empty()) {
        throw DataError("truncated_pagerank needs a nonempty graph");
    }
    if (T < 0) {
        throw ConfigError("truncation level must be >= 0");
    }
    const int n = static_cast<int>(g.size());
    TransitionMatrix m = transition_matrix(g, kind);
    std::vector<double> v(n, 1.0 / n);  // M^0 u
    std::vector<double> next(n);
    std::vector<double> acc(n, 0.0);
    double term_mass = 1.0 - p.alpha;  // L1 mass of term t, since ||M^t u||_1 = 1
    for (int t = 1; t <= p.max_iters; ++t) {
        m.multiply(v, next);
        v.swap(next);
        term_mass *= p.alpha;
        if (t > T) {
            for (int i = 0; i < n; ++i) {
                acc[i] += term_mass * v[i];
            }
        }
        if (term_mass < p.tol) {
            break;
        }
    }
    return {"tpr" + std::to_string(T), std::move(acc)};
}

MeasureVector supporters_exact(const HostGraph& g, int d) {
    if (d < 1) {
        throw ConfigError("supporter distance must be >= 1");
    }
    const int n = static_cast<int>(g.size());
    std::vector<double> counts(n, 0.0);
    std::vector<int> depth(n);
    std::vector<int32_t> frontier, next_frontier;
    for (int32_t h = 0; h < n; ++h) {
        std::fill(depth.begin(), depth.end(), -1);
        depth[h] = 0;
        frontier.assign(1, h);
        int found = 0;
        for (int level = 1; level <= d && !frontier.empty(); ++level) {
            next_frontier.clear();
            for (int32_t u : frontier) {
                for (const auto& e : g.in_edges[u]) {
                    if (depth[e.node] < 0) {
                        depth[e.node] = level;
                        next_frontier.push_back(e.node);
                        ++found;
                    }
                }
            }
            frontier.swap(next_frontier);
        }
        counts[h] = found;
    }
    return {"sup" + std::to_string(d), std::move(counts)};
}

namespace {

// Index of the lowest unset bit, capped at `bits`.
int least_zero_bit(uint64_t sketch, int bits) {
    for (int b = 0; b < bits; ++b) {
        if ((sketch & (uint64_t{1} << b)) == 0) {
            return b;
        }
    }
    return bits;
}

}  // namespace

MeasureVector supporters_estimate(const HostGraph& g, int d, int bits, int reps,
                                  uint64_t seed) {
    if (d < 1) {
        throw ConfigError("supporter distance must be >= 1");
    }
    if (bits < 8 || bits > 64) {
        throw ConfigError("sketch width must be in [8, 64]");
    }
    if (reps < 1) {
        throw ConfigError("repetitions must be >= 1");
    }
    const int n = static_cast<int>(g.size());
    std::vector<double> est(n, 0.0);
    if (n == 0) {
        return {"sup" + std::to_string(d) + "_est", std::move(est)};
    }

    // mark[r*n + v]: v's own one-bit sketch; bit position follows a geometric
    // distribution (trailing zeros of a raw engine draw), capped at bits-1.
    // Raw engine output keeps the stream identical across platforms.
    std::mt19937_64 rng(seed);
    std::vector<uint64_t> mark(static_cast<size_t>(reps) * n);
    for (int r = 0; r < reps; ++r) {
        for (int v = 0; v < n; ++v) {
            uint64_t draw = rng();
            int pos = draw == 0 ? bits - 1 : std::min(std::countr_zero(draw), bits - 1);
            mark[static_cast<size_t>(r) * n + v] = uint64_t{1} << pos;
        }
    }

    std::vector<uint64_t> acc(static_cast<size_t>(reps) * n, 0);
    std::vector<uint64_t> next(acc.size());
    for (int round = 0; round < d; ++round) {
        for (int r = 0; r < reps; ++r) {
            const size_t base = static_cast<size_t>(r) * n;
            for (int h = 0; h < n; ++h) {
                uint64_t s = acc[base + h];
                for (const auto& e : g.in_edges[h]) {
                    s |= mark[base + e.node] | acc[base + e.node];
                }
                next[base + h] = s;
            }
        }
        acc.swap(next);
    }

    constexpr double kBiasCorrection = 0.77351;
    for (int h = 0; h < n; ++h) {
        // An in-path exists iff every rep's sketch is nonempty; all-zero
        // sketches mean no supporters at all.
        if (acc[h] == 0) {
            continue;
        }
        double mean_pos = 0.0;
        for (int r = 0; r < reps; ++r) {
            mean_pos += least_zero_bit(acc[static_cast<size_t>(r) * n + h], bits);
        }
        mean_pos /= reps;
        est[h] = std::pow(2.0, mean_pos) / kBiasCorrection;
    }
    return {"sup" + std::to_string(d) + "_est", std::move(est)};
}

std::map<std::string, double> read_domainpr_tsv(const std::filesystem::path& path) {
    std::map<std::string, double> table;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (f.size() != 2) {
            throw DataError(context + ": expected 2 fields, got " + std::to_string(f.size()));
        }
        double value = parse_double(f[1], context);
        if (value < 0 || !std::isfinite(value)) {
            throw DataError(context + ": rank value must be finite and >= 0");
        }
        std::string domain;
        try {
            domain = canonicalize_host(f[0]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        table[domain] = value;
    });
    return table;
}

MeasureVector domain_pr(const std::vector<HostId>& hosts,
                        const std::map<std::string, double>& table,
                        size_t* miss_count) {
    std::vector<double> values(hosts.size(), 0.0);
    size_t misses = 0;
    for (size_t i = 0; i < hosts.size(); ++i) {
        // Walk suffixes from the full host name down, one label at a time;
        // the first hit is the longest matching domain key.
        std::string_view suffix = hosts[i];
        bool hit = false;
        while (true) {
            auto it = table.find(std::string(suffix));
            if (it != table.end()) {
                values[i] = it->second;
                hit = true;
                break;
            }
            size_t dot = suffix.find('.');
            if (dot == std::string_view::npos) {
                break;
            }
            suffix.remove_prefix(dot + 1);
        }
        if (!hit) {
            ++misses;
        }
    }
    if (miss_count) {
        *miss_count = misses;
    }
    return {"domainpr", std::move(values)};
}

}  // namespace hostqual
