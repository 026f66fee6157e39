#include "hostqual/textfeat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hostqual/errors.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

int64_t TermStats::frequency(size_t host_row, int32_t term) const {
    const auto& row = host_terms[host_row];
    auto it = std::lower_bound(row.begin(), row.end(), term,
                               [](const auto& a, int32_t t) { return a.first < t; });
    if (it == row.end() || it->first != term) {
        return 0;
    }
    return it->second;
}

TermStats build_term_stats(const std::vector<TermTriple>& triples,
                           const std::vector<HostId>& hosts) {
    TermStats stats;
    stats.hosts = hosts;
    std::sort(stats.hosts.begin(), stats.hosts.end());
    stats.hosts.erase(std::unique(stats.hosts.begin(), stats.hosts.end()), stats.hosts.end());

    stats.terms.reserve(triples.size());
    for (const auto& t : triples) {
        stats.terms.push_back(t.term);
    }
    std::sort(stats.terms.begin(), stats.terms.end());
    stats.terms.erase(std::unique(stats.terms.begin(), stats.terms.end()), stats.terms.end());

    auto host_row = [&](const HostId& h) -> size_t {
        auto it = std::lower_bound(stats.hosts.begin(), stats.hosts.end(), h);
        if (it == stats.hosts.end() || *it != h) {
            throw DataError("term frequencies name host '" + h +
                            "' which is not in the corpus");
        }
        return static_cast<size_t>(it - stats.hosts.begin());
    };
    auto term_id = [&](const std::string& t) -> int32_t {
        auto it = std::lower_bound(stats.terms.begin(), stats.terms.end(), t);
        return static_cast<int32_t>(it - stats.terms.begin());
    };

    stats.host_terms.assign(stats.hosts.size(), {});
    for (const auto& t : triples) {
        if (t.count < 0) {
            throw DataError("negative term count for host '" + t.host + "'");
        }
        if (t.count == 0) {
            continue;
        }
        stats.host_terms[host_row(t.host)].emplace_back(term_id(t.term), t.count);
    }
    stats.doc_freq.assign(stats.terms.size(), 0);
    for (auto& row : stats.host_terms) {
        std::sort(row.begin(), row.end());
        // Sum duplicate (host,term) entries in place.
        size_t w = 0;
        for (size_t r = 0; r < row.size(); ++r) {
            if (w > 0 && row[w - 1].first == row[r].first) {
                row[w - 1].second += row[r].second;
            } else {
                row[w++] = row[r];
            }
        }
        row.resize(w);
        for (const auto& [term, count] : row) {
            ++stats.doc_freq[term];
        }
    }
    return stats;
}

size_t apply_doc_freq_overrides(TermStats& stats,
                                const std::map<std::string, int64_t>& table) {
    size_t unknown = 0;
    for (const auto& [term, df] : table) {
        auto it = std::lower_bound(stats.terms.begin(), stats.terms.end(), term);
        if (it == stats.terms.end() || *it != term) {
            ++unknown;
            continue;
        }
        if (df < 1 || df > stats.n_docs()) {
            throw DataError("document frequency for term '" + term + "' is " +
                            std::to_string(df) + ", outside [1, " +
                            std::to_string(stats.n_docs()) + "]");
        }
        stats.doc_freq[it - stats.terms.begin()] = df;
    }
    return unknown;
}

std::vector<TermTriple> read_termfreq_tsv(const std::filesystem::path& path) {
    std::vector<TermTriple> triples;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (f.size() != 3) {
            throw DataError(context + ": expected 3 fields, got " + std::to_string(f.size()));
        }
        TermTriple t;
        try {
            t.host = canonicalize_host(f[0]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        if (f[1].empty()) {
            throw DataError(context + ": empty term");
        }
        t.term = f[1];
        t.count = parse_int(f[2], context);
        if (t.count < 0) {
            throw DataError(context + ": term count must be >= 0");
        }
        triples.push_back(std::move(t));
    });
    return triples;
}

std::map<std::string, int64_t> read_docfreq_tsv(const std::filesystem::path& path) {
    std::map<std::string, int64_t> table;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (f.size() != 2) {
            throw DataError(context + ": expected 2 fields, got " + std::to_string(f.size()));
        }
        table[f[0]] = parse_int(f[1], context);
    });
    return table;
}

double tfidf_weight(int64_t f_ik, int64_t n_docs, int64_t n_i) {
    if (n_i < 1 || n_i > n_docs) {
        throw DataError("document frequency " + std::to_string(n_i) +
                        " outside [1, " + std::to_string(n_docs) + "]");
    }
    if (f_ik < 0) {
        throw DataError("negative term frequency");
    }
    return static_cast<double>(f_ik) *
           std::log(static_cast<double>(n_docs) / static_cast<double>(n_i));
}

namespace {

double entropy_bits(const std::map<int, int64_t>& counts, int64_t total) {
    if (total == 0) {
        return 0.0;
    }
    double h = 0.0;
    for (const auto& [cls, c] : counts) {
        if (c == 0) {
            continue;
        }
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

double information_gain(const std::vector<uint8_t>& presence,
                        const std::vector<int>& classes) {
    if (presence.size() != classes.size()) {
        throw DataError("presence and class vectors differ in length");
    }
    if (presence.empty()) {
        throw DataError("information gain needs at least one host");
    }
    const int64_t n = static_cast<int64_t>(classes.size());
    std::map<int, int64_t> all, with_term, without_term;
    int64_t n_with = 0;
    for (size_t i = 0; i < classes.size(); ++i) {
        ++all[classes[i]];
        if (presence[i]) {
            ++with_term[classes[i]];
            ++n_with;
        } else {
            ++without_term[classes[i]];
        }
    }
    const int64_t n_without = n - n_with;
    double h = entropy_bits(all, n);
    double h_with = entropy_bits(with_term, n_with);
    double h_without = entropy_bits(without_term, n_without);
    double p_with = static_cast<double>(n_with) / static_cast<double>(n);
    double p_without = static_cast<double>(n_without) / static_cast<double>(n);
    return h - (p_with * h_with + p_without * h_without);
}

std::vector<int32_t> select_top_k(const TermStats& stats,
                                  const std::vector<int>& host_rows,
                                  const std::vector<int>& classes, int k) {
    if (k < 1) {
        throw ConfigError("selection size must be >= 1");
    }
    if (host_rows.size() != classes.size()) {
        throw DataError("host rows and class labels differ in length");
    }
    const size_t n_terms = stats.terms.size();
    std::vector<double> gains(n_terms, 0.0);
    std::vector<uint8_t> presence(host_rows.size());
    for (size_t t = 0; t < n_terms; ++t) {
        for (size_t i = 0; i < host_rows.size(); ++i) {
            presence[i] = stats.frequency(host_rows[i], static_cast<int32_t>(t)) > 0;
        }
        gains[t] = information_gain(presence, classes);
    }

    std::vector<int32_t> ids(n_terms);
    std::iota(ids.begin(), ids.end(), 0);
    std::sort(ids.begin(), ids.end(), [&](int32_t a, int32_t b) {
        if (gains[a] != gains[b]) {
            return gains[a] > gains[b];
        }
        return a < b;
    });
    if (static_cast<size_t>(k) < ids.size()) {
        ids.resize(k);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

SparseTfidf tfidf_matrix(const TermStats& stats, const std::vector<int32_t>& selected) {
    SparseTfidf out;
    out.hosts = stats.hosts;
    out.term_ids = selected;
    std::sort(out.term_ids.begin(), out.term_ids.end());
    out.term_names.reserve(out.term_ids.size());
    std::vector<int32_t> column_of(stats.terms.size(), -1);
    for (size_t c = 0; c < out.term_ids.size(); ++c) {
        int32_t id = out.term_ids[c];
        if (id < 0 || static_cast<size_t>(id) >= stats.terms.size()) {
            throw DataError("selected term id " + std::to_string(id) + " out of range");
        }
        out.term_names.push_back(stats.terms[id]);
        column_of[id] = static_cast<int32_t>(c);
    }
    out.rows.resize(stats.hosts.size());
    const int64_t n = stats.n_docs();
    for (size_t h = 0; h < stats.hosts.size(); ++h) {
        for (const auto& [term, count] : stats.host_terms[h]) {
            int32_t col = column_of[term];
            if (col < 0) {
                continue;
            }
            out.rows[h].emplace_back(col, tfidf_weight(count, n, stats.doc_freq[term]));
        }
    }
    return out;
}

FeatureMatrix to_feature_matrix(const SparseTfidf& sparse) {
    FeatureMatrix m;
    m.hosts = sparse.hosts;
    m.columns = sparse.term_names;
    m.rows.assign(sparse.hosts.size(), std::vector<double>(sparse.term_names.size(), 0.0));
    for (size_t h = 0; h < sparse.rows.size(); ++h) {
        for (const auto& [col, weight] : sparse.rows[h]) {
            m.rows[h][col] = weight;
        }
    }
    return m;
}

}  // namespace hostqual
