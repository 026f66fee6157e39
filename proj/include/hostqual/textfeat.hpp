#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hostqual/featmat.hpp"

namespace hostqual {

struct TermTriple {
    HostId host;
    std::string term;
    int64_t count = 0;
};

// Term ids are assigned by sorted term order, so selection results never
// depend on the order terms appear in the input file.
struct TermStats {
    std::vector<std::string> terms;  // id -> term
    std::vector<HostId> hosts;       // sorted document universe
    std::vector<std::vector<std::pair<int32_t, int64_t>>> host_terms;  // per host, by term id
    std::vector<int64_t> doc_freq;   // per term

    int64_t n_docs() const { return static_cast<int64_t>(hosts.size()); }
    int64_t frequency(size_t host_row, int32_t term) const;
};

// Every host in `hosts` is a document; hosts in the triples must belong to
// the universe. Duplicate (host,term) entries are summed.
TermStats build_term_stats(const std::vector<TermTriple>& triples,
                           const std::vector<HostId>& hosts);

// Optional externally supplied document frequencies; overrides known terms,
// returns how many table entries named unknown terms.
size_t apply_doc_freq_overrides(TermStats& stats,
                                const std::map<std::string, int64_t>& table);

// host<TAB>term<TAB>count
std::vector<TermTriple> read_termfreq_tsv(const std::filesystem::path& path);
// term<TAB>doc_freq
std::map<std::string, int64_t> read_docfreq_tsv(const std::filesystem::path& path);

// f_ik * ln(N / n_i); requires 1 <= n_i <= N.
double tfidf_weight(int64_t f_ik, int64_t n_docs, int64_t n_i);

// Entropy reduction (in bits) of the class labels from conditioning on term
// presence; 0*log0 counts as 0.
double information_gain(const std::vector<uint8_t>& presence,
                        const std::vector<int>& classes);

// Ids of the k terms with the highest information gain over the given
// (training) rows, ties broken toward lower ids; the result is returned in
// ascending id order. Fewer than k terms returns all of them.
std::vector<int32_t> select_top_k(const TermStats& stats,
                                  const std::vector<int>& host_rows,
                                  const std::vector<int>& classes, int k);

// TFIDF weights of the selected terms, sparse by host.
struct SparseTfidf {
    std::vector<HostId> hosts;
    std::vector<int32_t> term_ids;        // ascending
    std::vector<std::string> term_names;
    std::vector<std::vector<std::pair<int32_t, double>>> rows;  // (column, weight)
};

SparseTfidf tfidf_matrix(const TermStats& stats, const std::vector<int32_t>& selected);
FeatureMatrix to_feature_matrix(const SparseTfidf& sparse);

}  // namespace hostqual
