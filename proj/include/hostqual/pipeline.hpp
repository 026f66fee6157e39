#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hostqual/corpus.hpp"
#include "hostqual/quality.hpp"

namespace hostqual {

// End-to-end run settings. Paths left empty are treated as absent; which
// ones are required depends on the fusion spec and task.
struct RunConfig {
    std::filesystem::path labels;
    std::filesystem::path edges;
    std::filesystem::path termfreq;
    std::filesystem::path docfreq;
    std::filesystem::path domainpr;
    std::filesystem::path lfeat;
    std::filesystem::path cfeat;
    std::filesystem::path train_list;
    std::filesystem::path test_list;
    std::filesystem::path qrels;
    std::filesystem::path outdir;

    std::string fusion = "LHCT";
    std::string task = "quality";  // or facet:<genre|trust|bias>
    int n_trees = 90;
    int min_leaf = 2;
    int select_k = 500;
    double alpha = 0.85;
    double tol = 1e-9;
    int max_iters = 200;
    std::string gain = "exp";
    int cutoff = 0;
    uint64_t seed = 0;
    bool seed_set = false;
};

// Flat key=value file; keys match the CLI flag names. Relative paths are
// resolved against the config file's directory.
RunConfig load_run_config(const std::filesystem::path& path);
// Applies one entry; throws ConfigError on unknown keys or bad values.
void apply_run_config_entry(RunConfig& cfg, const std::string& key,
                            const std::string& value,
                            const std::filesystem::path& base_dir);

// One canonical host per line, '#' comments allowed; deduplicated, sorted.
std::vector<HostId> read_host_list(const std::filesystem::path& path);

// rank<TAB>host<TAB>score
void write_ranking_tsv(const std::vector<QualityScore>& ranked,
                       const std::filesystem::path& path);
std::vector<QualityScore> read_ranking_tsv(const std::filesystem::path& path);

// host + per-class posterior columns, one column per observed class value.
struct Posteriors {
    std::vector<HostId> hosts;
    std::vector<int> class_values;
    std::vector<std::vector<double>> rows;
};
void write_posteriors_tsv(const Posteriors& p, const std::filesystem::path& path);
Posteriors read_posteriors_tsv(const std::filesystem::path& path);

// Expands a posterior over observed class values into the 10-slot class
// distribution and takes its expectation (facet tasks, with classes {0,1},
// degenerate to the positive-class posterior).
double posterior_score(const std::vector<int>& class_values, std::span<const double> p);

// Throws ConfigError unless task is "quality" or a known "facet:<name>".
void validate_task(const std::string& task);
// Training target under the task: the derived quality class, or 0/1 for a
// facet.
int task_label_for(const std::string& task, const FacetLabels& labels);

struct RunReport {
    std::vector<std::pair<std::string, std::string>> lines;  // ordered key=value
    double ndcg_value = 0.0;
    std::string text() const;
};

// Ingest, feature assembly, fusion, training, prediction, ranking and NDCG
// in one pass; writes ranking.tsv and report.txt into cfg.outdir. Stage
// failures carry the stage name and leave no partial outputs behind.
RunReport run_task(const RunConfig& cfg);

}  // namespace hostqual
