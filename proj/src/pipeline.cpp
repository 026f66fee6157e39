#include "hostqual/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "hostqual/errors.hpp"
#include "hostqual/featmat.hpp"
#include "hostqual/hostfeat.hpp"
#include "hostqual/learner.hpp"
#include "hostqual/linkrank.hpp"
#include "hostqual/ndcg.hpp"
#include "hostqual/textfeat.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) {
        return "";
    }
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::filesystem::path resolve(const std::string& value, const std::filesystem::path& base) {
    std::filesystem::path p(value);
    if (p.is_absolute() || base.empty()) {
        return p;
    }
    return base / p;
}

uint64_t parse_seed(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ConfigError("bad seed value '" + s + "'");
    }
    return v;
}

// Task target: either the quality class or one binary facet.
struct TaskSpec {
    bool quality = true;
    bool facet_is_genre = false;
    Genre facet_genre = Genre::Other;
    bool facet_trust = false;
    bool facet_bias = false;
};

TaskSpec parse_task(const std::string& task) {
    TaskSpec spec;
    if (task == "quality") {
        return spec;
    }
    if (task.rfind("facet:", 0) != 0) {
        throw ConfigError("task must be 'quality' or 'facet:<name>', got '" + task + "'");
    }
    spec.quality = false;
    std::string facet = task.substr(6);
    if (facet == "trust") {
        spec.facet_trust = true;
    } else if (facet == "bias") {
        spec.facet_bias = true;
    } else {
        try {
            spec.facet_genre = parse_genre(facet);
        } catch (const DataError&) {
            throw ConfigError("unknown facet '" + facet +
                              "' (expected a genre token, 'trust' or 'bias')");
        }
        spec.facet_is_genre = true;
    }
    return spec;
}

int task_label(const TaskSpec& spec, const FacetLabels& labels) {
    if (spec.quality) {
        return derive_quality_class(labels);
    }
    if (spec.facet_trust) {
        return labels.facts_or_trust ? 1 : 0;
    }
    if (spec.facet_bias) {
        return labels.bias ? 1 : 0;
    }
    return labels.genre == spec.facet_genre ? 1 : 0;
}

template <typename F>
auto stage(const char* name, F&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(std::string(name) + ": " + e.what());
    }
}

}  // namespace

void apply_run_config_entry(RunConfig& cfg, const std::string& key,
                            const std::string& value,
                            const std::filesystem::path& base_dir) {
    auto as_int = [&](int min_value) {
        int64_t v = parse_int(value, "config key '" + key + "'");
        if (v < min_value) {
            throw ConfigError("config key '" + key + "' must be >= " +
                              std::to_string(min_value));
        }
        return static_cast<int>(v);
    };
    auto as_double = [&] { return parse_double(value, "config key '" + key + "'"); };

    if (key == "labels") cfg.labels = resolve(value, base_dir);
    else if (key == "edges") cfg.edges = resolve(value, base_dir);
    else if (key == "termfreq") cfg.termfreq = resolve(value, base_dir);
    else if (key == "docfreq") cfg.docfreq = resolve(value, base_dir);
    else if (key == "domainpr") cfg.domainpr = resolve(value, base_dir);
    else if (key == "lfeat") cfg.lfeat = resolve(value, base_dir);
    else if (key == "cfeat") cfg.cfeat = resolve(value, base_dir);
    else if (key == "train") cfg.train_list = resolve(value, base_dir);
    else if (key == "test") cfg.test_list = resolve(value, base_dir);
    else if (key == "qrels") cfg.qrels = resolve(value, base_dir);
    else if (key == "outdir") cfg.outdir = resolve(value, base_dir);
    else if (key == "fusion") cfg.fusion = value;
    else if (key == "task") cfg.task = value;
    else if (key == "n-trees") cfg.n_trees = as_int(1);
    else if (key == "min-leaf") cfg.min_leaf = as_int(1);
    else if (key == "k") cfg.select_k = as_int(1);
    else if (key == "alpha") cfg.alpha = as_double();
    else if (key == "tol") cfg.tol = as_double();
    else if (key == "max-iters") cfg.max_iters = as_int(1);
    else if (key == "gain") cfg.gain = value;
    else if (key == "cutoff") cfg.cutoff = as_int(0);
    else if (key == "seed") {
        cfg.seed = parse_seed(value);
        cfg.seed_set = true;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    RunConfig cfg;
    std::filesystem::path base = std::filesystem::absolute(path).parent_path();
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') {
            continue;
        }
        size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key=value");
        }
        apply_run_config_entry(cfg, trim(stripped.substr(0, eq)),
                               trim(stripped.substr(eq + 1)), base);
    }
    return cfg;
}

std::vector<HostId> read_host_list(const std::filesystem::path& path) {
    std::vector<HostId> hosts;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        if (f.size() != 1) {
            throw DataError(path.filename().string() + ":" + std::to_string(lineno) +
                            ": expected one host per line");
        }
        hosts.push_back(canonicalize_host(f[0]));
    });
    std::sort(hosts.begin(), hosts.end());
    hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
    return hosts;
}

void write_ranking_tsv(const std::vector<QualityScore>& ranked,
                       const std::filesystem::path& path) {
    std::ostringstream out;
    for (size_t i = 0; i < ranked.size(); ++i) {
        out << (i + 1) << '\t' << ranked[i].host << '\t' << format_double(ranked[i].score)
            << '\n';
    }
    write_file_atomic(path, out.str());
}

std::vector<QualityScore> read_ranking_tsv(const std::filesystem::path& path) {
    std::vector<QualityScore> ranked;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (f.size() != 3) {
            throw DataError(context + ": expected 3 fields, got " + std::to_string(f.size()));
        }
        int64_t rank = parse_int(f[0], context);
        if (rank != static_cast<int64_t>(ranked.size()) + 1) {
            throw DataError(context + ": ranks must be consecutive from 1");
        }
        QualityScore qs;
        try {
            qs.host = canonicalize_host(f[1]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        qs.score = parse_double(f[2], context);
        ranked.push_back(std::move(qs));
    });
    return ranked;
}

void write_posteriors_tsv(const Posteriors& p, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "host";
    for (int c : p.class_values) {
        out << "\tclass" << c;
    }
    out << '\n';
    for (size_t i = 0; i < p.hosts.size(); ++i) {
        out << p.hosts[i];
        for (double v : p.rows[i]) {
            out << '\t' << format_double(v);
        }
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

Posteriors read_posteriors_tsv(const std::filesystem::path& path) {
    Posteriors p;
    bool have_header = false;
    for_each_tsv_row(path, [&](const std::vector<std::string>& f, size_t lineno) {
        std::string context = path.filename().string() + ":" + std::to_string(lineno);
        if (!have_header) {
            if (f.size() < 2 || f[0] != "host") {
                throw DataError(context + ": expected 'host' plus class columns");
            }
            for (size_t i = 1; i < f.size(); ++i) {
                if (f[i].rfind("class", 0) != 0) {
                    throw DataError(context + ": bad class column '" + f[i] + "'");
                }
                p.class_values.push_back(
                    static_cast<int>(parse_int(f[i].substr(5), context)));
            }
            have_header = true;
            return;
        }
        if (f.size() != p.class_values.size() + 1) {
            throw DataError(context + ": expected " +
                            std::to_string(p.class_values.size() + 1) + " fields");
        }
        std::vector<double> row(p.class_values.size());
        for (size_t i = 0; i < row.size(); ++i) {
            row[i] = parse_double(f[i + 1], context);
        }
        p.hosts.push_back(canonicalize_host(f[0]));
        p.rows.push_back(std::move(row));
    });
    if (!have_header) {
        throw DataError(path.string() + ": missing header row");
    }
    return p;
}

double posterior_score(const std::vector<int>& class_values, std::span<const double> p) {
    if (class_values.size() != p.size()) {
        throw DataError("posterior width does not match the class set");
    }
    std::vector<double> dist(kQualityClassCount, 0.0);
    for (size_t i = 0; i < class_values.size(); ++i) {
        int c = class_values[i];
        if (c < 0 || c >= kQualityClassCount) {
            throw DataError("class value " + std::to_string(c) + " outside [0, 9]");
        }
        dist[c] += p[i];
    }
    return expected_quality(dist);
}

void validate_task(const std::string& task) {
    parse_task(task);
}

int task_label_for(const std::string& task, const FacetLabels& labels) {
    return task_label(parse_task(task), labels);
}

std::string RunReport::text() const {
    std::ostringstream out;
    for (const auto& [key, value] : lines) {
        out << key << '=' << value << '\n';
    }
    return out.str();
}

RunReport run_task(const RunConfig& cfg) {
    std::vector<std::filesystem::path> written;
    try {
        FusionSpec spec = FusionSpec::parse(cfg.fusion);
        TaskSpec task = parse_task(cfg.task);
        GainKind gain = parse_gain_kind(cfg.gain);
        if (!cfg.seed_set) {
            throw ConfigError("seed is required for run");
        }
        if (cfg.outdir.empty()) {
            throw ConfigError("outdir is required");
        }
        auto require_path = [](const std::filesystem::path& p, const char* what) {
            if (p.empty()) {
                throw ConfigError(std::string(what) + " path is required");
            }
        };
        require_path(cfg.labels, "labels");
        require_path(cfg.train_list, "train");
        require_path(cfg.test_list, "test");
        require_path(cfg.qrels, "qrels");
        if (spec.uses(Block::H)) require_path(cfg.edges, "edges");
        if (spec.uses(Block::T)) require_path(cfg.termfreq, "termfreq");
        if (spec.uses(Block::L)) require_path(cfg.lfeat, "lfeat");
        if (spec.uses(Block::C)) require_path(cfg.cfeat, "cfeat");

        // --- ingest ---------------------------------------------------
        std::map<HostId, FacetLabels> labels;
        std::vector<HostId> train_hosts, test_hosts;
        std::map<HostId, double> qrels;
        stage("ingest", [&] {
            labels = read_labels_tsv(cfg.labels);
            train_hosts = read_host_list(cfg.train_list);
            test_hosts = read_host_list(cfg.test_list);
            qrels = read_qrels_tsv(cfg.qrels);
            if (train_hosts.empty() || test_hosts.empty()) {
                throw DataError("train and test lists must be nonempty");
            }
            std::vector<HostId> overlap;
            std::set_intersection(train_hosts.begin(), train_hosts.end(),
                                  test_hosts.begin(), test_hosts.end(),
                                  std::back_inserter(overlap));
            if (!overlap.empty()) {
                throw DataError("hosts appear in both train and test lists, e.g. '" +
                                overlap.front() + "'");
            }
            for (const auto& h : train_hosts) {
                if (!labels.count(h)) {
                    throw DataError("training host '" + h + "' has no labels");
                }
            }
            return 0;
        });

        // --- host universe ---------------------------------------------
        std::vector<RawEdge> raw_edges;
        std::vector<HostId> universe;
        stage("graph", [&] {
            if (!cfg.edges.empty()) {
                raw_edges = read_edges_tsv(cfg.edges);
            }
            for (const auto& [host, l] : labels) {
                universe.push_back(host);
            }
            for (const auto& e : raw_edges) {
                universe.push_back(e.src);
                universe.push_back(e.dst);
            }
            universe.insert(universe.end(), train_hosts.begin(), train_hosts.end());
            universe.insert(universe.end(), test_hosts.begin(), test_hosts.end());
            std::sort(universe.begin(), universe.end());
            universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
            return 0;
        });

        RankParams rank_params{cfg.alpha, cfg.tol, cfg.max_iters};
        size_t domain_misses = 0;
        FeatureMatrix block_h;
        if (spec.uses(Block::H)) {
            stage("hostfeat", [&] {
                HostGraph g = build_graph(raw_edges, 1, universe);
                std::map<std::string, double> table;
                if (!cfg.domainpr.empty()) {
                    table = read_domainpr_tsv(cfg.domainpr);
                }
                auto measures = compute_link_measures(g, rank_params, table, &domain_misses);
                block_h = assemble_host_features(g, measures);
                return 0;
            });
        }

        FeatureMatrix block_t;
        stage("textfeat", [&] {
            if (!spec.uses(Block::T)) {
                return 0;
            }
            TermStats stats = build_term_stats(read_termfreq_tsv(cfg.termfreq), universe);
            if (!cfg.docfreq.empty()) {
                apply_doc_freq_overrides(stats, read_docfreq_tsv(cfg.docfreq));
            }
            // Selection sees training hosts only.
            std::vector<int> rows;
            std::vector<int> classes;
            for (const auto& h : train_hosts) {
                auto it = std::lower_bound(stats.hosts.begin(), stats.hosts.end(), h);
                rows.push_back(static_cast<int>(it - stats.hosts.begin()));
                classes.push_back(task_label(task, labels.at(h)));
            }
            auto selected = select_top_k(stats, rows, classes, cfg.select_k);
            block_t = to_feature_matrix(tfidf_matrix(stats, selected));
            return 0;
        });

        FeatureMatrix block_l, block_c;
        stage("blocks", [&] {
            if (spec.uses(Block::L)) {
                block_l = read_feature_tsv(cfg.lfeat);
            }
            if (spec.uses(Block::C)) {
                block_c = read_feature_tsv(cfg.cfeat);
            }
            return 0;
        });

        FeatureMatrix fused = stage("fuse", [&] {
            std::vector<std::pair<Block, const FeatureMatrix*>> blocks;
            if (spec.uses(Block::L)) blocks.emplace_back(Block::L, &block_l);
            if (spec.uses(Block::H)) blocks.emplace_back(Block::H, &block_h);
            if (spec.uses(Block::C)) blocks.emplace_back(Block::C, &block_c);
            if (spec.uses(Block::T)) blocks.emplace_back(Block::T, &block_t);
            return fuse(blocks, spec);
        });

        Matrix x_train, x_test;
        std::vector<int> y_train;
        stage("split", [&] {
            auto row_of = [&](const HostId& h) -> size_t {
                auto it = std::lower_bound(fused.hosts.begin(), fused.hosts.end(), h);
                if (it == fused.hosts.end() || *it != h) {
                    throw DataError("host '" + h + "' missing from the fused matrix");
                }
                return static_cast<size_t>(it - fused.hosts.begin());
            };
            for (const auto& h : train_hosts) {
                x_train.push_back(fused.rows[row_of(h)]);
                y_train.push_back(task_label(task, labels.at(h)));
            }
            for (const auto& h : test_hosts) {
                x_test.push_back(fused.rows[row_of(h)]);
            }
            return 0;
        });

        BaggedEnsemble ensemble = stage("train", [&] {
            return train_bagging(x_train, y_train, cfg.n_trees, cfg.seed, cfg.min_leaf);
        });

        std::vector<QualityScore> ranked = stage("predict", [&] {
            std::vector<QualityScore> scores;
            scores.reserve(test_hosts.size());
            for (size_t i = 0; i < test_hosts.size(); ++i) {
                std::vector<double> p = predict_posterior(ensemble, x_test[i]);
                scores.push_back({test_hosts[i], posterior_score(ensemble.class_set, p)});
            }
            return rank_hosts(std::move(scores));
        });

        double ndcg_value = stage("eval", [&] {
            // Ground truth for this run is the judged portion of the test set.
            std::map<HostId, double> test_qrels;
            for (const auto& h : test_hosts) {
                auto it = qrels.find(h);
                if (it != qrels.end()) {
                    test_qrels.emplace(h, it->second);
                }
            }
            std::vector<HostId> order;
            order.reserve(ranked.size());
            for (const auto& qs : ranked) {
                order.push_back(qs.host);
            }
            auto grades = align_grades(order, test_qrels);
            return ndcg(grades, gain, cfg.cutoff);
        });

        RunReport report;
        report.ndcg_value = ndcg_value;
        auto add = [&](const std::string& k, const std::string& v) {
            report.lines.emplace_back(k, v);
        };
        auto fmt_g = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%g", v);
            return std::string(buf);
        };
        add("task", cfg.task);
        add("fusion", spec.to_string());
        add("n-trees", std::to_string(cfg.n_trees));
        add("min-leaf", std::to_string(cfg.min_leaf));
        add("k", std::to_string(cfg.select_k));
        add("alpha", fmt_g(cfg.alpha));
        add("tol", fmt_g(cfg.tol));
        add("max-iters", std::to_string(cfg.max_iters));
        add("gain", cfg.gain);
        add("cutoff", std::to_string(cfg.cutoff));
        add("seed", std::to_string(cfg.seed));
        add("hosts", std::to_string(universe.size()));
        add("train-hosts", std::to_string(train_hosts.size()));
        add("test-hosts", std::to_string(test_hosts.size()));
        {
            std::string classes;
            for (int c : ensemble.class_set) {
                classes += (classes.empty() ? "" : ",") + std::to_string(c);
            }
            add("classes", classes);
        }
        if (spec.uses(Block::L)) add("block.L", std::to_string(block_l.width()));
        if (spec.uses(Block::H)) add("block.H", std::to_string(block_h.width()));
        if (spec.uses(Block::C)) add("block.C", std::to_string(block_c.width()));
        if (spec.uses(Block::T)) add("block.T", std::to_string(block_t.width()));
        add("features", std::to_string(fused.width()));
        if (spec.uses(Block::H)) {
            add("domainpr-misses", std::to_string(domain_misses));
        }
        {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.10f", ndcg_value);
            add("ndcg", buf);
        }

        stage("write", [&] {
            std::filesystem::create_directories(cfg.outdir);
            std::filesystem::path ranking_path = cfg.outdir / "ranking.tsv";
            write_ranking_tsv(ranked, ranking_path);
            written.push_back(ranking_path);
            std::filesystem::path report_path = cfg.outdir / "report.txt";
            write_file_atomic(report_path, report.text());
            written.push_back(report_path);
            return 0;
        });
        return report;
    } catch (...) {
        // No partial run outputs: whatever this invocation already wrote
        // goes away with the failure.
        for (const auto& p : written) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
        throw;
    }
}

}  // namespace hostqual
