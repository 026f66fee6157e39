// Command-line front end: corpus ingestion, feature extraction, training,
// ranking and NDCG evaluation, plus the synthetic-corpus generator.

#include <algorithm>
#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hostqual/errors.hpp"
#include "hostqual/featmat.hpp"
#include "hostqual/hostfeat.hpp"
#include "hostqual/learner.hpp"
#include "hostqual/linkrank.hpp"
#include "hostqual/ndcg.hpp"
#include "hostqual/pipeline.hpp"
#include "hostqual/quality.hpp"
#include "hostqual/synth.hpp"
#include "hostqual/textfeat.hpp"
#include "hostqual/tsv.hpp"

namespace hq = hostqual;

namespace {

struct IngestArgs {
    std::string labels, out;
};

void run_ingest(const IngestArgs& a) {
    auto labels = hq::read_labels_tsv(a.labels);
    std::ostringstream out;
    for (const auto& [host, l] : labels) {
        out << host << '\t' << hq::genre_token(l.genre) << '\t' << (l.facts_or_trust ? 1 : 0)
            << '\t' << (l.bias ? 1 : 0) << '\t' << hq::derive_quality_class(l) << '\n';
    }
    hq::write_file_atomic(a.out, out.str());
    std::cout << "hosts=" << labels.size() << '\n';
}

struct GraphFeatArgs {
    std::string edges, out, hosts, domainpr;
    double alpha = 0.85;
    double tol = 1e-9;
    int max_iters = 200;
    int64_t min_count = 1;
};

void run_graphfeat(const GraphFeatArgs& a) {
    auto raw = hq::read_edges_tsv(a.edges);
    std::vector<hq::HostId> extra;
    if (!a.hosts.empty()) {
        extra = hq::read_host_list(a.hosts);
    }
    hq::HostGraph g = hq::build_graph(raw, a.min_count, extra);
    std::map<std::string, double> table;
    if (!a.domainpr.empty()) {
        table = hq::read_domainpr_tsv(a.domainpr);
    }
    size_t misses = 0;
    auto measures = hq::compute_link_measures(g, {a.alpha, a.tol, a.max_iters}, table, &misses);
    hq::FeatureMatrix feats = hq::assemble_host_features(g, measures);
    hq::write_feature_tsv(feats, a.out);
    std::cout << "hosts=" << feats.hosts.size() << " features=" << feats.width()
              << " domainpr-misses=" << misses << '\n';
}

struct TextFeatArgs {
    std::string termfreq, labels, train, out, docfreq;
    std::string task = "quality";
    int k = 500;
};

void run_textfeat(const TextFeatArgs& a) {
    hq::validate_task(a.task);
    auto triples = hq::read_termfreq_tsv(a.termfreq);
    auto labels = hq::read_labels_tsv(a.labels);
    auto train = hq::read_host_list(a.train);

    std::vector<hq::HostId> universe;
    for (const auto& t : triples) {
        universe.push_back(t.host);
    }
    for (const auto& [host, l] : labels) {
        universe.push_back(host);
    }
    universe.insert(universe.end(), train.begin(), train.end());
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

    hq::TermStats stats = hq::build_term_stats(triples, universe);
    size_t unknown = 0;
    if (!a.docfreq.empty()) {
        unknown = hq::apply_doc_freq_overrides(stats, hq::read_docfreq_tsv(a.docfreq));
    }
    std::vector<int> rows, classes;
    for (const auto& h : train) {
        auto it = std::lower_bound(stats.hosts.begin(), stats.hosts.end(), h);
        rows.push_back(static_cast<int>(it - stats.hosts.begin()));
        auto lab = labels.find(h);
        if (lab == labels.end()) {
            throw hq::DataError("training host '" + h + "' has no labels");
        }
        classes.push_back(hq::task_label_for(a.task, lab->second));
    }
    auto selected = hq::select_top_k(stats, rows, classes, a.k);
    hq::FeatureMatrix m = hq::to_feature_matrix(hq::tfidf_matrix(stats, selected));
    hq::write_feature_tsv(m, a.out);
    std::cout << "hosts=" << m.hosts.size() << " terms=" << stats.terms.size()
              << " selected=" << m.width();
    if (unknown > 0) {
        std::cout << " docfreq-unknown-terms=" << unknown;
    }
    std::cout << '\n';
}

struct TrainArgs {
    std::string features, labels, train, out;
    std::string task = "quality";
    int n_trees = 90;
    int min_leaf = 2;
    uint64_t seed = 0;
};

void run_train(const TrainArgs& a) {
    hq::validate_task(a.task);
    hq::FeatureMatrix feats = hq::read_feature_tsv(a.features);
    auto labels = hq::read_labels_tsv(a.labels);
    auto train = hq::read_host_list(a.train);

    hq::Matrix x;
    std::vector<int> y;
    for (const auto& h : train) {
        auto it = std::lower_bound(feats.hosts.begin(), feats.hosts.end(), h);
        if (it == feats.hosts.end() || *it != h) {
            throw hq::DataError("training host '" + h + "' has no feature row");
        }
        auto lab = labels.find(h);
        if (lab == labels.end()) {
            throw hq::DataError("training host '" + h + "' has no labels");
        }
        x.push_back(feats.rows[it - feats.hosts.begin()]);
        y.push_back(hq::task_label_for(a.task, lab->second));
    }
    hq::BaggedEnsemble e = hq::train_bagging(x, y, a.n_trees, a.seed, a.min_leaf);
    hq::save_ensemble(e, a.out);
    std::cout << "trained trees=" << e.trees.size() << " classes=" << e.class_set.size()
              << " features=" << e.n_features << '\n';
}

struct PredictArgs {
    std::string model, features, out, hosts;
};

void run_predict(const PredictArgs& a) {
    hq::BaggedEnsemble e = hq::load_ensemble(a.model);
    hq::FeatureMatrix feats = hq::read_feature_tsv(a.features);
    std::vector<hq::HostId> targets =
        a.hosts.empty() ? feats.hosts : hq::read_host_list(a.hosts);

    hq::Posteriors p;
    p.class_values = e.class_set;
    for (const auto& h : targets) {
        auto it = std::lower_bound(feats.hosts.begin(), feats.hosts.end(), h);
        if (it == feats.hosts.end() || *it != h) {
            throw hq::DataError("host '" + h + "' has no feature row");
        }
        p.hosts.push_back(h);
        p.rows.push_back(hq::predict_posterior(e, feats.rows[it - feats.hosts.begin()]));
    }
    hq::write_posteriors_tsv(p, a.out);
    std::cout << "hosts=" << p.hosts.size() << '\n';
}

struct RankArgs {
    std::string posteriors, out;
};

void run_rank(const RankArgs& a) {
    hq::Posteriors p = hq::read_posteriors_tsv(a.posteriors);
    std::vector<hq::QualityScore> scores;
    scores.reserve(p.hosts.size());
    for (size_t i = 0; i < p.hosts.size(); ++i) {
        scores.push_back({p.hosts[i], hq::posterior_score(p.class_values, p.rows[i])});
    }
    auto ranked = hq::rank_hosts(std::move(scores));
    hq::write_ranking_tsv(ranked, a.out);
    std::cout << "hosts=" << ranked.size() << '\n';
}

struct EvalArgs {
    std::string ranking, qrels;
    std::string gain = "exp";
    int cutoff = 0;
};

void run_eval(const EvalArgs& a) {
    auto ranked = hq::read_ranking_tsv(a.ranking);
    auto qrels = hq::read_qrels_tsv(a.qrels);
    std::vector<hq::HostId> order;
    order.reserve(ranked.size());
    for (const auto& qs : ranked) {
        order.push_back(qs.host);
    }
    auto grades = hq::align_grades(order, qrels);
    double value = hq::ndcg(grades, hq::parse_gain_kind(a.gain), a.cutoff);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10f", value);
    std::cout << "ndcg=" << buf << '\n';
}

struct GenSynthArgs {
    std::string out;
    int n = 200;
    double signal = 1.0;
    uint64_t seed = 0;
};

void run_gen_synth(const GenSynthArgs& a) {
    hq::gen_synthetic({a.n, a.signal, a.seed}, a.out);
    std::cout << "wrote synthetic corpus to " << a.out << '\n';
}

// `run` merges defaults, the config file, and command-line overrides, in
// that order.
struct RunArgs {
    std::string config;
    std::vector<std::pair<std::string, std::string>> overrides;
};

void run_run(const RunArgs& a) {
    hq::RunConfig cfg;
    if (!a.config.empty()) {
        cfg = hq::load_run_config(a.config);
    }
    for (const auto& [key, value] : a.overrides) {
        hq::apply_run_config_entry(cfg, key, value, "");
    }
    auto start = std::chrono::steady_clock::now();
    hq::RunReport report = hq::run_task(cfg);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    // Timing stays out of the report file so identical runs stay
    // byte-identical.
    std::cerr << "elapsed-ms=" << elapsed.count() << '\n';
    std::cout << report.text();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Web host quality ranking pipeline"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* sub_ingest = app.add_subcommand("ingest", "Canonicalize and merge labeled hosts");
    sub_ingest->add_option("--labels", ingest.labels, "labels.tsv")->required();
    sub_ingest->add_option("--out", ingest.out, "merged labels + quality class")->required();

    GraphFeatArgs graphfeat;
    auto* sub_graphfeat =
        app.add_subcommand("graphfeat", "Host-level link features (50 columns)");
    sub_graphfeat->add_option("--edges", graphfeat.edges, "edges.tsv")->required();
    sub_graphfeat->add_option("--out", graphfeat.out, "output feature tsv")->required();
    sub_graphfeat->add_option("--hosts", graphfeat.hosts, "extra host list");
    sub_graphfeat->add_option("--domainpr", graphfeat.domainpr, "domainpr.tsv");
    sub_graphfeat->add_option("--alpha", graphfeat.alpha, "damping factor");
    sub_graphfeat->add_option("--tol", graphfeat.tol, "L1 tolerance");
    sub_graphfeat->add_option("--max-iters", graphfeat.max_iters, "iteration cap");
    sub_graphfeat->add_option("--min-count", graphfeat.min_count, "edge count threshold");

    TextFeatArgs textfeat;
    auto* sub_textfeat = app.add_subcommand("textfeat", "TFIDF features with IG selection");
    sub_textfeat->add_option("--termfreq", textfeat.termfreq, "termfreq.tsv")->required();
    sub_textfeat->add_option("--labels", textfeat.labels, "labels.tsv")->required();
    sub_textfeat->add_option("--train", textfeat.train, "training host list")->required();
    sub_textfeat->add_option("--out", textfeat.out, "output feature tsv")->required();
    sub_textfeat->add_option("--docfreq", textfeat.docfreq, "docfreq.tsv override");
    sub_textfeat->add_option("--task", textfeat.task, "quality or facet:<name>");
    sub_textfeat->add_option("--k", textfeat.k, "terms to keep");

    TrainArgs train;
    auto* sub_train = app.add_subcommand("train", "Train the bagged tree ensemble");
    sub_train->add_option("--features", train.features, "feature tsv")->required();
    sub_train->add_option("--labels", train.labels, "labels.tsv")->required();
    sub_train->add_option("--train", train.train, "training host list")->required();
    sub_train->add_option("--out", train.out, "model file")->required();
    sub_train->add_option("--task", train.task, "quality or facet:<name>");
    sub_train->add_option("--n-trees", train.n_trees, "bagging iterations");
    sub_train->add_option("--min-leaf", train.min_leaf, "minimum leaf size");
    sub_train->add_option("--seed", train.seed, "RNG seed")->required();

    PredictArgs predict;
    auto* sub_predict = app.add_subcommand("predict", "Per-class posterior probabilities");
    sub_predict->add_option("--model", predict.model, "model file")->required();
    sub_predict->add_option("--features", predict.features, "feature tsv")->required();
    sub_predict->add_option("--out", predict.out, "posteriors tsv")->required();
    sub_predict->add_option("--hosts", predict.hosts, "host list (default: all rows)");

    RankArgs rank;
    auto* sub_rank = app.add_subcommand("rank", "Expected-quality ranking from posteriors");
    sub_rank->add_option("--posteriors", rank.posteriors, "posteriors tsv")->required();
    sub_rank->add_option("--out", rank.out, "ranking tsv")->required();

    EvalArgs eval;
    auto* sub_eval = app.add_subcommand("eval", "NDCG of a ranking against qrels");
    sub_eval->add_option("--ranking", eval.ranking, "ranking tsv")->required();
    sub_eval->add_option("--qrels", eval.qrels, "qrels tsv")->required();
    sub_eval->add_option("--gain", eval.gain, "exp or linear");
    sub_eval->add_option("--cutoff", eval.cutoff, "rank cutoff (0 = none)");

    GenSynthArgs gensynth;
    auto* sub_gensynth = app.add_subcommand("gen-synth", "Synthetic corpus generator");
    sub_gensynth->add_option("--out", gensynth.out, "output directory")->required();
    sub_gensynth->add_option("--n", gensynth.n, "number of hosts");
    sub_gensynth->add_option("--signal", gensynth.signal, "class signal strength in [0,1]");
    sub_gensynth->add_option("--seed", gensynth.seed, "RNG seed")->required();

    RunArgs run;
    auto* sub_run = app.add_subcommand("run", "End-to-end pipeline");
    sub_run->add_option("--config", run.config, "key=value config file");
    static const char* kRunKeys[] = {
        "labels", "edges", "termfreq", "docfreq", "domainpr", "lfeat", "cfeat",
        "train", "test", "qrels", "outdir", "fusion", "task", "n-trees",
        "min-leaf", "k", "alpha", "tol", "max-iters", "gain", "cutoff", "seed",
    };
    for (const char* key : kRunKeys) {
        sub_run
            ->add_option_function<std::string>(
                std::string("--") + key,
                [&run, key](const std::string& value) {
                    run.overrides.emplace_back(key, value);
                },
                std::string("override config key ") + key)
            ->type_name("VALUE");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*sub_ingest) run_ingest(ingest);
        else if (*sub_graphfeat) run_graphfeat(graphfeat);
        else if (*sub_textfeat) run_textfeat(textfeat);
        else if (*sub_train) run_train(train);
        else if (*sub_predict) run_predict(predict);
        else if (*sub_rank) run_rank(rank);
        else if (*sub_eval) run_eval(eval);
        else if (*sub_gensynth) run_gen_synth(gensynth);
        else if (*sub_run) run_run(run);
    } catch (const hq::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const hq::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
