#include "hostqual/learner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "hostqual/errors.hpp"
#include "hostqual/tsv.hpp"

namespace hostqual {

namespace {

constexpr double kMinGain = 1e-12;

double entropy_bits(const std::vector<int64_t>& counts, int64_t total) {
    double h = 0.0;
    for (int64_t c : counts) {
        if (c == 0) {
            continue;
        }
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

struct SplitChoice {
    int32_t feature = -1;
    double threshold = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, const std::vector<int>& y, int n_classes, int min_leaf)
        : X_(X), y_(y), n_classes_(n_classes), min_leaf_(min_leaf),
          n_features_(static_cast<int32_t>(X.empty() ? 0 : X[0].size())) {}

    DecisionTree build() {
        DecisionTree tree;
        tree.n_features = n_features_;
        std::vector<int> indices(y_.size());
        std::iota(indices.begin(), indices.end(), 0);
        grow(tree, std::move(indices));
        return tree;
    }

private:
    int32_t grow(DecisionTree& tree, std::vector<int> indices) {
        std::vector<int64_t> counts(n_classes_, 0);
        for (int i : indices) {
            ++counts[y_[i]];
        }
        const int64_t total = static_cast<int64_t>(indices.size());
        const bool pure = std::count(counts.begin(), counts.end(), int64_t{0}) >=
                          static_cast<long>(n_classes_) - 1;

        int32_t id = static_cast<int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (pure || total < 2 * static_cast<int64_t>(min_leaf_)) {
            tree.nodes[id].counts = std::move(counts);
            return id;
        }
        auto choice = best_split(indices, counts);
        if (!choice) {
            tree.nodes[id].counts = std::move(counts);
            return id;
        }

        std::vector<int> left_idx, right_idx;
        left_idx.reserve(indices.size());
        right_idx.reserve(indices.size());
        for (int i : indices) {
            (X_[i][choice->feature] <= choice->threshold ? left_idx : right_idx).push_back(i);
        }
        indices.clear();
        indices.shrink_to_fit();

        tree.nodes[id].feature = choice->feature;
        tree.nodes[id].threshold = choice->threshold;
        int32_t left = grow(tree, std::move(left_idx));
        tree.nodes[id].left = left;
        int32_t right = grow(tree, std::move(right_idx));
        tree.nodes[id].right = right;
        return id;
    }

    // Scans every (feature, midpoint) candidate that leaves min_leaf samples
    // on each side, then picks the best gain ratio among candidates whose
    // gain is at least the mean candidate gain.
    std::optional<SplitChoice> best_split(const std::vector<int>& indices,
                                          const std::vector<int64_t>& node_counts) {
        struct Candidate {
            int32_t feature;
            double threshold;
            double gain;
            double split_info;
        };
        const int64_t total = static_cast<int64_t>(indices.size());
        const double node_entropy = entropy_bits(node_counts, total);

        std::vector<Candidate> candidates;
        std::vector<int> sorted(indices);
        std::vector<int64_t> left_counts(n_classes_);
        for (int32_t f = 0; f < n_features_; ++f) {
            std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
                double va = X_[a][f];
                double vb = X_[b][f];
                if (va != vb) {
                    return va < vb;
                }
                return a < b;
            });
            std::fill(left_counts.begin(), left_counts.end(), 0);
            int64_t n_left = 0;
            for (size_t pos = 0; pos + 1 < sorted.size(); ++pos) {
                ++left_counts[y_[sorted[pos]]];
                ++n_left;
                double v = X_[sorted[pos]][f];
                double v_next = X_[sorted[pos + 1]][f];
                if (v == v_next) {
                    continue;
                }
                int64_t n_right = total - n_left;
                if (n_left < min_leaf_ || n_right < min_leaf_) {
                    continue;
                }
                double h_left = entropy_bits(left_counts, n_left);
                std::vector<int64_t> right_counts(n_classes_);
                for (int c = 0; c < n_classes_; ++c) {
                    right_counts[c] = node_counts[c] - left_counts[c];
                }
                double h_right = entropy_bits(right_counts, n_right);
                double pl = static_cast<double>(n_left) / static_cast<double>(total);
                double pr = static_cast<double>(n_right) / static_cast<double>(total);
                double gain = node_entropy - pl * h_left - pr * h_right;
                double split_info = -pl * std::log2(pl) - pr * std::log2(pr);
                // The midpoint can round up to v_next for adjacent doubles;
                // fall back to v so the partition stays as counted.
                double threshold = (v + v_next) / 2.0;
                if (!(threshold < v_next)) {
                    threshold = v;
                }
                candidates.push_back({f, threshold, gain, split_info});
            }
        }
        if (candidates.empty()) {
            return std::nullopt;
        }
        double mean_gain = 0.0;
        for (const auto& c : candidates) {
            mean_gain += c.gain;
        }
        mean_gain /= static_cast<double>(candidates.size());

        // Candidates are generated in (feature, threshold) order; strict
        // comparison keeps the first of any tie.
        std::optional<SplitChoice> best;
        double best_ratio = -1.0;
        for (const auto& c : candidates) {
            if (c.gain <= kMinGain || c.gain + 1e-12 < mean_gain) {
                continue;
            }
            double ratio = c.gain / c.split_info;
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best = SplitChoice{c.feature, c.threshold};
            }
        }
        if (!best) {
            // Impure node where no candidate improves entropy (XOR-style
            // interactions): grow on anyway so trees are built out fully,
            // taking the first feasible candidate.
            const auto& c = candidates.front();
            best = SplitChoice{c.feature, c.threshold};
        }
        return best;
    }

    const Matrix& X_;
    const std::vector<int>& y_;
    const int n_classes_;
    const int min_leaf_;
    const int32_t n_features_;
};

// Distinct per-tree seed streams from one ensemble seed.
uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

int DecisionTree::depth() const {
    if (nodes.empty()) {
        return 0;
    }
    std::function<int(int32_t)> walk = [&](int32_t id) -> int {
        const TreeNode& node = nodes[id];
        if (node.is_leaf()) {
            return 0;
        }
        return 1 + std::max(walk(node.left), walk(node.right));
    };
    return walk(0);
}

DecisionTree train_tree(const Matrix& X, const std::vector<int>& y, int n_classes,
                        int min_leaf) {
    if (X.empty() || y.empty()) {
        throw DataError("training needs at least one sample");
    }
    if (X.size() != y.size()) {
        throw DataError("feature matrix and labels differ in length");
    }
    if (X[0].empty()) {
        throw DataError("training needs at least one feature");
    }
    if (n_classes < 1) {
        throw DataError("training needs at least one class");
    }
    if (min_leaf < 1) {
        throw ConfigError("min_leaf must be >= 1");
    }
    for (int label : y) {
        if (label < 0 || label >= n_classes) {
            throw DataError("class index " + std::to_string(label) + " outside [0, " +
                            std::to_string(n_classes) + ")");
        }
    }
    return TreeBuilder(X, y, n_classes, min_leaf).build();
}

std::vector<double> predict_tree(const DecisionTree& t, std::span<const double> x,
                                 size_t n_classes) {
    if (t.nodes.empty()) {
        throw DataError("empty tree");
    }
    if (x.size() != static_cast<size_t>(t.n_features)) {
        throw DataError("input has " + std::to_string(x.size()) + " features, tree expects " +
                        std::to_string(t.n_features));
    }
    int32_t id = 0;
    while (!t.nodes[id].is_leaf()) {
        const TreeNode& node = t.nodes[id];
        id = x[node.feature] <= node.threshold ? node.left : node.right;
    }
    const auto& counts = t.nodes[id].counts;
    if (counts.size() != n_classes) {
        throw DataError("leaf histogram size mismatch");
    }
    int64_t total = 0;
    for (int64_t c : counts) {
        total += c;
    }
    std::vector<double> dist(n_classes);
    const double denom = static_cast<double>(total) + static_cast<double>(n_classes);
    for (size_t c = 0; c < n_classes; ++c) {
        dist[c] = (static_cast<double>(counts[c]) + 1.0) / denom;
    }
    return dist;
}

BaggedEnsemble train_bagging(const Matrix& X, const std::vector<int>& y, int n_trees,
                             uint64_t seed, int min_leaf) {
    if (n_trees < 1) {
        throw ConfigError("ensemble needs at least one tree");
    }
    if (X.size() != y.size() || X.empty()) {
        throw DataError("training needs matching, nonempty features and labels");
    }
    BaggedEnsemble ensemble;
    ensemble.class_set = y;
    std::sort(ensemble.class_set.begin(), ensemble.class_set.end());
    ensemble.class_set.erase(
        std::unique(ensemble.class_set.begin(), ensemble.class_set.end()),
        ensemble.class_set.end());
    ensemble.n_features = static_cast<int32_t>(X[0].size());
    ensemble.min_leaf = min_leaf;
    ensemble.seed = seed;

    std::vector<int> y_idx(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        y_idx[i] = static_cast<int>(
            std::lower_bound(ensemble.class_set.begin(), ensemble.class_set.end(), y[i]) -
            ensemble.class_set.begin());
    }
    const int n_classes = static_cast<int>(ensemble.class_set.size());
    const size_t n = X.size();

    ensemble.trees.reserve(n_trees);
    Matrix Xb(n);
    std::vector<int> yb(n);
    for (int t = 0; t < n_trees; ++t) {
        std::mt19937_64 rng(splitmix64(seed + static_cast<uint64_t>(t)));
        for (size_t i = 0; i < n; ++i) {
            size_t pick = static_cast<size_t>(rng() % n);
            Xb[i] = X[pick];
            yb[i] = y_idx[pick];
        }
        ensemble.trees.push_back(train_tree(Xb, yb, n_classes, min_leaf));
    }
    return ensemble;
}

std::vector<double> predict_posterior(const BaggedEnsemble& e, std::span<const double> x) {
    if (e.trees.empty()) {
        throw DataError("empty ensemble");
    }
    if (x.size() != static_cast<size_t>(e.n_features)) {
        throw DataError("input has " + std::to_string(x.size()) + " features, model expects " +
                        std::to_string(e.n_features));
    }
    const size_t k = e.class_set.size();
    std::vector<double> mean(k, 0.0);
    for (const auto& tree : e.trees) {
        std::vector<double> dist = predict_tree(tree, x, k);
        for (size_t c = 0; c < k; ++c) {
            mean[c] += dist[c];
        }
    }
    for (double& v : mean) {
        v /= static_cast<double>(e.trees.size());
    }
    return mean;
}

std::string serialize_ensemble(const BaggedEnsemble& e) {
    std::ostringstream out;
    out << "hostqual-model 1\n";
    out << "classes";
    for (int c : e.class_set) {
        out << ' ' << c;
    }
    out << '\n';
    out << "features " << e.n_features << '\n';
    out << "min_leaf " << e.min_leaf << '\n';
    out << "seed " << e.seed << '\n';
    out << "trees " << e.trees.size() << '\n';
    for (const auto& tree : e.trees) {
        out << "tree " << tree.nodes.size() << '\n';
        for (const auto& node : tree.nodes) {
            if (node.is_leaf()) {
                out << "leaf";
                for (int64_t c : node.counts) {
                    out << ' ' << c;
                }
                out << '\n';
            } else {
                out << "split " << node.feature << ' ' << format_double(node.threshold)
                    << ' ' << node.left << ' ' << node.right << '\n';
            }
        }
    }
    out << "end\n";
    return out.str();
}

namespace {

std::string next_line(std::istringstream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(std::string("model file truncated, expected ") + what);
    }
    return line;
}

}  // namespace

BaggedEnsemble deserialize_ensemble(const std::string& text) {
    std::istringstream in(text);
    std::string line = next_line(in, "header");
    if (line != "hostqual-model 1") {
        throw DataError("unrecognized model header: '" + line + "'");
    }
    BaggedEnsemble e;
    {
        std::istringstream ls(next_line(in, "classes"));
        std::string tag;
        ls >> tag;
        if (tag != "classes") {
            throw DataError("model file: expected classes line");
        }
        int c;
        while (ls >> c) {
            e.class_set.push_back(c);
        }
        if (e.class_set.empty()) {
            throw DataError("model file: empty class set");
        }
    }
    auto read_tagged = [&](const char* tag) -> long long {
        std::istringstream ls(next_line(in, tag));
        std::string got;
        long long value;
        if (!(ls >> got >> value) || got != tag) {
            throw DataError(std::string("model file: expected ") + tag + " line");
        }
        return value;
    };
    e.n_features = static_cast<int32_t>(read_tagged("features"));
    e.min_leaf = static_cast<int>(read_tagged("min_leaf"));
    e.seed = static_cast<uint64_t>(read_tagged("seed"));
    long long n_trees = read_tagged("trees");
    for (long long t = 0; t < n_trees; ++t) {
        long long n_nodes = read_tagged("tree");
        DecisionTree tree;
        tree.n_features = e.n_features;
        tree.nodes.reserve(static_cast<size_t>(n_nodes));
        for (long long i = 0; i < n_nodes; ++i) {
            std::istringstream ls(next_line(in, "node"));
            std::string kind;
            ls >> kind;
            TreeNode node;
            if (kind == "split") {
                if (!(ls >> node.feature >> node.threshold >> node.left >> node.right)) {
                    throw DataError("model file: bad split node");
                }
                if (node.feature < 0 || node.feature >= e.n_features ||
                    node.left < 0 || node.left >= n_nodes ||
                    node.right < 0 || node.right >= n_nodes) {
                    throw DataError("model file: split node references out of range");
                }
            } else if (kind == "leaf") {
                int64_t c;
                while (ls >> c) {
                    node.counts.push_back(c);
                }
                if (node.counts.size() != e.class_set.size()) {
                    throw DataError("model file: leaf histogram size mismatch");
                }
            } else {
                throw DataError("model file: unknown node kind '" + kind + "'");
            }
            tree.nodes.push_back(std::move(node));
        }
        e.trees.push_back(std::move(tree));
    }
    if (next_line(in, "end") != "end") {
        throw DataError("model file: missing end marker");
    }
    return e;
}

void save_ensemble(const BaggedEnsemble& e, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_ensemble(e));
}

BaggedEnsemble load_ensemble(const std::filesystem::path& path) {
    return deserialize_ensemble(read_file(path));
}

}  // namespace hostqual
