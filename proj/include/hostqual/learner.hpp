#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hostqual {

using Matrix = std::vector<std::vector<double>>;

struct TreeNode {
    int32_t feature = -1;          // -1 marks a leaf
    double threshold = 0.0;        // x[feature] <= threshold routes left
    int32_t left = -1;
    int32_t right = -1;
    std::vector<int64_t> counts;   // leaf histogram over class indices
    bool is_leaf() const { return feature < 0; }
};

// Binary decision tree grown top-down with the C4.5 gain-ratio criterion.
// Candidate thresholds are midpoints between consecutive distinct feature
// values; only splits whose gain reaches the mean gain of the node's
// candidates compete on gain ratio. Ties go to the lowest feature index,
// then the lowest threshold. Impure nodes keep splitting even when no
// candidate has positive gain (trees are grown out fully). Unpruned.
struct DecisionTree {
    std::vector<TreeNode> nodes;  // root at index 0
    int32_t n_features = 0;

    int depth() const;
};

struct BaggedEnsemble {
    std::vector<DecisionTree> trees;
    std::vector<int> class_set;   // sorted distinct training labels
    int32_t n_features = 0;
    int min_leaf = 2;
    uint64_t seed = 0;
};

// y holds class indices in [0, n_classes). Leaves keep raw counts and carry
// at least min_leaf samples; growth stops on purity, fewer than 2*min_leaf
// samples, or no split with positive gain.
DecisionTree train_tree(const Matrix& X, const std::vector<int>& y, int n_classes,
                        int min_leaf);

// Laplace-smoothed distribution of the routed leaf: (count+1)/(total+k).
std::vector<double> predict_tree(const DecisionTree& t, std::span<const double> x,
                                 size_t n_classes);

// n_trees trees, each grown on a with-replacement bootstrap drawn from a
// per-tree substream of seed. Deterministic given (X, y, n_trees, seed).
BaggedEnsemble train_bagging(const Matrix& X, const std::vector<int>& y, int n_trees,
                             uint64_t seed, int min_leaf = 2);

// Unweighted mean of the per-tree smoothed distributions over class_set.
std::vector<double> predict_posterior(const BaggedEnsemble& e, std::span<const double> x);

// Versioned flat text format with full-precision thresholds; round-trips
// exactly.
std::string serialize_ensemble(const BaggedEnsemble& e);
BaggedEnsemble deserialize_ensemble(const std::string& text);
void save_ensemble(const BaggedEnsemble& e, const std::filesystem::path& path);
BaggedEnsemble load_ensemble(const std::filesystem::path& path);

}  // namespace hostqual
