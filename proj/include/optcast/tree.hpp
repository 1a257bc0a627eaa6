#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optcast/dataset.hpp"

namespace optcast {

enum class Criterion { entropy, gini, log_loss };

Criterion criterion_from_name(std::string_view name);
std::string_view criterion_name(Criterion c);

struct ClassCounts {
    std::int64_t n_pos = 0;
    std::int64_t n_neg = 0;

    std::int64_t total() const { return n_pos + n_neg; }
    void add(int lab) { (lab > 0 ? n_pos : n_neg) += 1; }
};

// H = -sum p_i log2 p_i, with 0 log 0 = 0; in [0, 1] for two classes.
double entropy(const ClassCounts& counts);

// 1 - sum p_i^2; in [0, 0.5] for two classes.
double gini(const ClassCounts& counts);

// Node impurity under a criterion; log_loss scores splits identically to
// entropy, so it maps onto it.
double impurity(const ClassCounts& counts, Criterion c);

// Parent impurity minus size-weighted child impurity (entropy based).
double information_gain(const ClassCounts& parent, std::span<const ClassCounts> children);

struct SplitCandidate {
    int feature_index = -1;
    double threshold = 0.0;
    double gain = 0.0;  // impurity decrease under the chosen criterion
    ClassCounts left_counts;
    ClassCounts right_counts;
};

// Scans, per allowed feature, thresholds at midpoints between consecutive
// distinct sorted values, and returns the candidate with the largest
// impurity decrease. Ties go to the lower feature index, then the lower
// threshold. Returns nullopt when the node is pure or no feature separates
// the rows; a zero-gain split on an impure node is still returned.
std::optional<SplitCandidate> best_split(const LabeledDataset& ds, std::span<const int> rows,
                                         std::span<const int> allowed_features, Criterion criterion);

struct TreeHyperparams {
    Criterion criterion = Criterion::entropy;
    int max_depth = 8;
    int min_samples_split = 2;
    double feature_fraction = 1.0;  // fraction of features drawn per node

    void validate() const;
};

struct TreeNode {
    bool is_leaf = true;
    // internal
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    // leaf
    int label = -1;
    std::int64_t n_pos = 0;
    std::int64_t n_neg = 0;
};

class TreeModel {
public:
    TreeModel() = default;
    TreeModel(int n_features, Criterion criterion, std::vector<TreeNode> nodes)
        : n_features_(n_features), criterion_(criterion), nodes_(std::move(nodes)) {}

    int n_features() const { return n_features_; }
    Criterion criterion() const { return criterion_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    // Routes left when x[feature] <= threshold.
    int predict(std::span<const double> x) const;
    int leaf_of(std::span<const double> x) const;

    std::string to_text() const;
    static TreeModel from_text(std::string_view text);

private:
    int n_features_ = 0;
    Criterion criterion_ = Criterion::entropy;
    std::vector<TreeNode> nodes_;
};

// Greedy binary CART growth. Stops at max_depth, below min_samples_split,
// on pure nodes, and when no feature separates the rows. Leaf label is the
// majority class, ties to -1. feature_fraction < 1 draws a fresh feature
// subset per node from the seed.
TreeModel grow_tree(const LabeledDataset& train, const TreeHyperparams& hp, std::uint64_t seed);

}  // namespace optcast
