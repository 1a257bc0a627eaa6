#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optcast/tree.hpp"

namespace optcast {

// N rows drawn with replacement, deterministic per seed.
LabeledDataset bootstrap_sample(const LabeledDataset& train, std::uint64_t seed);

class ForestModel {
public:
    ForestModel() = default;
    ForestModel(std::vector<TreeModel> trees, std::vector<std::uint64_t> seeds, bool bootstrap,
                double feature_fraction)
        : trees_(std::move(trees)), seeds_(std::move(seeds)), bootstrap_(bootstrap),
          feature_fraction_(feature_fraction) {}

    const std::vector<TreeModel>& trees() const { return trees_; }
    const std::vector<std::uint64_t>& seeds() const { return seeds_; }
    bool bootstrap() const { return bootstrap_; }
    double feature_fraction() const { return feature_fraction_; }
    int n_features() const { return trees_.empty() ? 0 : trees_.front().n_features(); }

    // Majority vote over the trees; exact ties resolve to -1.
    int predict(std::span<const double> x) const;

    std::string to_text() const;
    static ForestModel from_text(std::string_view text);

private:
    std::vector<TreeModel> trees_;
    std::vector<std::uint64_t> seeds_;
    bool bootstrap_ = true;
    double feature_fraction_ = 1.0;
};

// Bagging + random subspace over CART trees. Tree k trains on
// bootstrap_sample(train, seed_k) (the raw training set when bootstrap is
// off) with per-node feature subsets of ceil(feature_fraction * d)
// features; seed_k is derived from (seed, k), so results are independent of
// the number of worker threads. tree_hp.feature_fraction <= 0 selects the
// ceil(sqrt(d))/d default.
ForestModel train_forest(const LabeledDataset& train, int n_trees, TreeHyperparams tree_hp,
                         bool bootstrap, std::uint64_t seed, int jobs = 0);

// Weighted-impurity decrease at node i for the routed sample flow:
//   imp(i) = w_i N_i - w_left N_left - w_right N_right
// with w the fraction of routed rows reaching the node and N the impurity
// of the routed rows under the tree's criterion. One value per node id;
// leaves score 0.
std::vector<double> tree_node_importances(const TreeModel& tree, const LabeledDataset& routed);

// Per-feature sum of node importances for a single tree (unnormalized).
std::vector<double> tree_feature_importance(const TreeModel& tree, const LabeledDataset& routed);

struct ImportanceReport {
    std::vector<std::string> feature_names;
    std::vector<double> scores;  // normalized to sum 1 when any score > 0
};

// Per-tree importances averaged over the forest, then normalized.
ImportanceReport feature_importance(const ForestModel& model, const LabeledDataset& train);

}  // namespace optcast
