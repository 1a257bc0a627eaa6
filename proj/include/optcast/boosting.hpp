#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optcast/dataset.hpp"

namespace optcast {

// p = e^v / (1 + e^v), evaluated in the non-overflowing branch and clamped
// into the open interval (0, 1).
double sigmoid(double log_odds);

// Mean negative log-likelihood over {0,1} labels; probabilities are clamped
// to [1e-15, 1 - 1e-15] before the logs.
double log_loss(std::span<const int> labels01, std::span<const double> probs);

// Prior log-odds log(n_pos / n_neg), the scalar minimizer of the total
// log-loss; counts are epsilon-clamped so single-class inputs stay finite.
double initial_log_odds(std::span<const int> labels01);

// r_i = y_i - p_i (observed minus predicted), the negative loss gradient.
std::vector<double> pseudo_residuals(std::span<const int> labels01, std::span<const double> probs);

enum class GammaMode {
    newton_leaf,  // per-leaf single Newton step: sum r / sum p(1-p)
    line_search,  // per-stage scalar from a brute-force grid over the stage direction
};

struct BoostHyperparams {
    int stages = 50;              // M; 0 trains the prior alone
    double learning_rate = 0.1;   // nu in (0, 1]
    int max_depth = 3;            // stage tree depth, >= 1
    int min_samples_split = 2;
    GammaMode gamma_mode = GammaMode::newton_leaf;

    void validate() const;
};

// Squared-error regression tree used for the stage fits. Leaves carry the
// additive log-odds step for their region.
struct RegressionNode {
    bool is_leaf = true;
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;        // leaf gamma
    std::int64_t n_rows = 0;
};

class RegressionTree {
public:
    RegressionTree() = default;
    explicit RegressionTree(std::vector<RegressionNode> nodes) : nodes_(std::move(nodes)) {}

    const std::vector<RegressionNode>& nodes() const { return nodes_; }
    std::vector<RegressionNode>& nodes() { return nodes_; }

    int leaf_of(std::span<const double> x) const;
    double value_at(std::span<const double> x) const;

private:
    std::vector<RegressionNode> nodes_;
};

// Fits one stage: a variance-reducing regression tree on the residuals,
// then a per-leaf Newton step for log-loss with the denominator clamped
// away from zero. Probabilities are recovered as y - r.
RegressionTree fit_stage(const LabeledDataset& train, std::span<const double> residuals,
                         const BoostHyperparams& hp);

class BoostedModel {
public:
    BoostedModel() = default;
    BoostedModel(int n_features, double f0, double learning_rate, std::vector<RegressionTree> stages)
        : n_features_(n_features), f0_(f0), learning_rate_(learning_rate), stages_(std::move(stages)) {}

    int n_features() const { return n_features_; }
    double f0() const { return f0_; }
    double learning_rate() const { return learning_rate_; }
    const std::vector<RegressionTree>& stages() const { return stages_; }

    // Accumulated log-odds after the first `n_stages` stages (all of them
    // by default).
    double log_odds(std::span<const double> x) const { return log_odds(x, stages_.size()); }
    double log_odds(std::span<const double> x, std::size_t n_stages) const;

    // (label, probability); p = sigmoid(F_M(x)), label +1 iff p > 0.5.
    std::pair<int, double> predict(std::span<const double> x) const;

    std::string to_text() const;
    static BoostedModel from_text(std::string_view text);

private:
    int n_features_ = 0;
    double f0_ = 0.0;
    double learning_rate_ = 1.0;
    std::vector<RegressionTree> stages_;
};

// Additive log-odds boosting: F_0 is the prior, each stage fits the
// pseudo-residuals of the previous model and moves F by learning_rate times
// its leaf steps. Labels are mapped {+1,-1} -> {1,0} internally. The seed
// is accepted for interface parity; stage fitting is deterministic.
BoostedModel train_boosted(const LabeledDataset& train, const BoostHyperparams& hp, std::uint64_t seed);

}  // namespace optcast
