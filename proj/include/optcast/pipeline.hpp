#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "optcast/boosting.hpp"
#include "optcast/config.hpp"
#include "optcast/evaluation.hpp"
#include "optcast/forest.hpp"
#include "optcast/tree.hpp"

namespace optcast {

enum class ModelFamily { tree, gbm, forest };

ModelFamily family_from_name(std::string_view name);
std::string_view family_name(ModelFamily family);

struct ForestHyperparams {
    int n_trees = 60;
    bool bootstrap = true;
    TreeHyperparams tree;  // tree.feature_fraction <= 0 means ceil(sqrt(d))/d
};

// Bundle of per-family settings; the CLI fills this from config + flags.
struct FamilyHyperparams {
    TreeHyperparams tree;
    BoostHyperparams gbm;
    ForestHyperparams forest;

    FamilyHyperparams() {
        tree.max_depth = 8;
        tree.min_samples_split = 10;
        gbm.stages = 40;
        gbm.learning_rate = 0.2;
        gbm.max_depth = 3;
        gbm.min_samples_split = 10;
        forest.n_trees = 60;
        forest.tree.max_depth = 10;
        forest.tree.min_samples_split = 5;
        forest.tree.feature_fraction = 0.0;  // auto
    }
};

using AnyModel = std::variant<TreeModel, BoostedModel, ForestModel>;

ModelFamily family_of(const AnyModel& model);
int model_n_features(const AnyModel& model);
std::string model_to_text(const AnyModel& model);
AnyModel model_from_text(std::string_view text);  // dispatches on the header line

AnyModel train_family(ModelFamily family, const FamilyHyperparams& hp, const LabeledDataset& train,
                      std::uint64_t seed, int jobs = 0);

std::vector<int> predict_all(const AnyModel& model, const LabeledDataset& ds);

struct EvalOutcome {
    ConfusionMatrix cm;
    MetricReport report;
};

EvalOutcome evaluate_model(const AnyModel& model, const LabeledDataset& ds);

// Overrides `hp` fields by dimension name; names are family-scoped (e.g.
// tree: max_depth, min_samples_split, feature_fraction; gbm: stages,
// learning_rate, max_depth, min_samples_split; forest: n_trees, bootstrap,
// max_depth, min_samples_split, feature_fraction). Unknown names throw.
FamilyHyperparams apply_assignment(ModelFamily family, FamilyHyperparams hp, const Assignment& a);

// Search space for one family from config keys "search.<family>.<dim>".
// Values: "list:v1,v2,..." (or a bare comma list), "int:lo:hi",
// "log:lo:hi".
SearchSpace search_space_from_config(const Config& cfg, ModelFamily family);

// Binds train/validation data into an EvalFn for the searches.
EvalFn make_family_eval(ModelFamily family, const FamilyHyperparams& base, const LabeledDataset& train,
                        const LabeledDataset& validation, std::uint64_t seed, int jobs = 0);

}  // namespace optcast
