#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace optcast {

// 2x2 counts; +1 is the "increase" class for both axes.
struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> truths);

// Metrics with zero denominators stay unset rather than collapsing to 0;
// a silent 0 would corrupt search rankings.
struct MetricReport {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
};

MetricReport metrics(const ConfusionMatrix& cm);

// One search dimension: either an explicit value list (grid cells) or a
// sampling distribution for random search.
struct SearchDim {
    enum class Kind { values, uniform_int, log_uniform };
    std::string name;
    Kind kind = Kind::values;
    std::vector<double> values;  // Kind::values
    double lo = 0.0;             // distribution bounds otherwise
    double hi = 0.0;
};

struct SearchSpace {
    std::vector<SearchDim> dims;
};

using Assignment = std::vector<std::pair<std::string, double>>;

struct SearchTraceRow {
    Assignment assignment;
    MetricReport report;
};

struct SearchResult {
    Assignment best;
    MetricReport best_report;
    std::vector<SearchTraceRow> trace;
};

// Trains/evaluates one hyperparameter assignment and reports validation
// metrics; selection maximizes accuracy.
using EvalFn = std::function<MetricReport(const Assignment&)>;

// Cartesian enumeration in lexicographic order (first dimension outermost);
// every dimension must be an explicit value list. First-encountered wins
// ties.
SearchResult grid_search(const SearchSpace& space, const EvalFn& eval);

// n_samples independent draws, deterministic per seed; same selection rule
// as grid_search.
SearchResult random_search(const SearchSpace& space, int n_samples, const EvalFn& eval,
                           std::uint64_t seed);

// CSV helpers for the report/trace interfaces. Undefined metrics print as
// "NA".
std::string metric_csv_row(const std::string& model, const MetricReport& report,
                           const ConfusionMatrix& cm);
inline const char* kMetricCsvHeader = "model,accuracy,precision,recall,tp,fp,fn,tn";
std::string trace_to_csv(const SearchSpace& space, std::span<const SearchTraceRow> rows);

}  // namespace optcast
