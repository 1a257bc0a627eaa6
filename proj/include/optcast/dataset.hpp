#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "optcast/market_data.hpp"

namespace optcast {

// Feature matrix with {+1,-1} labels, row-major.
struct LabeledDataset {
    std::vector<std::string> feature_names;
    std::vector<double> values;  // n_rows() x n_features
    std::vector<int> labels;

    std::size_t n_features() const { return feature_names.size(); }
    std::size_t n_rows() const { return labels.size(); }

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * n_features(), n_features()};
    }

    void add_row(std::span<const double> features, int lab);
};

// Canonical feature schema: today's market state plus the solver forecast
// in absolute and relative form.
const std::vector<std::string>& feature_names();
std::vector<double> make_features(const OptionWindow& window, double qrm_forecast);

// Assembles one dataset row per labeled window, in (date, option_id) order
// so that temporal splits are contiguous slices. `forecast_of(window)` must
// return the solver forecast for that window.
template <typename ForecastFn>
LabeledDataset build_dataset(const std::vector<OptionWindow>& windows, ForecastFn&& forecast_of);

struct SplitFractions {
    double train = 0.7;
    double validation = 0.15;
    double test = 0.15;
};

// Disjoint partition covering every row. Sizes: floor(frac * n) for the
// validation and test parts, remainder to train. Shuffle is a pure function
// of `seed`; `temporal = true` skips the shuffle and slices rows in order.
std::array<LabeledDataset, 3> split_dataset(const LabeledDataset& ds, const SplitFractions& fractions,
                                            std::uint64_t seed, bool temporal = false);

std::string dataset_to_csv(const LabeledDataset& ds);
LabeledDataset dataset_from_csv(std::string_view csv_text);

// template definition

template <typename ForecastFn>
LabeledDataset build_dataset(const std::vector<OptionWindow>& windows, ForecastFn&& forecast_of) {
    std::vector<const OptionWindow*> labeled;
    labeled.reserve(windows.size());
    for (const auto& w : windows)
        if (w.next_mid.has_value()) labeled.push_back(&w);
    std::sort(labeled.begin(), labeled.end(), [](const OptionWindow* a, const OptionWindow* b) {
        if (a->today().date != b->today().date) return a->today().date < b->today().date;
        return a->option_id < b->option_id;
    });

    LabeledDataset ds;
    ds.feature_names = feature_names();
    for (const OptionWindow* w : labeled) {
        const double forecast = forecast_of(*w);
        ds.add_row(make_features(*w, forecast), label(*w));
    }
    return ds;
}

}  // namespace optcast
