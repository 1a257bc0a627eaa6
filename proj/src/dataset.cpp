#include "optcast/dataset.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "optcast/rng.hpp"
#include "optcast/qrm.hpp"
#include "optcast/text.hpp"

namespace optcast {

void LabeledDataset::add_row(std::span<const double> features, int lab) {
    if (features.size() != n_features())
        throw std::invalid_argument("add_row: feature length mismatch");
    if (lab != 1 && lab != -1)
        throw std::invalid_argument("add_row: label must be +1 or -1");
    for (double v : features) {
        if (!std::isfinite(v)) throw std::invalid_argument("add_row: non-finite feature value");
        values.push_back(v);
    }
    labels.push_back(lab);
}

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {
        "qrm_forecast", "qrm_relative", "mid_t", "o_b", "o_a", "x_b", "x_a", "sigma", "f_x", "f_o",
    };
    return names;
}

std::vector<double> make_features(const OptionWindow& window, double qrm_forecast) {
    const OptionQuote& q = window.today();
    const double mid = option_mid(q);
    const auto [f_x, f_o] = nondimensionalize(window);
    return {
        qrm_forecast, qrm_forecast / mid - 1.0, mid, q.option_bid, q.option_ask,
        q.stock_bid,  q.stock_ask,              q.implied_vol, f_x, f_o,
    };
}

std::array<LabeledDataset, 3> split_dataset(const LabeledDataset& ds, const SplitFractions& fractions,
                                            std::uint64_t seed, bool temporal) {
    const double sum = fractions.train + fractions.validation + fractions.test;
    if (!(fractions.train > 0.0) || !(fractions.validation > 0.0) || !(fractions.test > 0.0) ||
        std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("split_dataset: fractions must be positive and sum to 1");

    const std::size_t n = ds.n_rows();
    const auto n_val = static_cast<std::size_t>(std::floor(fractions.validation * static_cast<double>(n)));
    const auto n_test = static_cast<std::size_t>(std::floor(fractions.test * static_cast<double>(n)));
    const std::size_t n_train = n - n_val - n_test;  // remainder goes to train

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!temporal) {
        Rng rng(seed);
        rng.shuffle(order);
    }

    std::array<LabeledDataset, 3> parts;
    for (auto& p : parts) p.feature_names = ds.feature_names;
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t part = pos < n_train ? 0 : pos < n_train + n_val ? 1 : 2;
        parts[part].add_row(ds.row(order[pos]), ds.labels[order[pos]]);
    }
    return parts;
}

std::string dataset_to_csv(const LabeledDataset& ds) {
    std::string out;
    for (const auto& name : ds.feature_names) {
        out += name;
        out += ',';
    }
    out += "label\n";
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        for (double v : ds.row(i)) {
            out += format_double(v);
            out += ',';
        }
        out += ds.labels[i] > 0 ? "1" : "-1";
        out += '\n';
    }
    return out;
}

LabeledDataset dataset_from_csv(std::string_view csv_text) {
    LabeledDataset ds;
    bool saw_header = false;
    for_each_line(csv_text, [&](std::string_view line, std::size_t line_no) {
        if (trim(line).empty()) return;
        const auto cells = split(line, ',');
        if (!saw_header) {
            if (cells.size() < 2 || trim(cells.back()) != "label")
                throw std::runtime_error("dataset CSV: last header column must be 'label'");
            for (std::size_t c = 0; c + 1 < cells.size(); ++c)
                ds.feature_names.emplace_back(trim(cells[c]));
            saw_header = true;
            return;
        }
        const std::string context = "line " + std::to_string(line_no);
        if (cells.size() != ds.n_features() + 1)
            throw std::runtime_error(context + ": expected " + std::to_string(ds.n_features() + 1) +
                                     " columns");
        std::vector<double> row;
        row.reserve(ds.n_features());
        for (std::size_t c = 0; c + 1 < cells.size(); ++c)
            row.push_back(parse_double(trim(cells[c]), context));
        const auto lab = parse_int(trim(cells.back()), context);
        if (lab != 1 && lab != -1) throw std::runtime_error(context + ": label must be 1 or -1");
        ds.add_row(row, static_cast<int>(lab));
    });
    if (!saw_header) throw std::runtime_error("dataset CSV: empty file");
    return ds;
}

}  // namespace optcast
