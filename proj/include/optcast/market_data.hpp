#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optcast {

// Calendar day, stored as days since 1970-01-01. Quote streams are daily,
// so day arithmetic is all we need.
struct Date {
    std::int32_t serial = 0;

    static Date parse(std::string_view iso);  // "YYYY-MM-DD"
    std::string to_string() const;
    Date next() const { return Date{serial + 1}; }

    auto operator<=>(const Date&) const = default;
};

// One daily market record for an option and its underlying stock.
struct OptionQuote {
    Date date;
    std::string option_id;
    double stock_bid = 0.0;
    double stock_ask = 0.0;
    double option_bid = 0.0;
    double option_ask = 0.0;
    double implied_vol = 0.0;  // annualized, >= 0

    // Throws std::invalid_argument naming the offending field. `context`
    // is prepended to the message (e.g. "line 17").
    void validate(const std::string& context = {}) const;
};

inline double mid_price(double bid, double ask) { return 0.5 * (bid + ask); }
inline double option_mid(const OptionQuote& q) { return mid_price(q.option_bid, q.option_ask); }
inline double stock_mid(const OptionQuote& q) { return mid_price(q.stock_bid, q.stock_ask); }

// Three consecutive trading days of one option; quotes[2] is "today".
// next_mid carries the following day's option mid when it is known and is
// used only to label the window.
struct OptionWindow {
    std::string option_id;
    std::array<OptionQuote, 3> quotes;
    std::optional<double> next_mid;

    const OptionQuote& today() const { return quotes[2]; }
};

// CSV columns: date,option_id,stock_bid,stock_ask,option_bid,option_ask,implied_vol
std::vector<OptionQuote> parse_quotes(std::string_view csv_text);

// Lenient variant: invalid rows are reported into `errors` (one message per
// row, with line number) instead of aborting the parse.
std::vector<OptionQuote> parse_quotes_lenient(std::string_view csv_text, std::vector<std::string>& errors);

std::string quotes_to_csv(const std::vector<OptionQuote>& quotes);

// Every maximal run of consecutive calendar days per option yields its
// windows: a run of days d-2..d+1 produces a labeled window for day d, and
// a run ending at day d produces one unlabeled (forecast-only) window.
// Input order does not matter; quotes are sorted canonically first.
std::vector<OptionWindow> build_windows(std::vector<OptionQuote> quotes);

// +1 if the next-day mid is above today's mid, otherwise -1 (ties count as
// no gain, hence -1). Throws if the window has no next_mid.
int label(const OptionWindow& window);

// Synthetic quote stream with a planted, learnable signal.
//
// Stock paths are geometric Brownian motion. Option mids are intrinsic
// value plus a per-option time value plus a persistent latent trend whose
// daily drift has magnitude `signal_strength`; with signal_strength = 0 the
// mid is a symmetric random walk and next-day labels are balanced. Spreads
// are a fixed per-option fraction of the mid. Deterministic per seed.
std::vector<OptionQuote> synthesize_quotes(int n_options, int n_days, double signal_strength,
                                           std::uint64_t seed);

}  // namespace optcast
