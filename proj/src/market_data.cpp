#include "optcast/market_data.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "optcast/rng.hpp"
#include "optcast/text.hpp"

namespace optcast {

namespace {

const char* kQuoteHeader = "date,option_id,stock_bid,stock_ask,option_bid,option_ask,implied_vol";

}  // namespace

Date Date::parse(std::string_view iso) {
    int y = 0, m = 0, d = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
        std::sscanf(std::string(iso).c_str(), "%4d-%2d-%2d", &y, &m, &d) != 3)
        throw std::invalid_argument("bad date '" + std::string(iso) + "' (expected YYYY-MM-DD)");
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw std::invalid_argument("bad date '" + std::string(iso) + "'");
    const std::chrono::sys_days days{ymd};
    return Date{static_cast<std::int32_t>(days.time_since_epoch().count())};
}

std::string Date::to_string() const {
    const std::chrono::sys_days days{std::chrono::days{serial}};
    const std::chrono::year_month_day ymd{days};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

void OptionQuote::validate(const std::string& context) const {
    auto fail = [&](const std::string& what) {
        std::string where = context.empty() ? option_id + " " + date.to_string() : context;
        throw std::invalid_argument(where + ": " + what);
    };
    if (option_id.empty()) fail("empty option_id");
    if (!(stock_bid > 0.0)) fail("stock bid must be positive");
    if (!(option_bid > 0.0)) fail("option bid must be positive");
    if (!(stock_bid < stock_ask)) fail("stock bid >= ask");
    if (!(option_bid < option_ask)) fail("option bid >= ask");
    if (!(implied_vol >= 0.0)) fail("implied_vol must be nonnegative");
    if (!std::isfinite(stock_ask) || !std::isfinite(option_ask) || !std::isfinite(implied_vol))
        fail("non-finite value");
}

namespace {

OptionQuote parse_quote_row(std::string_view line, std::size_t line_no) {
    const std::string context = "line " + std::to_string(line_no);
    const auto cells = split(line, ',');
    if (cells.size() != 7)
        throw std::runtime_error(context + ": expected 7 columns, got " + std::to_string(cells.size()));
    OptionQuote q;
    q.date = Date::parse(trim(cells[0]));
    q.option_id = std::string(trim(cells[1]));
    q.stock_bid = parse_double(trim(cells[2]), context);
    q.stock_ask = parse_double(trim(cells[3]), context);
    q.option_bid = parse_double(trim(cells[4]), context);
    q.option_ask = parse_double(trim(cells[5]), context);
    q.implied_vol = parse_double(trim(cells[6]), context);
    q.validate(context);
    return q;
}

template <typename OnError>
std::vector<OptionQuote> parse_quotes_impl(std::string_view csv_text, OnError&& on_error) {
    std::vector<OptionQuote> out;
    bool saw_header = false;
    for_each_line(csv_text, [&](std::string_view line, std::size_t line_no) {
        if (trim(line).empty()) return;
        if (!saw_header) {
            if (trim(line) != kQuoteHeader)
                throw std::runtime_error("quote CSV header mismatch; expected '" + std::string(kQuoteHeader) + "'");
            saw_header = true;
            return;
        }
        try {
            out.push_back(parse_quote_row(line, line_no));
        } catch (const std::exception& e) {
            on_error(e.what());
        }
    });
    if (!saw_header && !trim(csv_text).empty())
        throw std::runtime_error("quote CSV missing header");
    return out;
}

}  // namespace

std::vector<OptionQuote> parse_quotes(std::string_view csv_text) {
    return parse_quotes_impl(csv_text, [](const std::string& msg) -> void {
        throw std::runtime_error(msg);
    });
}

std::vector<OptionQuote> parse_quotes_lenient(std::string_view csv_text, std::vector<std::string>& errors) {
    return parse_quotes_impl(csv_text, [&errors](const std::string& msg) { errors.push_back(msg); });
}

std::string quotes_to_csv(const std::vector<OptionQuote>& quotes) {
    std::string out(kQuoteHeader);
    out += '\n';
    for (const auto& q : quotes) {
        out += q.date.to_string();
        out += ',';
        out += q.option_id;
        out += ',';
        out += format_double(q.stock_bid);
        out += ',';
        out += format_double(q.stock_ask);
        out += ',';
        out += format_double(q.option_bid);
        out += ',';
        out += format_double(q.option_ask);
        out += ',';
        out += format_double(q.implied_vol);
        out += '\n';
    }
    return out;
}

std::vector<OptionWindow> build_windows(std::vector<OptionQuote> quotes) {
    std::sort(quotes.begin(), quotes.end(), [](const OptionQuote& a, const OptionQuote& b) {
        if (a.option_id != b.option_id) return a.option_id < b.option_id;
        return a.date < b.date;
    });

    std::vector<OptionWindow> windows;
    std::size_t run_start = 0;
    auto flush_run = [&](std::size_t begin, std::size_t end) {
        // run = maximal streak of consecutive calendar days for one option
        const std::size_t len = end - begin;
        if (len < 3) return;
        for (std::size_t k = begin; k + 2 < end; ++k) {
            OptionWindow w;
            w.option_id = quotes[k].option_id;
            w.quotes = {quotes[k], quotes[k + 1], quotes[k + 2]};
            if (k + 3 < end) w.next_mid = option_mid(quotes[k + 3]);
            windows.push_back(std::move(w));
        }
    };
    for (std::size_t i = 1; i <= quotes.size(); ++i) {
        const bool run_breaks = i == quotes.size() || quotes[i].option_id != quotes[i - 1].option_id ||
                                quotes[i].date != quotes[i - 1].date.next();
        if (run_breaks) {
            flush_run(run_start, i);
            run_start = i;
        }
    }
    return windows;
}

int label(const OptionWindow& window) {
    if (!window.next_mid.has_value())
        throw std::invalid_argument("label: window has no next-day mid");
    return *window.next_mid > option_mid(window.today()) ? +1 : -1;
}

std::vector<OptionQuote> synthesize_quotes(int n_options, int n_days, double signal_strength,
                                           std::uint64_t seed) {
    if (n_options < 1 || n_days < 1)
        throw std::invalid_argument("synthesize_quotes: n_options and n_days must be >= 1");
    if (!(signal_strength >= 0.0))
        throw std::invalid_argument("synthesize_quotes: signal_strength must be >= 0");

    const Date start = Date::parse("2020-01-02");
    std::vector<OptionQuote> out;
    out.reserve(static_cast<std::size_t>(n_options) * n_days);

    char id_buf[24];
    for (int k = 0; k < n_options; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        std::snprintf(id_buf, sizeof(id_buf), "OPT%06d", k);

        const double s0 = rng.uniform(50.0, 150.0);
        const double stock_vol = rng.uniform(0.15, 0.45);       // per sqrt(year)
        const double daily_vol = stock_vol / std::sqrt(252.0);  // log-increment sd
        const double strike = s0 * rng.uniform(1.0, 1.25);      // mostly out of the money
        const double time_value = rng.uniform(1.5, 3.0);
        const double option_noise = 0.05;
        const double stock_spread = rng.uniform(0.002, 0.01);   // relative half-spread
        const double option_spread = rng.uniform(0.02, 0.08);
        const double implied_vol = rng.uniform(0.15, 0.45);

        double stock = s0;
        double trend = rng.normal();  // latent AR(1) state
        double extra = 0.0;           // cumulative non-intrinsic drift
        for (int d = 0; d < n_days; ++d) {
            const double mid_raw = std::max(stock - strike, 0.0) + time_value + extra;
            const double mid = std::max(mid_raw, 0.05);
            OptionQuote q;
            q.date = Date{start.serial + d};
            q.option_id = id_buf;
            q.stock_bid = stock * (1.0 - stock_spread);
            q.stock_ask = stock * (1.0 + stock_spread);
            q.option_bid = mid * (1.0 - option_spread);
            q.option_ask = mid * (1.0 + option_spread);
            q.implied_vol = implied_vol;
            q.validate();
            out.push_back(std::move(q));

            stock *= std::exp(daily_vol * rng.normal());
            trend = 0.9 * trend + std::sqrt(1.0 - 0.9 * 0.9) * rng.normal();
            extra += signal_strength * trend + option_noise * rng.normal();
        }
    }
    return out;
}

}  // namespace optcast
