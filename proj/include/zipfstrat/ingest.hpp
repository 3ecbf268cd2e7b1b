#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "zipfstrat/decimal.hpp"

namespace zipfstrat {

using Date = std::chrono::year_month_day;

/// Strict ISO-8601 calendar date, "YYYY-MM-DD".
Date parse_date(std::string_view text);
std::string format_date(Date d);

struct PriceBar {
    Date date;
    Decimal open;
    Decimal close;

    friend bool operator==(const PriceBar&, const PriceBar&) = default;
};

/// Trading sessions in strictly increasing date order. Calendar gaps are
/// not sessions; the i-th bar is simply the i-th session.
class PriceSeries {
public:
    PriceSeries() = default;
    /// Validates positivity and strict date order; throws InputError.
    explicit PriceSeries(std::vector<PriceBar> bars);

    const std::vector<PriceBar>& bars() const { return bars_; }
    std::size_t size() const { return bars_.size(); }
    bool empty() const { return bars_.empty(); }
    const PriceBar& operator[](std::size_t i) const { return bars_[i]; }

private:
    std::vector<PriceBar> bars_;
};

struct CsvFormat {
    std::string date_column = "date";
    std::string open_column = "open";
    std::string close_column = "close";
    char delimiter = ',';
    /// Accept out-of-order rows and sort them; duplicates are still rejected.
    bool sort_unordered = false;
};

PriceSeries load_csv(const std::filesystem::path& path, const CsvFormat& format = {});
PriceSeries parse_csv(std::istream& in, const CsvFormat& format = {});
/// Writes `date,open,close` with the canonical decimal form of each price.
void write_csv(std::ostream& out, const PriceSeries& series);

struct IncrementSeries {
    std::vector<Decimal> values;
    std::vector<Date> dates;

    std::size_t size() const { return values.size(); }
};

/// close - open for every session.
IncrementSeries daylight_increments(const PriceSeries& series);

/// Running sum of the increments: the "day-light" index level.
std::vector<Decimal> cumulative_daylight(const IncrementSeries& increments);

}  // namespace zipfstrat
