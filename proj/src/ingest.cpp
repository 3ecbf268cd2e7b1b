#include "zipfstrat/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "zipfstrat/errors.hpp"

namespace zipfstrat {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Splits one record; double-quoted fields may contain the delimiter.
std::vector<std::string> split_record(std::string_view line, char delimiter) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.emplace_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.emplace_back(trim(current));
    return fields;
}

std::string describe(Date d) { return format_date(d); }

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    auto fail = [&] { return InputError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw fail();
    }
    auto field = [&](std::size_t offset, std::size_t len) {
        int v = 0;
        auto sv = text.substr(offset, len);
        auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (ec != std::errc{} || ptr != sv.data() + sv.size()) {
            throw fail();
        }
        return v;
    };
    Date d{std::chrono::year{field(0, 4)}, std::chrono::month{static_cast<unsigned>(field(5, 2))},
           std::chrono::day{static_cast<unsigned>(field(8, 2))}};
    if (!d.ok()) {
        throw fail();
    }
    return d;
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

PriceSeries::PriceSeries(std::vector<PriceBar> bars) : bars_(std::move(bars)) {
    for (std::size_t i = 0; i < bars_.size(); ++i) {
        const auto& b = bars_[i];
        if (b.open.sign() <= 0 || b.close.sign() <= 0) {
            throw InputError("non-positive price on " + describe(b.date));
        }
        if (i > 0 && !(bars_[i - 1].date < b.date)) {
            throw InputError(bars_[i - 1].date == b.date ? "duplicate date " + describe(b.date)
                                                         : "date out of order: " + describe(b.date) +
                                                               " follows " + describe(bars_[i - 1].date));
        }
    }
}

PriceSeries load_csv(const std::filesystem::path& path, const CsvFormat& format) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    return parse_csv(in, format);
}

PriceSeries parse_csv(std::istream& in, const CsvFormat& format) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (!trim(line).empty()) {
            header = split_record(line, format.delimiter);
        }
    }
    if (header.empty()) {
        throw InputError("empty CSV: missing header row");
    }
    auto column = [&](const std::string& name) {
        auto wanted = lower(name);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (lower(header[i]) == wanted) {
                return i;
            }
        }
        throw InputError("CSV header has no column '" + name + "'");
    };
    const std::size_t date_col = column(format.date_column);
    const std::size_t open_col = column(format.open_column);
    const std::size_t close_col = column(format.close_column);
    const std::size_t needed = std::max({date_col, open_col, close_col}) + 1;

    std::vector<PriceBar> bars;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_record(line, format.delimiter);
        auto where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() < needed) {
            throw InputError(where + "expected at least " + std::to_string(needed) + " fields, got " +
                             std::to_string(fields.size()));
        }
        auto price = [&](std::size_t col, const char* what) {
            if (fields[col].empty()) {
                throw InputError(where + "missing " + what + " price");
            }
            try {
                auto p = Decimal::parse(fields[col]);
                if (p.sign() <= 0) {
                    throw InputError(std::string("non-positive ") + what + " price '" + fields[col] + "'");
                }
                return p;
            } catch (const InputError& e) {
                throw InputError(where + e.what());
            }
        };
        PriceBar bar;
        try {
            bar.date = parse_date(fields[date_col]);
        } catch (const InputError& e) {
            throw InputError(where + e.what());
        }
        bar.open = price(open_col, "open");
        bar.close = price(close_col, "close");
        if (!bars.empty() && !format.sort_unordered) {
            const auto& prev = bars.back().date;
            if (prev == bar.date) {
                throw InputError(where + "duplicate date " + describe(bar.date));
            }
            if (bar.date < prev) {
                throw InputError(where + "date out of order: " + describe(bar.date) + " follows " +
                                 describe(prev));
            }
        }
        bars.push_back(bar);
    }
    if (format.sort_unordered) {
        std::stable_sort(bars.begin(), bars.end(),
                         [](const PriceBar& a, const PriceBar& b) { return a.date < b.date; });
    }
    return PriceSeries(std::move(bars));
}

void write_csv(std::ostream& out, const PriceSeries& series) {
    out << "date,open,close\n";
    for (const auto& b : series.bars()) {
        out << format_date(b.date) << ',' << b.open << ',' << b.close << '\n';
    }
}

IncrementSeries daylight_increments(const PriceSeries& series) {
    IncrementSeries inc;
    inc.values.reserve(series.size());
    inc.dates.reserve(series.size());
    for (const auto& b : series.bars()) {
        inc.values.push_back(b.close - b.open);
        inc.dates.push_back(b.date);
    }
    return inc;
}

std::vector<Decimal> cumulative_daylight(const IncrementSeries& increments) {
    std::vector<Decimal> out;
    out.reserve(increments.size());
    Decimal running;
    for (auto v : increments.values) {
        running += v;
        out.push_back(running);
    }
    return out;
}

}  // namespace zipfstrat
