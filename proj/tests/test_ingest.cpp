#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "zipfstrat/errors.hpp"
#include "zipfstrat/ingest.hpp"

using namespace zipfstrat;

namespace {

PriceSeries parse(const std::string& text, CsvFormat fmt = {}) {
    std::istringstream in(text);
    return parse_csv(in, fmt);
}

std::string error_of(const std::string& text, CsvFormat fmt = {}) {
    try {
        parse(text, fmt);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

Decimal dec(const char* s) { return Decimal::parse(s); }

}  // namespace

TEST(LoadCsv, ParsesTwoRowFile) {
    auto s = parse("date,open,high,low,close\n2008-05-08,2900,2910,2890,2895\n2008-05-09,2890,2915,2880,2910\n");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(format_date(s[0].date), "2008-05-08");
    EXPECT_EQ(s[0].open, dec("2900"));
    EXPECT_EQ(s[0].close, dec("2895"));
    EXPECT_EQ(s[1].close, dec("2910"));
}

TEST(LoadCsv, AcceptsMinimalColumnsAndIgnoresExtras) {
    auto s = parse("Date,Open,Close,Volume\n2008-05-08,2900.25,2895.75,123\n");
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].open, dec("2900.25"));
}

TEST(LoadCsv, CustomColumnNames) {
    CsvFormat fmt;
    fmt.date_column = "session";
    fmt.open_column = "o";
    fmt.close_column = "c";
    auto s = parse("c,o,session\n101,100,2010-01-04\n", fmt);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].open, dec("100"));
    EXPECT_EQ(s[0].close, dec("101"));
}

TEST(LoadCsv, BadCloseNamesTheRow) {
    auto msg = error_of("date,open,close\n2008-05-08,2900,2895\n2008-05-09,2890,abc\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
}

TEST(LoadCsv, OutOfOrderRowsRejectedByDefault) {
    const std::string text = "date,open,close\n2008-05-09,1,2\n2008-05-08,3,4\n";
    auto msg = error_of(text);
    EXPECT_NE(msg.find("out of order"), std::string::npos) << msg;

    CsvFormat sorted;
    sorted.sort_unordered = true;
    auto s = parse(text, sorted);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(format_date(s[0].date), "2008-05-08");
    EXPECT_EQ(s[0].open, dec("3"));
}

TEST(LoadCsv, DuplicateDatesRejectedEvenWhenSorting) {
    const std::string text = "date,open,close\n2008-05-08,1,2\n2008-05-08,3,4\n";
    EXPECT_NE(error_of(text).find("duplicate"), std::string::npos);
    CsvFormat sorted;
    sorted.sort_unordered = true;
    EXPECT_NE(error_of(text, sorted).find("duplicate"), std::string::npos);
}

TEST(LoadCsv, RejectsMissingAndNonPositivePrices) {
    EXPECT_NE(error_of("date,open,close\n2008-05-08,,2\n").find("missing open"), std::string::npos);
    EXPECT_NE(error_of("date,open,close\n2008-05-08,1,0\n").find("non-positive"), std::string::npos);
    EXPECT_NE(error_of("date,open,close\n2008-05-08,-1,2\n").find("non-positive"), std::string::npos);
}

TEST(LoadCsv, RejectsBadDatesHeadersAndShortRows) {
    EXPECT_NE(error_of("date,open,close\n2008-02-30,1,2\n").find("invalid date"), std::string::npos);
    EXPECT_NE(error_of("date,open,close\n08/05/2008,1,2\n").find("invalid date"), std::string::npos);
    EXPECT_NE(error_of("day,open,close\n2008-05-08,1,2\n").find("no column 'date'"), std::string::npos);
    EXPECT_NE(error_of("date,open,close\n2008-05-08,1\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("").find("header"), std::string::npos);
}

TEST(LoadCsv, ToleratesBomCrlfBlankLinesAndQuotes) {
    auto s = parse("\xEF\xBB\xBF\"date\",open,close\r\n\r\n2008-05-08,\"2900.5\",2901\r\n");
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].open, dec("2900.5"));
}

TEST(LoadCsv, MissingFileIsInputError) {
    EXPECT_THROW(load_csv("/nonexistent/prices.csv"), InputError);
}

TEST(LoadCsv, WriteThenLoadRoundTripsBars) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> deltas;
        for (int i = 0; i < 50; ++i) {
            deltas.push_back(static_cast<double>(static_cast<int>(gen() % 4001) - 2000) / 100.0);
        }
        auto series = oracle::bars_from_deltas(deltas);
        std::ostringstream out;
        write_csv(out, series);
        auto back = parse(out.str());
        EXPECT_EQ(back.bars(), series.bars());
        std::ostringstream again;
        write_csv(again, back);
        EXPECT_EQ(again.str(), out.str());
    }
}

TEST(PriceSeries, ValidatesConstructedBars) {
    Date d1 = parse_date("2010-01-04");
    Date d2 = parse_date("2010-01-05");
    EXPECT_THROW(PriceSeries({{d2, dec("1"), dec("1")}, {d1, dec("1"), dec("1")}}), InputError);
    EXPECT_THROW(PriceSeries({{d1, dec("0"), dec("1")}}), InputError);
    EXPECT_NO_THROW(PriceSeries({{d1, dec("1"), dec("2")}, {d2, dec("2"), dec("1")}}));
}

TEST(DaylightIncrements, CloseMinusOpen) {
    auto s = PriceSeries({{parse_date("2010-01-04"), dec("100"), dec("101")},
                          {parse_date("2010-01-05"), dec("102"), dec("101")}});
    auto inc = daylight_increments(s);
    ASSERT_EQ(inc.size(), 2u);
    EXPECT_EQ(inc.values[0], dec("1"));
    EXPECT_EQ(inc.values[1], dec("-1"));
    EXPECT_EQ(inc.dates[1], parse_date("2010-01-05"));
}

TEST(DaylightIncrements, FlatAndSingleBar) {
    auto flat = oracle::bars_from_deltas({0, 0, 0});
    for (auto v : daylight_increments(flat).values) {
        EXPECT_TRUE(v.is_zero());
    }
    auto one = PriceSeries({{parse_date("2010-01-04"), dec("100"), dec("103")}});
    auto inc = daylight_increments(one);
    ASSERT_EQ(inc.size(), 1u);
    EXPECT_EQ(inc.values[0], dec("3"));
}

TEST(CumulativeDaylight, RunningSums) {
    auto run = [](std::vector<int> xs) {
        IncrementSeries inc;
        for (int x : xs) inc.values.push_back(Decimal::from_int(x));
        std::vector<std::string> out;
        for (auto d : cumulative_daylight(inc)) out.push_back(d.to_string());
        return out;
    };
    EXPECT_EQ(run({1, -1}), (std::vector<std::string>{"1", "0"}));
    EXPECT_TRUE(run({}).empty());
    EXPECT_EQ(run({2, 3, -5}), (std::vector<std::string>{"2", "5", "0"}));
}

TEST(CumulativeDaylight, LastValueMatchesIndependentSum) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> deltas;
        for (int i = 0; i < 2600; ++i) {
            deltas.push_back(static_cast<double>(static_cast<int>(gen() % 20001) - 10000) / 100.0);
        }
        auto series = oracle::bars_from_deltas(deltas);
        // Integer sum of raw units, no Decimal arithmetic involved.
        long long expected = 0;
        for (const auto& b : series.bars()) {
            expected += b.close.raw() - b.open.raw();
        }
        auto cum = cumulative_daylight(daylight_increments(series));
        ASSERT_EQ(cum.size(), series.size());
        EXPECT_EQ(cum.back().raw(), expected);
    }
}
