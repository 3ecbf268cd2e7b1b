#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zipfstrat/symbolic.hpp"

namespace zipfstrat {

enum class CountingMode {
    /// Non-overlapping m-letter blocks, aligned so the last block ends on
    /// the last letter; up to m-1 leading letters are discarded.
    block,
    /// Every length-m substring.
    sliding,
};

struct WordCounting {
    std::size_t m = 4;
    CountingMode mode = CountingMode::block;
    /// Letters taken from the end of the text; 0 means the whole text.
    std::size_t window = 0;
};

struct RankEntry {
    std::string word;
    std::uint64_t count = 0;
    double frequency = 0.0;
    std::size_t rank = 0;

    friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

/// Words sorted by count descending, ties broken by ascending word, ranked
/// 1..n. Only observed words appear.
struct RankTable {
    std::vector<RankEntry> entries;
    std::uint64_t total_words = 0;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    /// Rank of `word`, or nullopt if it was not observed.
    std::optional<std::size_t> rank_of(std::string_view word) const;

    /// Builds the ordered table from raw (word, count) pairs; zero counts
    /// are skipped, repeated words are merged.
    static RankTable from_counts(std::vector<std::pair<std::string, std::uint64_t>> counts);

    friend bool operator==(const RankTable&, const RankTable&) = default;
};

RankTable count_words(std::string_view window, std::size_t m, CountingMode mode);
RankTable count_words(const SymbolSequence& text, const WordCounting& counting);

struct FitOptions {
    /// Inclusive rank range used by the regression; max_rank 0 = no limit.
    std::size_t min_rank = 1;
    std::size_t max_rank = 0;
    /// Regress log(count) instead of log(frequency). Only the intercept
    /// changes.
    bool raw_counts = false;
};

struct ZipfFit {
    /// max(0, -raw_slope).
    double zeta = 0.0;
    double raw_slope = 0.0;
    /// Fitted log value (frequency or count) at rank 1, natural log.
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    /// True when the raw slope was positive and zeta was clamped to 0.
    bool clamped = false;
};

/// Ordinary least squares of log(value) on log(rank). Needs at least two
/// distinct ranks, otherwise DegenerateError. Values must be positive.
ZipfFit fit_power_law(std::span<const double> ranks, std::span<const double> values);

ZipfFit fit_zipf(const RankTable& table, const FitOptions& options = {});
/// As fit_zipf, but a degenerate table gives nullopt instead of throwing.
std::optional<ZipfFit> try_fit_zipf(const RankTable& table, const FitOptions& options = {});

struct FitPair {
    RankTable real_table;
    RankTable shuffled_table;
    ZipfFit real;
    ZipfFit shuffled;
};

/// Fits the window as-is and after a seeded letter shuffle, with identical
/// counting. Throws DegenerateError if either table is degenerate.
FitPair fit_pair(const SymbolSequence& text, const WordCounting& counting, std::uint64_t seed,
                 const FitOptions& options = {});

/// |2H - 1|; H must lie in [0, 1].
double zeta_from_hurst(double h);

/// Seed for the shuffle of the window ending (exclusive) at `window_end`.
constexpr std::uint64_t position_seed(std::uint64_t seed, std::size_t window_end) {
    return seed ^ static_cast<std::uint64_t>(window_end);
}

/// Fits of one end-anchored window; nullopt marks a degenerate table.
struct LocalFit {
    /// One past the last letter of the window.
    std::size_t window_end = 0;
    std::optional<ZipfFit> real;
    std::optional<ZipfFit> shuffled;
};

/// Every window of length w stepping one letter at a time, earliest first.
std::vector<LocalFit> local_fits(std::string_view text, std::size_t m, std::size_t w, CountingMode mode,
                                 std::uint64_t seed, const FitOptions& options = {}, std::size_t threads = 0);

struct ZetaSweepRow {
    std::size_t w = 0;
    std::size_t positions = 0;
    std::size_t degenerate_real = 0;
    std::size_t degenerate_shuffled = 0;
    /// Mean and population standard deviation over non-degenerate windows;
    /// nullopt when every window was degenerate.
    std::optional<double> mean_real;
    std::optional<double> sd_real;
    std::optional<double> mean_shuffled;
    std::optional<double> sd_shuffled;
    /// Share of windows with both fits present where zeta_real > zeta_shuffled.
    std::optional<double> fraction_real_above;
};

std::vector<ZetaSweepRow> zeta_vs_window_sweep(const SymbolSequence& text, std::size_t m,
                                               std::span<const std::size_t> w_values, CountingMode mode,
                                               std::uint64_t seed, const FitOptions& options = {},
                                               std::size_t threads = 0);

}  // namespace zipfstrat
