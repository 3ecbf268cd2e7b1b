#include "zipfstrat/zipf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "zipfstrat/errors.hpp"
#include "zipfstrat/parallel.hpp"

namespace zipfstrat {

std::optional<std::size_t> RankTable::rank_of(std::string_view word) const {
    for (const auto& e : entries) {
        if (e.word == word) {
            return e.rank;
        }
    }
    return std::nullopt;
}

RankTable RankTable::from_counts(std::vector<std::pair<std::string, std::uint64_t>> counts) {
    std::sort(counts.begin(), counts.end());
    RankTable table;
    for (auto& [word, count] : counts) {
        if (count == 0) {
            continue;
        }
        if (!table.entries.empty() && table.entries.back().word == word) {
            table.entries.back().count += count;
        } else {
            table.entries.push_back({std::move(word), count, 0.0, 0});
        }
        table.total_words += count;
    }
    // Stable on a lexicographically sorted input gives the ascending-word tiebreak.
    std::stable_sort(table.entries.begin(), table.entries.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.count > b.count; });
    const auto total = static_cast<double>(table.total_words);
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        table.entries[i].rank = i + 1;
        table.entries[i].frequency = static_cast<double>(table.entries[i].count) / total;
    }
    return table;
}

RankTable count_words(std::string_view window, std::size_t m, CountingMode mode) {
    if (m == 0) {
        throw InputError("word length must be at least 1");
    }
    if (window.size() < m) {
        throw InputError("window shorter than word length (" + std::to_string(window.size()) + " < " +
                         std::to_string(m) + ")");
    }
    std::unordered_map<std::string_view, std::uint64_t> counts;
    if (mode == CountingMode::block) {
        const std::size_t offset = window.size() % m;
        for (std::size_t i = offset; i + m <= window.size(); i += m) {
            ++counts[window.substr(i, m)];
        }
    } else {
        for (std::size_t i = 0; i + m <= window.size(); ++i) {
            ++counts[window.substr(i, m)];
        }
    }
    std::vector<std::pair<std::string, std::uint64_t>> flat;
    flat.reserve(counts.size());
    for (const auto& [word, count] : counts) {
        flat.emplace_back(std::string(word), count);
    }
    return RankTable::from_counts(std::move(flat));
}

RankTable count_words(const SymbolSequence& text, const WordCounting& counting) {
    std::string_view view = text.view();
    if (counting.window != 0) {
        if (counting.window > view.size()) {
            throw InputError("window length " + std::to_string(counting.window) + " exceeds text length " +
                             std::to_string(view.size()));
        }
        view = view.substr(view.size() - counting.window);
    }
    return count_words(view, counting.m, counting.mode);
}

ZipfFit fit_power_law(std::span<const double> ranks, std::span<const double> values) {
    if (ranks.size() != values.size()) {
        throw InputError("rank and value arrays differ in length");
    }
    const std::size_t n = ranks.size();
    if (n < 2) {
        throw DegenerateError("degenerate rank table: need at least 2 ranks, got " + std::to_string(n));
    }
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(ranks[i] > 0.0) || !(values[i] > 0.0)) {
            throw DomainError("power-law fit needs positive ranks and values");
        }
        xs[i] = std::log(ranks[i]);
        ys[i] = std::log(values[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw DegenerateError("degenerate rank table: ranks are not distinct");
    }
    ZipfFit fit;
    fit.n_points = n;
    fit.raw_slope = sxy / sxx;
    fit.intercept = my - fit.raw_slope * mx;
    fit.clamped = fit.raw_slope > 0.0;
    fit.zeta = fit.clamped ? 0.0 : -fit.raw_slope;
    if (syy == 0.0) {
        // Flat spectrum: the line fits exactly.
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ys[i] - (fit.intercept + fit.raw_slope * xs[i]);
            ss_res += r * r;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

ZipfFit fit_zipf(const RankTable& table, const FitOptions& options) {
    std::vector<double> ranks, values;
    for (const auto& e : table.entries) {
        if (e.rank < options.min_rank || (options.max_rank != 0 && e.rank > options.max_rank)) {
            continue;
        }
        ranks.push_back(static_cast<double>(e.rank));
        values.push_back(options.raw_counts ? static_cast<double>(e.count) : e.frequency);
    }
    return fit_power_law(ranks, values);
}

std::optional<ZipfFit> try_fit_zipf(const RankTable& table, const FitOptions& options) {
    try {
        return fit_zipf(table, options);
    } catch (const DegenerateError&) {
        return std::nullopt;
    }
}

FitPair fit_pair(const SymbolSequence& text, const WordCounting& counting, std::uint64_t seed,
                 const FitOptions& options) {
    std::string_view view = text.view();
    if (counting.window != 0 && counting.window <= view.size()) {
        view = view.substr(view.size() - counting.window);
    } else if (counting.window > view.size()) {
        throw InputError("window length " + std::to_string(counting.window) + " exceeds text length " +
                         std::to_string(view.size()));
    }
    FitPair out;
    out.real_table = count_words(view, counting.m, counting.mode);
    out.shuffled_table = count_words(shuffle_letters(view, seed), counting.m, counting.mode);
    out.real = fit_zipf(out.real_table, options);
    out.shuffled = fit_zipf(out.shuffled_table, options);
    return out;
}

double zeta_from_hurst(double h) {
    if (!(h >= 0.0 && h <= 1.0)) {
        throw DomainError("Hurst exponent must lie in [0, 1]");
    }
    return std::abs(2.0 * h - 1.0);
}

std::vector<LocalFit> local_fits(std::string_view text, std::size_t m, std::size_t w, CountingMode mode,
                                 std::uint64_t seed, const FitOptions& options, std::size_t threads) {
    if (m == 0 || w < m) {
        throw InputError("window length " + std::to_string(w) + " is shorter than word length " +
                         std::to_string(m));
    }
    if (w > text.size()) {
        throw InputError("window length " + std::to_string(w) + " exceeds text length " +
                         std::to_string(text.size()));
    }
    const std::size_t positions = text.size() - w + 1;
    std::vector<LocalFit> out(positions);
    detail::parallel_for(
        positions,
        [&](std::size_t i) {
            const std::size_t end = w + i;
            auto window = text.substr(i, w);
            LocalFit& fit = out[i];
            fit.window_end = end;
            fit.real = try_fit_zipf(count_words(window, m, mode), options);
            fit.shuffled =
                try_fit_zipf(count_words(shuffle_letters(window, position_seed(seed, end)), m, mode), options);
        },
        threads);
    return out;
}

namespace {

void mean_sd(const std::vector<double>& xs, std::optional<double>& mean, std::optional<double>& sd) {
    if (xs.empty()) {
        return;
    }
    double s = 0.0;
    for (double x : xs) {
        s += x;
    }
    const double mu = s / static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) {
        v += (x - mu) * (x - mu);
    }
    mean = mu;
    sd = std::sqrt(v / static_cast<double>(xs.size()));
}

}  // namespace

std::vector<ZetaSweepRow> zeta_vs_window_sweep(const SymbolSequence& text, std::size_t m,
                                               std::span<const std::size_t> w_values, CountingMode mode,
                                               std::uint64_t seed, const FitOptions& options,
                                               std::size_t threads) {
    for (auto w : w_values) {
        if (w < m) {
            throw InputError("window length " + std::to_string(w) + " is shorter than word length " +
                             std::to_string(m));
        }
        if (w > text.size()) {
            throw InputError("window length " + std::to_string(w) + " exceeds text length " +
                             std::to_string(text.size()));
        }
    }
    std::vector<ZetaSweepRow> rows;
    rows.reserve(w_values.size());
    for (auto w : w_values) {
        auto fits = local_fits(text.view(), m, w, mode, seed, options, threads);
        ZetaSweepRow row;
        row.w = w;
        row.positions = fits.size();
        std::vector<double> real, shuffled;
        std::size_t paired = 0, above = 0;
        for (const auto& f : fits) {
            if (f.real) {
                real.push_back(f.real->zeta);
            } else {
                ++row.degenerate_real;
            }
            if (f.shuffled) {
                shuffled.push_back(f.shuffled->zeta);
            } else {
                ++row.degenerate_shuffled;
            }
            if (f.real && f.shuffled) {
                ++paired;
                above += f.real->zeta > f.shuffled->zeta ? 1 : 0;
            }
        }
        mean_sd(real, row.mean_real, row.sd_real);
        mean_sd(shuffled, row.mean_shuffled, row.sd_shuffled);
        if (paired > 0) {
            row.fraction_real_above = static_cast<double>(above) / static_cast<double>(paired);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace zipfstrat
