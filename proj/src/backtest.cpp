#include "zipfstrat/backtest.hpp"

#include <algorithm>

#include "zipfstrat/errors.hpp"

namespace zipfstrat {

void validate(const ContractSpec& spec) {
    if (spec.point_value.sign() <= 0) {
        throw InputError("point value must be positive");
    }
    if (spec.margin_rate.sign() <= 0 || spec.margin_rate > Decimal::from_int(1)) {
        throw InputError("margin rate must lie in (0, 1]");
    }
    if (spec.commission.sign() < 0) {
        throw InputError("commission must be non-negative");
    }
    if (spec.contracts < 1) {
        throw InputError("contracts must be at least 1");
    }
}

std::string_view to_string(Side s) { return s == Side::long_position ? "long" : "short"; }

Direction realized_direction(const PriceBar& bar) {
    if (bar.close > bar.open) {
        return Direction::up;
    }
    if (bar.close < bar.open) {
        return Direction::down;
    }
    return Direction::abstain;
}

BacktestResult execute(std::span<const Prediction> predictions, const PriceSeries& bars, const ContractSpec& spec,
                       ZeroMovePolicy zero_move) {
    validate(spec);
    const auto& all = bars.bars();
    std::vector<std::size_t> index(predictions.size());
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& p = predictions[i];
        if (!p.date) {
            missing.push_back("<undated target " + std::to_string(p.target) + ">");
            continue;
        }
        auto it = std::lower_bound(all.begin(), all.end(), *p.date,
                                   [](const PriceBar& b, const Date& d) { return b.date < d; });
        if (it == all.end() || it->date != *p.date) {
            missing.push_back(format_date(*p.date));
            continue;
        }
        index[i] = static_cast<std::size_t>(it - all.begin());
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
            list += (i ? ", " : "") + missing[i];
        }
        if (missing.size() > 20) {
            list += ", ... (" + std::to_string(missing.size()) + " total)";
        }
        throw InputError("predictions without a matching bar: " + list);
    }

    BacktestResult r;
    r.predictions = predictions.size();
    Decimal margin_sum;
    const Decimal contracts = Decimal::from_int(spec.contracts);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& p = predictions[i];
        const auto& bar = all[index[i]];
        if (p.direction == Direction::abstain) {
            ++r.abstentions;
            r.equity.push_back({bar.date, r.total_net});
            continue;
        }
        TradeRecord t;
        t.date = bar.date;
        t.session = index[i];
        t.side = p.direction == Direction::up ? Side::long_position : Side::short_position;
        t.open = bar.open;
        t.close = bar.close;
        t.points = t.side == Side::long_position ? bar.close - bar.open : bar.open - bar.close;
        t.gross = t.points * spec.point_value * spec.contracts;
        t.commission = spec.commission * spec.contracts;
        t.net = t.gross - t.commission;
        t.margin = bar.open * spec.point_value * contracts * spec.margin_rate;
        const Direction realized = realized_direction(bar);
        t.correct = realized == p.direction;
        t.scored = !(realized == Direction::abstain && zero_move == ZeroMovePolicy::exclude);

        r.total_gross += t.gross;
        r.total_commission += t.commission;
        r.total_net += t.net;
        margin_sum += t.margin;
        if (t.scored) {
            ++r.scored;
            r.correct += t.correct ? 1 : 0;
        }
        r.equity.push_back({bar.date, r.total_net});
        r.trades.push_back(t);
    }
    if (r.scored > 0) {
        r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.scored);
    }
    if (!r.trades.empty()) {
        r.average_margin = margin_sum / Decimal::from_int(static_cast<std::int64_t>(r.trades.size()));
        if (!r.average_margin->is_zero()) {
            r.roi = r.total_net / *r.average_margin;
        }
    }
    return r;
}

std::optional<double> accuracy(std::span<const Direction> predicted, std::span<const Direction> realized,
                               ZeroMovePolicy zero_move) {
    if (predicted.size() != realized.size()) {
        throw InputError("predicted and realized directions differ in length");
    }
    std::size_t total = 0, hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == Direction::abstain) {
            continue;
        }
        if (realized[i] == Direction::abstain && zero_move == ZeroMovePolicy::exclude) {
            continue;
        }
        ++total;
        hits += predicted[i] == realized[i] ? 1 : 0;
    }
    if (total == 0) {
        return std::nullopt;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<SweepCell> sweep(const PriceSeries& bars, const SweepConfig& config, const ContractSpec& spec) {
    validate(spec);
    if (config.m_values.empty() || config.w_values.empty()) {
        throw InputError("sweep grid is empty");
    }
    auto ws = config.w_values;
    auto ms = config.m_values;
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    for (auto w : ws) {
        for (auto m : ms) {
            auto cfg = config.base;
            cfg.m = m;
            cfg.w = w;
            validate(cfg);
        }
    }

    const auto text = symbolize(daylight_increments(bars), Alphabet::binary(config.base.zero));
    const std::size_t first_target = ws.back() + config.base.horizon - 1;
    if (text.size() <= first_target) {
        throw InputError("sweep needs more than " + std::to_string(first_target) + " sessions for w=" +
                         std::to_string(ws.back()) + ", got " + std::to_string(text.size()));
    }
    Date start = text.dates[first_target];
    if (config.eval_start && start < *config.eval_start) {
        start = *config.eval_start;
    }
    std::optional<Date> end = config.eval_end;
    if (end && *end < start) {
        throw InputError("evaluation period is empty (" + format_date(start) + " .. " + format_date(*end) + ")");
    }

    std::vector<SweepCell> cells;
    cells.reserve(ws.size() * ms.size());
    for (auto w : ws) {
        for (auto m : ms) {
            auto cfg = config.base;
            cfg.m = m;
            cfg.w = w;
            auto predictions = run_walkforward(text, cfg);
            std::erase_if(predictions, [&](const Prediction& p) {
                return !p.date || *p.date < start || (end && *end < *p.date);
            });
            SweepCell cell;
            cell.w = w;
            cell.m = m;
            if (!predictions.empty()) {
                cell.first_date = predictions.front().date;
                cell.last_date = predictions.back().date;
            }
            cell.result = execute(predictions, bars, spec, config.zero_move);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace zipfstrat
