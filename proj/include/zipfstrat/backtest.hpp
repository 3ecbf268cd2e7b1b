#pragma once

#include <optional>
#include <span>
#include <vector>

#include "zipfstrat/decimal.hpp"
#include "zipfstrat/ingest.hpp"
#include "zipfstrat/strategy.hpp"

namespace zipfstrat {

/// Index futures contract terms. Defaults follow WIG20 futures: PLN 10 per
/// index point and roughly 10% initial margin.
struct ContractSpec {
    Decimal point_value = Decimal::from_int(10);
    Decimal margin_rate = Decimal::parse("0.1");
    /// Currency per contract per round trip.
    Decimal commission{};
    std::int64_t contracts = 1;
};

void validate(const ContractSpec& spec);

/// How a session with open == close is scored.
enum class ZeroMovePolicy {
    /// Counted as a wrong call for either side.
    incorrect,
    /// Left out of the accuracy denominator (the trade still happens).
    exclude,
};

enum class Side { long_position, short_position };
std::string_view to_string(Side s);

struct TradeRecord {
    Date date;
    std::size_t session = 0;
    Side side = Side::long_position;
    Decimal open;
    Decimal close;
    /// Signed index points earned: close - open long, open - close short.
    Decimal points;
    Decimal gross;
    Decimal commission;
    Decimal net;
    Decimal margin;
    bool correct = false;
    /// False when the session is excluded from accuracy.
    bool scored = true;

    /// net / margin.
    Decimal return_on_margin() const { return net / margin; }
};

struct EquityPoint {
    Date date;
    Decimal cumulative;
};

struct BacktestResult {
    std::vector<TradeRecord> trades;
    /// One point per prediction, abstentions included.
    std::vector<EquityPoint> equity;
    std::size_t predictions = 0;
    std::size_t abstentions = 0;
    std::size_t scored = 0;
    std::size_t correct = 0;
    /// correct / scored; nullopt when nothing was scored.
    std::optional<double> accuracy;
    Decimal total_gross;
    Decimal total_commission;
    Decimal total_net;
    /// Mean margin posted per trade; nullopt without trades.
    std::optional<Decimal> average_margin;
    /// total_net / average_margin.
    std::optional<Decimal> roi;
};

/// Day-trades each non-abstaining prediction at its session's open and
/// closes at the same session's close. Predictions are matched to bars by
/// date; any prediction without a matching bar raises InputError listing
/// the offending dates.
BacktestResult execute(std::span<const Prediction> predictions, const PriceSeries& bars, const ContractSpec& spec,
                       ZeroMovePolicy zero_move = ZeroMovePolicy::incorrect);

/// Realized direction of a bar; abstain when open == close.
Direction realized_direction(const PriceBar& bar);

/// Hit rate over pairs whose prediction is not abstain. A realized abstain
/// (flat session) counts as a miss or is skipped according to `zero_move`.
std::optional<double> accuracy(std::span<const Direction> predicted, std::span<const Direction> realized,
                               ZeroMovePolicy zero_move = ZeroMovePolicy::incorrect);

struct SweepConfig {
    std::vector<std::size_t> m_values;
    std::vector<std::size_t> w_values;
    /// m and w are overridden per cell.
    StrategyConfig base;
    ZeroMovePolicy zero_move = ZeroMovePolicy::incorrect;
    /// Optional bounds on the evaluation period (inclusive).
    std::optional<Date> eval_start;
    std::optional<Date> eval_end;
};

struct SweepCell {
    std::size_t w = 0;
    std::size_t m = 0;
    std::optional<Date> first_date;
    std::optional<Date> last_date;
    BacktestResult result;
};

/// Table of (w, m) cells ordered by w then m. All cells share one
/// evaluation period: it starts at the first session every cell can
/// predict (fixed by the largest w) and is clipped to the optional bounds.
std::vector<SweepCell> sweep(const PriceSeries& bars, const SweepConfig& config, const ContractSpec& spec);

}  // namespace zipfstrat
