#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "zipfstrat/backtest.hpp"
#include "zipfstrat/errors.hpp"
#include "zipfstrat/ingest.hpp"
#include "zipfstrat/report.hpp"
#include "zipfstrat/strategy.hpp"
#include "zipfstrat/symbolic.hpp"
#include "zipfstrat/zipf.hpp"

namespace py = pybind11;
using namespace zipfstrat;

namespace {

// Prices and currency cross the boundary as decimal strings or Python
// numbers; floats are rounded to eight decimals.
Decimal to_decimal(const py::handle& v) {
    if (py::isinstance<Decimal>(v)) {
        return v.cast<Decimal>();
    }
    if (py::isinstance<py::str>(v)) {
        return Decimal::parse(v.cast<std::string>());
    }
    if (py::isinstance<py::int_>(v)) {
        return Decimal::from_int(v.cast<std::int64_t>());
    }
    return Decimal::from_double(v.cast<double>());
}

std::vector<Decimal> to_decimals(const py::iterable& xs) {
    std::vector<Decimal> out;
    for (auto x : xs) {
        out.push_back(to_decimal(x));
    }
    return out;
}

py::object date_or_none(const std::optional<Date>& d) {
    return d ? py::object(py::str(format_date(*d))) : py::object(py::none());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Zipf rank-frequency analysis and day-trading backtest";
    m.attr("__version__") = std::string(version());

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ValueError);
    py::register_exception<OutputError>(m, "OutputError", PyExc_OSError);

    py::class_<Decimal>(m, "Decimal")
        .def(py::init([](const py::object& v) { return to_decimal(v); }))
        .def("__str__", &Decimal::to_string)
        .def("__repr__", [](Decimal d) { return "Decimal('" + d.to_string() + "')"; })
        .def("__float__", &Decimal::to_double)
        .def("__eq__", [](Decimal a, const py::object& b) { return a == to_decimal(b); })
        .def("__hash__", [](Decimal d) { return py::hash(py::int_(d.raw())); })
        .def("__add__", [](Decimal a, const py::object& b) { return a + to_decimal(b); })
        .def("__sub__", [](Decimal a, const py::object& b) { return a - to_decimal(b); })
        .def("__mul__", [](Decimal a, const py::object& b) { return a * to_decimal(b); })
        .def("__truediv__", [](Decimal a, const py::object& b) { return a / to_decimal(b); })
        .def("__neg__", [](Decimal a) { return -a; });

    // ingest
    py::class_<PriceBar>(m, "PriceBar")
        .def(py::init([](const std::string& date, const py::object& open, const py::object& close) {
                 return PriceBar{parse_date(date), to_decimal(open), to_decimal(close)};
             }),
             py::arg("date"), py::arg("open"), py::arg("close"))
        .def_property_readonly("date", [](const PriceBar& b) { return format_date(b.date); })
        .def_readonly("open", &PriceBar::open)
        .def_readonly("close", &PriceBar::close);

    py::class_<PriceSeries>(m, "PriceSeries")
        .def(py::init<std::vector<PriceBar>>(), py::arg("bars"))
        .def("__len__", &PriceSeries::size)
        .def("__getitem__",
             [](const PriceSeries& s, std::size_t i) {
                 if (i >= s.size()) {
                     throw py::index_error();
                 }
                 return s[i];
             })
        .def_property_readonly("bars", &PriceSeries::bars)
        .def("to_csv", [](const PriceSeries& s) {
            std::ostringstream out;
            write_csv(out, s);
            return out.str();
        });

    m.def(
        "load_csv",
        [](const std::filesystem::path& path, const std::string& date_column, const std::string& open_column,
           const std::string& close_column, bool sort_unordered) {
            CsvFormat f{date_column, open_column, close_column, ',', sort_unordered};
            return load_csv(path, f);
        },
        py::arg("path"), py::arg("date_column") = "date", py::arg("open_column") = "open",
        py::arg("close_column") = "close", py::arg("sort_unordered") = false);

    py::class_<IncrementSeries>(m, "IncrementSeries")
        .def(py::init([](const py::iterable& values) { return IncrementSeries{to_decimals(values), {}}; }))
        .def("__len__", &IncrementSeries::size)
        .def_readonly("values", &IncrementSeries::values)
        .def_property_readonly("dates", [](const IncrementSeries& s) {
            std::vector<std::string> out;
            for (auto d : s.dates) {
                out.push_back(format_date(d));
            }
            return out;
        });

    m.def("daylight_increments", &daylight_increments, py::arg("series"));
    m.def("cumulative_daylight", &cumulative_daylight, py::arg("increments"));

    // symbolic
    py::enum_<ZeroPolicy>(m, "ZeroPolicy")
        .value("up", ZeroPolicy::up)
        .value("down", ZeroPolicy::down)
        .value("drop", ZeroPolicy::drop);

    py::class_<Alphabet>(m, "Alphabet")
        .def(py::init([](std::string labels, const py::iterable& thresholds, ZeroPolicy zero) {
                 return Alphabet(std::move(labels), to_decimals(thresholds), zero);
             }),
             py::arg("labels"), py::arg("thresholds"), py::arg("zero") = ZeroPolicy::down)
        .def_static("binary", &Alphabet::binary, py::arg("zero") = ZeroPolicy::down)
        .def_static(
            "three_state", [](const py::object& l) { return Alphabet::three_state(to_decimal(l)); },
            py::arg("threshold"))
        .def_property_readonly("labels", &Alphabet::labels)
        .def_property_readonly("states", &Alphabet::states)
        .def_property_readonly("k2", &Alphabet::k2);

    py::class_<SymbolSequence>(m, "SymbolSequence")
        .def(py::init(&make_sequence), py::arg("symbols"), py::arg("alphabet") = Alphabet::binary())
        .def_readonly("symbols", &SymbolSequence::symbols)
        .def_readonly("alphabet", &SymbolSequence::alphabet)
        .def("__len__", &SymbolSequence::size)
        .def("__str__", [](const SymbolSequence& s) { return s.symbols; });

    m.def("symbolize", &symbolize, py::arg("increments"), py::arg("alphabet") = Alphabet::binary());
    m.def("shuffle", &shuffle, py::arg("sequence"), py::arg("seed"));

    // zipf
    py::enum_<CountingMode>(m, "CountingMode")
        .value("block", CountingMode::block)
        .value("sliding", CountingMode::sliding);

    py::class_<RankEntry>(m, "RankEntry")
        .def_readonly("word", &RankEntry::word)
        .def_readonly("count", &RankEntry::count)
        .def_readonly("frequency", &RankEntry::frequency)
        .def_readonly("rank", &RankEntry::rank)
        .def("__repr__", [](const RankEntry& e) {
            return "(" + e.word + ", " + std::to_string(e.count) + ", " + format_double(e.frequency) + ", " +
                   std::to_string(e.rank) + ")";
        });

    py::class_<RankTable>(m, "RankTable")
        .def_readonly("entries", &RankTable::entries)
        .def_readonly("total_words", &RankTable::total_words)
        .def("rank_of", &RankTable::rank_of, py::arg("word"))
        .def("__len__", &RankTable::size)
        .def_static("from_counts", &RankTable::from_counts, py::arg("counts"))
        .def("to_json", [](const RankTable& t) { return rank_table_json(t, try_fit_zipf(t)); });

    m.def(
        "count_words",
        [](const SymbolSequence& text, std::size_t m, CountingMode mode, std::size_t window) {
            return count_words(text, WordCounting{m, mode, window});
        },
        py::arg("text"), py::arg("m"), py::arg("mode") = CountingMode::block, py::arg("window") = 0);

    py::class_<FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("min_rank", &FitOptions::min_rank)
        .def_readwrite("max_rank", &FitOptions::max_rank)
        .def_readwrite("raw_counts", &FitOptions::raw_counts);

    py::class_<ZipfFit>(m, "ZipfFit")
        .def_readonly("zeta", &ZipfFit::zeta)
        .def_readonly("raw_slope", &ZipfFit::raw_slope)
        .def_readonly("intercept", &ZipfFit::intercept)
        .def_readonly("r_squared", &ZipfFit::r_squared)
        .def_readonly("n_points", &ZipfFit::n_points)
        .def_readonly("clamped", &ZipfFit::clamped)
        .def("to_json", &zipf_fit_json);

    m.def("fit_zipf", &fit_zipf, py::arg("table"), py::arg("options") = FitOptions{});
    m.def(
        "fit_power_law",
        [](const std::vector<double>& ranks, const std::vector<double>& values) {
            return fit_power_law(ranks, values);
        },
        py::arg("ranks"), py::arg("values"));
    m.def(
        "fit_pair",
        [](const SymbolSequence& text, std::size_t m, CountingMode mode, std::size_t window, std::uint64_t seed) {
            auto pair = fit_pair(text, WordCounting{m, mode, window}, seed);
            return py::make_tuple(pair.real, pair.shuffled);
        },
        py::arg("text"), py::arg("m"), py::arg("mode") = CountingMode::block, py::arg("window") = 0,
        py::arg("seed") = 0);
    m.def("zeta_from_hurst", &zeta_from_hurst, py::arg("h"));

    py::class_<ZetaSweepRow>(m, "ZetaSweepRow")
        .def_readonly("w", &ZetaSweepRow::w)
        .def_readonly("positions", &ZetaSweepRow::positions)
        .def_readonly("degenerate_real", &ZetaSweepRow::degenerate_real)
        .def_readonly("degenerate_shuffled", &ZetaSweepRow::degenerate_shuffled)
        .def_readonly("mean_real", &ZetaSweepRow::mean_real)
        .def_readonly("sd_real", &ZetaSweepRow::sd_real)
        .def_readonly("mean_shuffled", &ZetaSweepRow::mean_shuffled)
        .def_readonly("sd_shuffled", &ZetaSweepRow::sd_shuffled)
        .def_readonly("fraction_real_above", &ZetaSweepRow::fraction_real_above);

    m.def(
        "zeta_vs_window_sweep",
        [](const SymbolSequence& text, std::size_t m, const std::vector<std::size_t>& w_values, CountingMode mode,
           std::uint64_t seed) { return zeta_vs_window_sweep(text, m, w_values, mode, seed); },
        py::arg("text"), py::arg("m"), py::arg("w_values"), py::arg("mode") = CountingMode::block,
        py::arg("seed") = 0);

    // strategy
    py::enum_<ZetaSource>(m, "ZetaSource").value("real", ZetaSource::real).value("shuffled", ZetaSource::shuffled);
    py::enum_<UnseenPolicy>(m, "UnseenPolicy")
        .value("rank", UnseenPolicy::rank)
        .value("abstain", UnseenPolicy::abstain);
    py::enum_<Direction>(m, "Direction")
        .value("up", Direction::up)
        .value("down", Direction::down)
        .value("abstain", Direction::abstain);
    py::enum_<AbstainReason>(m, "AbstainReason")
        .value("none", AbstainReason::none)
        .value("tie", AbstainReason::tie)
        .value("unseen_word", AbstainReason::unseen_word)
        .value("degenerate_window", AbstainReason::degenerate_window);

    py::class_<StrategyConfig>(m, "StrategyConfig")
        .def(py::init<>())
        .def_readwrite("m", &StrategyConfig::m)
        .def_readwrite("w", &StrategyConfig::w)
        .def_readwrite("counting", &StrategyConfig::counting)
        .def_readwrite("horizon", &StrategyConfig::horizon)
        .def_readwrite("zeta_source", &StrategyConfig::zeta_source)
        .def_readwrite("unseen", &StrategyConfig::unseen)
        .def_readwrite("zero", &StrategyConfig::zero)
        .def_readwrite("fit", &StrategyConfig::fit)
        .def_readwrite("seed", &StrategyConfig::seed)
        .def_readwrite("threads", &StrategyConfig::threads);

    py::class_<CandidateRank>(m, "CandidateRank")
        .def(py::init([](std::string word, std::optional<std::size_t> rank) {
                 return CandidateRank{std::move(word), rank, !rank.has_value()};
             }),
             py::arg("word"), py::arg("rank"))
        .def_readonly("word", &CandidateRank::word)
        .def_readonly("rank", &CandidateRank::rank)
        .def_readonly("unseen", &CandidateRank::unseen);

    py::class_<CandidateRanks>(m, "CandidateRanks")
        .def(py::init([](std::vector<CandidateRank> c) { return CandidateRanks{std::move(c), 0}; }))
        .def_readonly("candidates", &CandidateRanks::candidates)
        .def_readonly("table_size", &CandidateRanks::table_size);

    py::class_<Prediction>(m, "Prediction")
        .def(py::init([](const std::optional<std::string>& date, Direction direction, double p_up) {
                 Prediction p;
                 if (date) {
                     p.date = parse_date(*date);
                 }
                 p.direction = direction;
                 p.p_up = p_up;
                 p.p_down = 1.0 - p_up;
                 if (direction == Direction::abstain) {
                     p.reason = AbstainReason::tie;
                 }
                 return p;
             }),
             py::arg("date"), py::arg("direction"), py::arg("p_up") = 0.5)
        .def_readonly("target", &Prediction::target)
        .def_readonly("session", &Prediction::session)
        .def_property_readonly("date", [](const Prediction& p) { return date_or_none(p.date); })
        .def_readonly("p_up", &Prediction::p_up)
        .def_readonly("p_down", &Prediction::p_down)
        .def_readonly("direction", &Prediction::direction)
        .def_readonly("reason", &Prediction::reason)
        .def_readonly("zeta", &Prediction::zeta)
        .def_readonly("day_p_up", &Prediction::day_p_up)
        .def_readonly("candidates", &Prediction::candidates)
        .def("to_json", &prediction_json);

    m.def(
        "candidate_words",
        [](const std::string& prefix, std::size_t m, std::size_t horizon) {
            return candidate_words(prefix, m, horizon);
        },
        py::arg("prefix"), py::arg("m"), py::arg("horizon") = 1);
    m.def("rank_candidates", &rank_candidates, py::arg("candidates"), py::arg("table"),
          py::arg("policy") = UnseenPolicy::rank);
    m.def(
        "predict", [](const CandidateRanks& r, double zeta, std::size_t horizon) { return predict(r, zeta, horizon); },
        py::arg("ranks"), py::arg("zeta"), py::arg("horizon") = 1);
    m.def("run_walkforward", &run_walkforward, py::arg("text"), py::arg("config"));
    m.def("forecast_next", &forecast_next, py::arg("text"), py::arg("config"));

    // backtest
    py::enum_<ZeroMovePolicy>(m, "ZeroMovePolicy")
        .value("incorrect", ZeroMovePolicy::incorrect)
        .value("exclude", ZeroMovePolicy::exclude);
    py::enum_<Side>(m, "Side").value("long", Side::long_position).value("short", Side::short_position);

    py::class_<ContractSpec>(m, "ContractSpec")
        .def(py::init([](const py::object& point_value, const py::object& margin_rate, const py::object& commission,
                         std::int64_t contracts) {
                 ContractSpec s{to_decimal(point_value), to_decimal(margin_rate), to_decimal(commission), contracts};
                 validate(s);
                 return s;
             }),
             py::arg("point_value") = 10, py::arg("margin_rate") = "0.1", py::arg("commission") = 0,
             py::arg("contracts") = 1)
        .def_readonly("point_value", &ContractSpec::point_value)
        .def_readonly("margin_rate", &ContractSpec::margin_rate)
        .def_readonly("commission", &ContractSpec::commission)
        .def_readonly("contracts", &ContractSpec::contracts);

    py::class_<TradeRecord>(m, "TradeRecord")
        .def_property_readonly("date", [](const TradeRecord& t) { return format_date(t.date); })
        .def_readonly("side", &TradeRecord::side)
        .def_readonly("open", &TradeRecord::open)
        .def_readonly("close", &TradeRecord::close)
        .def_readonly("points", &TradeRecord::points)
        .def_readonly("gross", &TradeRecord::gross)
        .def_readonly("net", &TradeRecord::net)
        .def_readonly("margin", &TradeRecord::margin)
        .def_readonly("correct", &TradeRecord::correct)
        .def("return_on_margin", &TradeRecord::return_on_margin);

    py::class_<BacktestResult>(m, "BacktestResult")
        .def_readonly("trades", &BacktestResult::trades)
        .def_readonly("accuracy", &BacktestResult::accuracy)
        .def_readonly("total_net", &BacktestResult::total_net)
        .def_readonly("total_gross", &BacktestResult::total_gross)
        .def_readonly("average_margin", &BacktestResult::average_margin)
        .def_readonly("roi", &BacktestResult::roi)
        .def_readonly("abstentions", &BacktestResult::abstentions)
        .def_property_readonly("equity", [](const BacktestResult& r) {
            std::vector<std::pair<std::string, Decimal>> out;
            for (const auto& p : r.equity) {
                out.emplace_back(format_date(p.date), p.cumulative);
            }
            return out;
        });

    m.def(
        "execute",
        [](const std::vector<Prediction>& predictions, const PriceSeries& bars, const ContractSpec& spec,
           ZeroMovePolicy zero_move) { return execute(predictions, bars, spec, zero_move); },
        py::arg("predictions"), py::arg("bars"), py::arg("spec") = ContractSpec{},
        py::arg("zero_move") = ZeroMovePolicy::incorrect);

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("w", &SweepCell::w)
        .def_readonly("m", &SweepCell::m)
        .def_property_readonly("first_date", [](const SweepCell& c) { return date_or_none(c.first_date); })
        .def_property_readonly("last_date", [](const SweepCell& c) { return date_or_none(c.last_date); })
        .def_readonly("result", &SweepCell::result);

    m.def(
        "sweep",
        [](const PriceSeries& bars, const std::vector<std::size_t>& m_values, const std::vector<std::size_t>& w_values,
           const StrategyConfig& base, const ContractSpec& spec, std::optional<std::string> eval_start,
           std::optional<std::string> eval_end, ZeroMovePolicy zero_move) {
            SweepConfig c;
            c.m_values = m_values;
            c.w_values = w_values;
            c.base = base;
            c.zero_move = zero_move;
            if (eval_start) {
                c.eval_start = parse_date(*eval_start);
            }
            if (eval_end) {
                c.eval_end = parse_date(*eval_end);
            }
            return sweep(bars, c, spec);
        },
        py::arg("bars"), py::arg("m_values"), py::arg("w_values"), py::arg("base") = StrategyConfig{},
        py::arg("spec") = ContractSpec{}, py::arg("eval_start") = py::none(), py::arg("eval_end") = py::none(),
        py::arg("zero_move") = ZeroMovePolicy::incorrect);

    // report
    auto make_manifest = [](const std::vector<std::pair<std::string, std::string>>& config,
                            const std::string& input_path, std::vector<std::uint64_t> seeds) {
        RunManifest mf;
        mf.input_path = input_path;
        if (!input_path.empty()) {
            mf.input_sha256 = sha256_file(input_path);
        }
        mf.config = config;
        mf.seeds = std::move(seeds);
        mf.created_at = current_timestamp();
        return mf;
    };
    m.def(
        "emit_summary",
        [make_manifest](const std::vector<SweepCell>& cells, const std::filesystem::path& out_dir,
                        const std::vector<std::pair<std::string, std::string>>& config, const std::string& input_path,
                        const std::vector<std::uint64_t>& seeds) {
            return emit_summary(cells, make_manifest(config, input_path, seeds), out_dir);
        },
        py::arg("cells"), py::arg("out_dir"), py::arg("config") = std::vector<std::pair<std::string, std::string>>{},
        py::arg("input_path") = "", py::arg("seeds") = std::vector<std::uint64_t>{});
    m.def("emit_equity", &emit_equity, py::arg("cell"), py::arg("out_dir"));
    m.def("emit_trades", &emit_trades, py::arg("cell"), py::arg("out_dir"));
    m.def(
        "emit_zeta_sweep",
        [](const std::vector<ZetaSweepRow>& rows, std::size_t m, const std::filesystem::path& out_dir) {
            return emit_zeta_sweep(rows, m, out_dir);
        },
        py::arg("rows"), py::arg("m"), py::arg("out_dir"));
    m.def(
        "emit_rank_plot_data",
        [](const RankTable& real, const RankTable& shuffled, std::size_t w, std::size_t m,
           const std::filesystem::path& out_dir, std::uint64_t seed) {
            RankPlotData d;
            d.w = w;
            d.m = m;
            d.seed = seed;
            d.real_table = real;
            d.real_fit = try_fit_zipf(real);
            d.shuffled_table = shuffled;
            d.shuffled_fit = try_fit_zipf(shuffled);
            return emit_rank_plot_data(d, out_dir);
        },
        py::arg("real"), py::arg("shuffled"), py::arg("w"), py::arg("m"), py::arg("out_dir"), py::arg("seed") = 0);
    m.def("sha256_file", &sha256_file, py::arg("path"));
}
