// zipf-strategy: command-line front end for the Zipf rank-frequency
// day-trading strategy.
//
//   zipf-strategy analyze  --data wig20.csv --m 4 --w 400,600,800
//   zipf-strategy predict  --data wig20.csv --m 6 --w 500
//   zipf-strategy backtest --data wig20.csv --m 6 --w 500 --commission 9.5
//   zipf-strategy sweep    --data wig20.csv --m 4,5,6 --w 400,500,600,700,800
//
// Exit status: 0 on success, 2 on invalid input or arguments, 1 otherwise.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zipfstrat/backtest.hpp"
#include "zipfstrat/errors.hpp"
#include "zipfstrat/ingest.hpp"
#include "zipfstrat/report.hpp"
#include "zipfstrat/strategy.hpp"
#include "zipfstrat/symbolic.hpp"
#include "zipfstrat/zipf.hpp"

namespace fs = std::filesystem;
using namespace zipfstrat;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitFailure = 1;

struct Options {
    std::string data;
    std::string date_column = "date";
    std::string open_column = "open";
    std::string close_column = "close";
    bool sort_rows = false;

    std::vector<std::size_t> m_values;
    std::vector<std::size_t> w_values;
    std::vector<std::size_t> sweep_w;
    std::size_t horizon = 1;
    CountingMode counting = CountingMode::block;
    ZeroPolicy zero = ZeroPolicy::down;
    UnseenPolicy unseen = UnseenPolicy::rank;
    ZetaSource zeta_source = ZetaSource::real;
    ZeroMovePolicy zero_move = ZeroMovePolicy::incorrect;
    std::uint64_t seed = 0;
    std::size_t fit_min_rank = 1;
    std::size_t fit_max_rank = 0;
    std::size_t threads = 0;

    int states = 2;
    std::string threshold;

    std::string point_value = "10";
    std::string margin_rate = "0.1";
    std::string commission = "0";
    std::int64_t contracts = 1;

    std::string eval_start;
    std::string eval_end;
    std::string out = "out";
};

const std::map<std::string, CountingMode> kCounting{{"block", CountingMode::block},
                                                    {"sliding", CountingMode::sliding}};
const std::map<std::string, ZeroPolicy> kZero{{"up", ZeroPolicy::up}, {"down", ZeroPolicy::down},
                                              {"drop", ZeroPolicy::drop}};
const std::map<std::string, UnseenPolicy> kUnseen{{"rank", UnseenPolicy::rank}, {"abstain", UnseenPolicy::abstain}};
const std::map<std::string, ZetaSource> kZetaSource{{"real", ZetaSource::real}, {"shuffled", ZetaSource::shuffled}};
const std::map<std::string, ZeroMovePolicy> kZeroMove{{"incorrect", ZeroMovePolicy::incorrect},
                                                      {"exclude", ZeroMovePolicy::exclude}};

template <class Map, class E>
std::string name_of(const Map& map, E value) {
    for (const auto& [k, v] : map) {
        if (v == value) {
            return k;
        }
    }
    return "?";
}

std::string join(const std::vector<std::size_t>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? "," : "") + std::to_string(xs[i]);
    }
    return s;
}

void add_common(CLI::App& app, Options& o) {
    app.add_option("--data", o.data, "Input CSV with date, open and close columns")->required();
    app.add_option("--date-column", o.date_column, "Date column name")->capture_default_str();
    app.add_option("--open-column", o.open_column, "Open price column name")->capture_default_str();
    app.add_option("--close-column", o.close_column, "Close price column name")->capture_default_str();
    app.add_flag("--sort", o.sort_rows, "Sort out-of-order rows instead of rejecting them");

    app.add_option("--m", o.m_values, "Word length(s)")->delimiter(',')->check(CLI::Range(1, 20));
    app.add_option("--w", o.w_values, "Window length(s) in sessions")->delimiter(',')->check(CLI::PositiveNumber);
    app.add_option("--horizon", o.horizon, "Sessions ahead to predict")->check(CLI::Range(1, 3))->capture_default_str();
    app.add_option("--counting", o.counting, "Word counting: block|sliding")
        ->transform(CLI::CheckedTransformer(kCounting, CLI::ignore_case));
    app.add_option("--zero-as", o.zero, "Zero increments: up|down|drop")
        ->transform(CLI::CheckedTransformer(kZero, CLI::ignore_case));
    app.add_option("--unseen", o.unseen, "Unseen candidate words: rank|abstain")
        ->transform(CLI::CheckedTransformer(kUnseen, CLI::ignore_case));
    app.add_option("--zeta-source", o.zeta_source, "Exponent used for prediction: real|shuffled")
        ->transform(CLI::CheckedTransformer(kZetaSource, CLI::ignore_case));
    app.add_option("--zero-move", o.zero_move, "Scoring of flat sessions: incorrect|exclude")
        ->transform(CLI::CheckedTransformer(kZeroMove, CLI::ignore_case));
    app.add_option("--seed", o.seed, "Base seed for shuffled fits")->capture_default_str();
    app.add_option("--fit-min-rank", o.fit_min_rank, "Lowest rank used in the fit")->check(CLI::PositiveNumber);
    app.add_option("--fit-max-rank", o.fit_max_rank, "Highest rank used in the fit (0 = all)");
    app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");

    app.add_option("--point-value", o.point_value, "Currency per index point")->capture_default_str();
    app.add_option("--margin-rate", o.margin_rate, "Initial margin as a fraction of contract value")
        ->capture_default_str();
    app.add_option("--commission", o.commission, "Commission per contract per round trip")->capture_default_str();
    app.add_option("--contracts", o.contracts, "Contracts per trade")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--eval-start", o.eval_start, "First evaluated session (YYYY-MM-DD)");
    app.add_option("--eval-end", o.eval_end, "Last evaluated session (YYYY-MM-DD)");
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
}

StrategyConfig strategy_config(const Options& o, std::size_t m, std::size_t w) {
    StrategyConfig c;
    c.m = m;
    c.w = w;
    c.counting = o.counting;
    c.horizon = o.horizon;
    c.zeta_source = o.zeta_source;
    c.unseen = o.unseen;
    c.zero = o.zero;
    c.fit.min_rank = o.fit_min_rank;
    c.fit.max_rank = o.fit_max_rank;
    c.seed = o.seed;
    c.threads = o.threads;
    return c;
}

ContractSpec contract_spec(const Options& o) {
    ContractSpec s;
    s.point_value = Decimal::parse(o.point_value);
    s.margin_rate = Decimal::parse(o.margin_rate);
    s.commission = Decimal::parse(o.commission);
    s.contracts = o.contracts;
    validate(s);
    return s;
}

PriceSeries load(const Options& o) {
    CsvFormat fmt;
    fmt.date_column = o.date_column;
    fmt.open_column = o.open_column;
    fmt.close_column = o.close_column;
    fmt.sort_unordered = o.sort_rows;
    return load_csv(o.data, fmt);
}

RunManifest manifest(const Options& o, const std::string& command) {
    RunManifest mf;
    mf.input_path = o.data;
    mf.input_sha256 = sha256_file(o.data);
    mf.created_at = current_timestamp();
    mf.seeds = {o.seed};
    mf.config = {
        {"command", command},
        {"m", join(o.m_values)},
        {"w", join(o.w_values)},
        {"horizon", std::to_string(o.horizon)},
        {"counting", name_of(kCounting, o.counting)},
        {"zero_as", name_of(kZero, o.zero)},
        {"unseen", name_of(kUnseen, o.unseen)},
        {"zeta_source", name_of(kZetaSource, o.zeta_source)},
        {"zero_move", name_of(kZeroMove, o.zero_move)},
        {"rank_tiebreak", "lexicographic_ascending"},
        {"abstain_on_tie", "true"},
        {"fit_min_rank", std::to_string(o.fit_min_rank)},
        {"fit_max_rank", std::to_string(o.fit_max_rank)},
        {"point_value", o.point_value},
        {"margin_rate", o.margin_rate},
        {"commission", o.commission},
        {"contracts", std::to_string(o.contracts)},
        {"eval_start", o.eval_start},
        {"eval_end", o.eval_end},
        {"date_column", o.date_column},
        {"open_column", o.open_column},
        {"close_column", o.close_column},
        {"sort", o.sort_rows ? "true" : "false"},
    };
    if (command == "analyze") {
        mf.config.emplace_back("states", std::to_string(o.states));
        mf.config.emplace_back("threshold", o.threshold);
        mf.config.emplace_back("sweep_w", join(o.sweep_w));
    }
    return mf;
}

void require_single(const Options& o) {
    if (o.m_values.size() != 1 || o.w_values.size() != 1) {
        throw InputError("this command takes exactly one --m and one --w");
    }
}

int run_analyze(const Options& o) {
    const auto bars = load(o);
    Alphabet alphabet = Alphabet::binary(o.zero);
    if (o.states == 3) {
        if (o.threshold.empty()) {
            throw InputError("--states 3 needs --threshold");
        }
        alphabet = Alphabet::three_state(Decimal::parse(o.threshold));
    } else if (o.states != 2) {
        throw InputError("--states must be 2 or 3");
    }
    const auto text = symbolize(daylight_increments(bars), alphabet);
    const fs::path out = o.out;
    FitOptions fit{o.fit_min_rank, o.fit_max_rank, false};
    for (auto m : o.m_values) {
        for (auto w : o.w_values) {
            if (w < m || w > text.size()) {
                throw InputError("window w=" + std::to_string(w) + " must lie in [m, " + std::to_string(text.size()) +
                                 "]");
            }
            auto window = text.view().substr(text.size() - w);
            RankPlotData d;
            d.w = w;
            d.m = m;
            d.seed = position_seed(o.seed, text.size());
            d.real_table = count_words(window, m, o.counting);
            d.shuffled_table = count_words(shuffle_letters(window, d.seed), m, o.counting);
            d.real_fit = try_fit_zipf(d.real_table, fit);
            d.shuffled_fit = try_fit_zipf(d.shuffled_table, fit);
            emit_rank_plot_data(d, out);
            std::cout << "m=" << m << " w=" << w << " zeta_real="
                      << (d.real_fit ? format_double(d.real_fit->zeta) : "NA") << " zeta_shuffled="
                      << (d.shuffled_fit ? format_double(d.shuffled_fit->zeta) : "NA") << '\n';
        }
        const auto& sweep_w = o.sweep_w.empty() ? o.w_values : o.sweep_w;
        auto rows = zeta_vs_window_sweep(text, m, sweep_w, o.counting, o.seed, fit, o.threads);
        emit_zeta_sweep(rows, m, out);
    }
    emit_manifest(manifest(o, "analyze"), out);
    return 0;
}

int run_predict(const Options& o) {
    require_single(o);
    const auto bars = load(o);
    const auto text = symbolize(daylight_increments(bars), Alphabet::binary(o.zero));
    const auto cfg = strategy_config(o, o.m_values[0], o.w_values[0]);
    const fs::path out = o.out;
    std::error_code ec;
    fs::create_directories(out, ec);
    const auto path = out / ("predictions_w" + std::to_string(cfg.w) + "_m" + std::to_string(cfg.m) + ".jsonl");
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw OutputError("cannot write '" + path.string() + "'");
    }
    if (text.size() >= cfg.w + cfg.horizon) {
        write_predictions_jsonl(file, run_walkforward(text, cfg));
    }
    emit_manifest(manifest(o, "predict"), out);
    std::cout << prediction_json(forecast_next(text, cfg)) << '\n';
    return 0;
}

std::vector<SweepCell> run_grid(const Options& o, const PriceSeries& bars) {
    SweepConfig sc;
    sc.m_values = o.m_values;
    sc.w_values = o.w_values;
    sc.base = strategy_config(o, o.m_values.front(), o.w_values.front());
    sc.zero_move = o.zero_move;
    if (!o.eval_start.empty()) {
        sc.eval_start = parse_date(o.eval_start);
    }
    if (!o.eval_end.empty()) {
        sc.eval_end = parse_date(o.eval_end);
    }
    return sweep(bars, sc, contract_spec(o));
}

void print_cells(const std::vector<SweepCell>& cells) {
    std::cout << "w\tm\taccuracy\tprofit\ttrades\n";
    for (const auto& c : cells) {
        std::cout << c.w << '\t' << c.m << '\t'
                  << (c.result.accuracy ? format_double(*c.result.accuracy) : "NA") << '\t' << c.result.total_net
                  << '\t' << c.result.trades.size() << '\n';
    }
}

int run_backtest(const Options& o) {
    require_single(o);
    const auto bars = load(o);
    auto cells = run_grid(o, bars);
    const fs::path out = o.out;
    emit_summary(cells, manifest(o, "backtest"), out);
    emit_equity(cells.front(), out);
    emit_trades(cells.front(), out);
    print_cells(cells);
    return 0;
}

int run_sweep(const Options& o) {
    const auto bars = load(o);
    auto cells = run_grid(o, bars);
    const fs::path out = o.out;
    emit_summary(cells, manifest(o, "sweep"), out);
    for (const auto& c : cells) {
        emit_equity(c, out);
    }
    print_cells(cells);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zipf rank-frequency strategy for index futures day trading", "zipf-strategy"};
    app.set_config("--config", "", "key=value file mirroring the long options; flags override it");
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    Options o;
    add_common(app, o);
    app.add_option("--sweep-w", o.sweep_w, "analyze: window lengths for the exponent-vs-window curve")
        ->delimiter(',');
    app.add_option("--states", o.states, "analyze: alphabet size, 2 or 3")->capture_default_str();
    app.add_option("--threshold", o.threshold, "analyze: stable band half-width for --states 3");
    app.fallthrough();

    auto* analyze = app.add_subcommand("analyze", "Rank tables, exponent fits and exponent-vs-window curves");
    auto* predict = app.add_subcommand("predict", "Walk-forward predictions and the next-session forecast");
    auto* backtest = app.add_subcommand("backtest", "Backtest one (w, m) cell");
    auto* sweep = app.add_subcommand("sweep", "Backtest a grid of (w, m) cells over a common period");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (o.m_values.empty()) {
        o.m_values = sweep->parsed() ? std::vector<std::size_t>{4, 5, 6} : std::vector<std::size_t>{6};
    }
    if (o.w_values.empty()) {
        o.w_values = sweep->parsed() || analyze->parsed() ? std::vector<std::size_t>{400, 500, 600, 700, 800}
                                                          : std::vector<std::size_t>{500};
    }

    try {
        if (analyze->parsed()) {
            return run_analyze(o);
        }
        if (predict->parsed()) {
            return run_predict(o);
        }
        if (backtest->parsed()) {
            return run_backtest(o);
        }
        return run_sweep(o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
