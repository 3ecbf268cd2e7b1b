#include "zipfstrat/report.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "zipfstrat/errors.hpp"

#ifndef ZIPFSTRAT_VERSION
#define ZIPFSTRAT_VERSION "0.0.0"
#endif

namespace zipfstrat {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json number_or_null(const std::optional<double>& v) {
    return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

json decimal_or_null(const std::optional<Decimal>& v) { return v ? json(v->to_double()) : json(nullptr); }

json date_or_null(const std::optional<Date>& d) { return d ? json(format_date(*d)) : json(nullptr); }

std::string na(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

std::string na(const std::optional<Decimal>& v) { return v ? v->to_string() : "NA"; }

std::string na(const std::optional<Date>& d) { return d ? format_date(*d) : "NA"; }

json fit_object(const ZipfFit& fit) {
    return json{{"zeta", fit.zeta},
                {"raw_slope", fit.raw_slope},
                {"intercept", fit.intercept},
                {"r_squared", fit.r_squared},
                {"n_points", fit.n_points},
                {"clamped", fit.clamped}};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw OutputError("cannot create output directory '" + dir.string() + "'");
    }
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw OutputError("cannot write '" + path.string() + "'");
    }
    out << content;
    out.flush();
    if (!out) {
        throw OutputError("write failed for '" + path.string() + "'");
    }
}

std::string cell_suffix(std::size_t w, std::size_t m) {
    return "w" + std::to_string(w) + "_m" + std::to_string(m);
}

std::optional<double> fitted(const std::optional<ZipfFit>& fit, std::size_t rank) {
    if (!fit) {
        return std::nullopt;
    }
    return std::exp(fit->intercept + fit->raw_slope * std::log(static_cast<double>(rank)));
}

}  // namespace

std::string_view version() { return ZIPFSTRAT_VERSION; }

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 initialisation failed");
    }
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string current_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(epoch, epoch + std::char_traits<char>::length(epoch), v);
        if (ec == std::errc{} && *ptr == '\0') {
            t = static_cast<std::time_t>(v);
        }
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v) {
    if (!std::isfinite(v)) {
        return "NA";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_rank_table_tsv(std::ostream& out, const RankTable& table) {
    out << "rank\tfrequency\tword\n";
    for (const auto& e : table.entries) {
        out << e.rank << '\t' << format_double(e.frequency) << '\t' << e.word << '\n';
    }
}

std::string zipf_fit_json(const ZipfFit& fit) { return fit_object(fit).dump(); }

std::string rank_table_json(const RankTable& table, const std::optional<ZipfFit>& fit) {
    json entries = json::array();
    for (const auto& e : table.entries) {
        entries.push_back({{"rank", e.rank}, {"word", e.word}, {"count", e.count}, {"frequency", e.frequency}});
    }
    json doc{{"total_words", table.total_words}, {"entries", std::move(entries)},
             {"fit", fit ? fit_object(*fit) : json(nullptr)}};
    return doc.dump(2) + "\n";
}

std::string prediction_json(const Prediction& p) {
    json candidates = json::array();
    for (const auto& c : p.candidates) {
        candidates.push_back({{"word", c.word}, {"rank", c.rank ? json(*c.rank) : json(nullptr)}, {"unseen", c.unseen}});
    }
    json doc{{"date", date_or_null(p.date)},
             {"p_up", p.p_up},
             {"p_down", p.p_down},
             {"direction", std::string(to_string(p.direction))},
             {"zeta", p.zeta},
             {"m", p.m},
             {"w", p.w},
             {"horizon", p.horizon},
             {"target", p.target},
             {"reason", std::string(to_string(p.reason))},
             {"zeta_clamped", p.zeta_clamped},
             {"day_p_up", p.day_p_up},
             {"candidates", std::move(candidates)}};
    return doc.dump();
}

void write_predictions_jsonl(std::ostream& out, std::span<const Prediction> predictions) {
    for (const auto& p : predictions) {
        out << prediction_json(p) << '\n';
    }
}

std::vector<fs::path> emit_rank_plot_data(const RankPlotData& data, const fs::path& dir) {
    ensure_dir(dir);
    const auto base = "rank_" + cell_suffix(data.w, data.m);
    std::ostringstream tsv;
    tsv << "rank\tfreq_real\tfreq_shuffled\tfit_real\tfit_shuffled\tword_real\tword_shuffled\n";
    const std::size_t rows = std::max(data.real_table.size(), data.shuffled_table.size());
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t rank = i + 1;
        const bool has_real = i < data.real_table.size();
        const bool has_shuffled = i < data.shuffled_table.size() && data.shuffled_fit;
        tsv << rank << '\t' << (has_real ? format_double(data.real_table.entries[i].frequency) : "NA") << '\t'
            << (has_shuffled ? format_double(data.shuffled_table.entries[i].frequency) : "NA") << '\t'
            << na(fitted(data.real_fit, rank)) << '\t' << na(fitted(data.shuffled_fit, rank)) << '\t'
            << (has_real ? data.real_table.entries[i].word : "NA") << '\t'
            << (has_shuffled ? data.shuffled_table.entries[i].word : "NA") << '\n';
    }
    json side{{"w", data.w},
              {"m", data.m},
              {"seed", data.seed},
              {"zeta_real", data.real_fit ? json(data.real_fit->zeta) : json(nullptr)},
              {"zeta_shuffled", data.shuffled_fit ? json(data.shuffled_fit->zeta) : json(nullptr)},
              {"real", data.real_fit ? fit_object(*data.real_fit) : json(nullptr)},
              {"shuffled", data.shuffled_fit ? fit_object(*data.shuffled_fit) : json(nullptr)},
              {"distinct_words_real", data.real_table.size()},
              {"distinct_words_shuffled", data.shuffled_table.size()},
              {"total_words", data.real_table.total_words}};
    const auto tsv_path = dir / (base + ".tsv");
    const auto json_path = dir / (base + ".json");
    write_file(tsv_path, tsv.str());
    write_file(json_path, side.dump(2) + "\n");
    return {tsv_path, json_path};
}

fs::path emit_zeta_sweep(std::span<const ZetaSweepRow> rows, std::size_t m, const fs::path& dir) {
    ensure_dir(dir);
    std::ostringstream tsv;
    tsv << "w\tpositions\tmean_zeta_real\tsd_zeta_real\tmean_zeta_shuffled\tsd_zeta_shuffled\t"
           "fraction_real_above\tdegenerate_real\tdegenerate_shuffled\n";
    for (const auto& r : rows) {
        tsv << r.w << '\t' << r.positions << '\t' << na(r.mean_real) << '\t' << na(r.sd_real) << '\t'
            << na(r.mean_shuffled) << '\t' << na(r.sd_shuffled) << '\t' << na(r.fraction_real_above) << '\t'
            << r.degenerate_real << '\t' << r.degenerate_shuffled << '\n';
    }
    const auto path = dir / ("zeta_sweep_m" + std::to_string(m) + ".tsv");
    write_file(path, tsv.str());
    return path;
}

fs::path emit_equity(const SweepCell& cell, const fs::path& dir) {
    ensure_dir(dir);
    std::ostringstream tsv;
    tsv << "date\tcumulative_pnl\n";
    for (const auto& p : cell.result.equity) {
        tsv << format_date(p.date) << '\t' << p.cumulative << '\n';
    }
    const auto path = dir / ("equity_" + cell_suffix(cell.w, cell.m) + ".tsv");
    write_file(path, tsv.str());
    return path;
}

fs::path emit_trades(const SweepCell& cell, const fs::path& dir) {
    ensure_dir(dir);
    std::ostringstream tsv;
    tsv << "date\tside\topen\tclose\tpoints\tgross\tcommission\tnet\tmargin\tcorrect\tscored\n";
    for (const auto& t : cell.result.trades) {
        tsv << format_date(t.date) << '\t' << to_string(t.side) << '\t' << t.open << '\t' << t.close << '\t'
            << t.points << '\t' << t.gross << '\t' << t.commission << '\t' << t.net << '\t' << t.margin << '\t'
            << (t.correct ? 1 : 0) << '\t' << (t.scored ? 1 : 0) << '\n';
    }
    const auto path = dir / ("trades_" + cell_suffix(cell.w, cell.m) + ".tsv");
    write_file(path, tsv.str());
    return path;
}

std::string manifest_json(const RunManifest& manifest) {
    json config = json::object();
    for (const auto& [k, v] : manifest.config) {
        config[k] = v;
    }
    json doc{{"tool", "zipf-strategy"},
             {"tool_version", manifest.tool_version},
             {"input_path", manifest.input_path},
             {"input_sha256", manifest.input_sha256},
             {"config", std::move(config)},
             {"seeds", manifest.seeds},
             {"created_at", manifest.created_at}};
    return doc.dump(2) + "\n";
}

fs::path emit_manifest(const RunManifest& manifest, const fs::path& dir) {
    ensure_dir(dir);
    const auto path = dir / "manifest.json";
    write_file(path, manifest_json(manifest));
    return path;
}

std::vector<fs::path> emit_summary(std::span<const SweepCell> cells, const RunManifest& manifest,
                                   const fs::path& dir) {
    if (cells.empty()) {
        throw InputError("cannot emit a summary for an empty sweep grid");
    }
    ensure_dir(dir);
    std::ostringstream tsv;
    tsv << "w\tm\taccuracy\tprofit\troi\ttrades\tpredictions\tabstentions\tscored\tcorrect\taverage_margin\t"
           "first_date\tlast_date\n";
    json rows = json::array();
    for (const auto& c : cells) {
        const auto& r = c.result;
        tsv << c.w << '\t' << c.m << '\t' << na(r.accuracy) << '\t' << r.total_net << '\t' << na(r.roi) << '\t'
            << r.trades.size() << '\t' << r.predictions << '\t' << r.abstentions << '\t' << r.scored << '\t'
            << r.correct << '\t' << na(r.average_margin) << '\t' << na(c.first_date) << '\t' << na(c.last_date)
            << '\n';
        rows.push_back({{"w", c.w},
                        {"m", c.m},
                        {"accuracy", number_or_null(r.accuracy)},
                        {"profit", r.total_net.to_double()},
                        {"gross_profit", r.total_gross.to_double()},
                        {"commission", r.total_commission.to_double()},
                        {"roi", decimal_or_null(r.roi)},
                        {"trades", r.trades.size()},
                        {"predictions", r.predictions},
                        {"abstentions", r.abstentions},
                        {"scored", r.scored},
                        {"correct", r.correct},
                        {"average_margin", decimal_or_null(r.average_margin)},
                        {"first_date", date_or_null(c.first_date)},
                        {"last_date", date_or_null(c.last_date)}});
    }
    json doc{{"cells", std::move(rows)}};
    const auto tsv_path = dir / "summary.tsv";
    const auto json_path = dir / "summary.json";
    write_file(tsv_path, tsv.str());
    write_file(json_path, doc.dump(2) + "\n");
    return {tsv_path, json_path, emit_manifest(manifest, dir)};
}

}  // namespace zipfstrat
