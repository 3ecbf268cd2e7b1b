#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zipfstrat/backtest.hpp"
#include "zipfstrat/strategy.hpp"
#include "zipfstrat/zipf.hpp"

namespace zipfstrat {

std::string_view version();

/// Everything needed to reproduce a run. Outputs depend only on these
/// fields, so two runs with equal manifests write identical bytes.
struct RunManifest {
    std::string tool_version{version()};
    std::string input_path;
    /// Lower-case hex SHA-256 of the input file; empty for synthetic input.
    std::string input_sha256;
    /// Resolved configuration, in emission order.
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::uint64_t> seeds;
    /// ISO-8601 UTC. Taken from SOURCE_DATE_EPOCH when set.
    std::string created_at;
};

std::string sha256_file(const std::filesystem::path& path);
/// UTC timestamp honouring SOURCE_DATE_EPOCH.
std::string current_timestamp();

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// `rank<TAB>frequency<TAB>word`, header included.
void write_rank_table_tsv(std::ostream& out, const RankTable& table);
std::string rank_table_json(const RankTable& table, const std::optional<ZipfFit>& fit);
std::string zipf_fit_json(const ZipfFit& fit);

/// One JSON object per line.
void write_predictions_jsonl(std::ostream& out, std::span<const Prediction> predictions);
std::string prediction_json(const Prediction& p);

struct RankPlotData {
    std::size_t w = 0;
    std::size_t m = 0;
    RankTable real_table;
    std::optional<ZipfFit> real_fit;
    RankTable shuffled_table;
    std::optional<ZipfFit> shuffled_fit;
    std::uint64_t seed = 0;
};

/// rank_w{W}_m{M}.tsv with rank, observed and fitted frequencies for the
/// real and shuffled text (NA where a side has no value), plus a JSON
/// sidecar rank_w{W}_m{M}.json with both fits. Returns the paths written.
std::vector<std::filesystem::path> emit_rank_plot_data(const RankPlotData& data, const std::filesystem::path& dir);

/// zeta_sweep_m{M}.tsv.
std::filesystem::path emit_zeta_sweep(std::span<const ZetaSweepRow> rows, std::size_t m,
                                      const std::filesystem::path& dir);

/// equity_w{W}_m{M}.tsv: `date<TAB>cumulative_pnl`.
std::filesystem::path emit_equity(const SweepCell& cell, const std::filesystem::path& dir);

/// trades_w{W}_m{M}.tsv, one row per executed trade.
std::filesystem::path emit_trades(const SweepCell& cell, const std::filesystem::path& dir);

/// summary.tsv, summary.json and manifest.json. Throws InputError on an
/// empty grid.
std::vector<std::filesystem::path> emit_summary(std::span<const SweepCell> cells, const RunManifest& manifest,
                                                const std::filesystem::path& dir);

std::filesystem::path emit_manifest(const RunManifest& manifest, const std::filesystem::path& dir);
std::string manifest_json(const RunManifest& manifest);

}  // namespace zipfstrat
