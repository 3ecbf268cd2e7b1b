#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zipfstrat/zipf.hpp"

namespace zipfstrat {

enum class ZetaSource { real, shuffled };
enum class UnseenPolicy {
    /// Unobserved candidate words rank one past the last observed word.
    rank,
    /// Any unobserved candidate suppresses the prediction.
    abstain,
};

struct StrategyConfig {
    std::size_t m = 6;
    std::size_t w = 500;
    CountingMode counting = CountingMode::block;
    /// Sessions ahead of the last known letter that the prediction targets.
    std::size_t horizon = 1;
    ZetaSource zeta_source = ZetaSource::real;
    UnseenPolicy unseen = UnseenPolicy::rank;
    ZeroPolicy zero = ZeroPolicy::down;
    FitOptions fit;
    /// Base seed for shuffled-window fits.
    std::uint64_t seed = 0;
    std::size_t threads = 0;
};

/// Throws InputError unless 1 <= horizon <= 3 and w >= m >= horizon + 1.
void validate(const StrategyConfig& config);

/// All completions of a known prefix of length m - horizon, in ascending
/// lexicographic order. Binary alphabets only.
std::vector<std::string> candidate_words(std::string_view prefix, std::size_t m, std::size_t horizon,
                                         const Alphabet& alphabet = Alphabet::binary());

struct CandidateRank {
    std::string word;
    /// nullopt only under UnseenPolicy::abstain for an unobserved word.
    std::optional<std::size_t> rank;
    bool unseen = false;
};

struct CandidateRanks {
    std::vector<CandidateRank> candidates;
    std::size_t table_size = 0;
};

CandidateRanks rank_candidates(const std::vector<std::string>& candidates, const RankTable& table,
                               UnseenPolicy policy = UnseenPolicy::rank);

enum class Direction { up, down, abstain };
enum class AbstainReason { none, tie, unseen_word, degenerate_window };

std::string_view to_string(Direction d);
std::string_view to_string(AbstainReason r);

struct Prediction {
    /// Letter index of the predicted session (may equal the text length
    /// for a forecast beyond the data).
    std::size_t target = 0;
    std::optional<std::size_t> session;
    std::optional<Date> date;

    double p_up = 0.5;
    double p_down = 0.5;
    Direction direction = Direction::abstain;
    AbstainReason reason = AbstainReason::none;
    double zeta = 0.0;
    bool zeta_clamped = false;

    std::size_t m = 0;
    std::size_t w = 0;
    std::size_t horizon = 1;
    /// P(up) for each unknown day, nearest first; the last is p_up.
    std::vector<double> day_p_up;
    std::vector<CandidateRank> candidates;
};

/// Power-law probabilities: each candidate c gets R_c^-zeta normalised over
/// all candidates, then days are marginalised by summing candidates that
/// share that day's letter. The target is the last unknown letter. Up wins
/// iff its weight is strictly larger; an exact tie abstains.
Prediction predict(const CandidateRanks& ranks, double zeta, std::size_t horizon = 1,
                   const Alphabet& alphabet = Alphabet::binary());

/// Walk-forward over the text: for every target letter t >= w + horizon - 1
/// the rank table is built from the w letters ending at t - horizon, so no
/// letter at or after t - horizon + 1 is read. Chronological order.
std::vector<Prediction> run_walkforward(const SymbolSequence& text, const StrategyConfig& config);

/// Prediction for the session `horizon` steps past the end of the text.
Prediction forecast_next(const SymbolSequence& text, const StrategyConfig& config);

/// Realized direction of one letter: up, down, or abstain for any other
/// state.
Direction letter_direction(char letter, const Alphabet& alphabet);

}  // namespace zipfstrat
