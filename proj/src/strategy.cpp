#include "zipfstrat/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "zipfstrat/errors.hpp"
#include "zipfstrat/parallel.hpp"

namespace zipfstrat {

void validate(const StrategyConfig& config) {
    if (config.horizon < 1 || config.horizon > 3) {
        throw InputError("horizon must be 1, 2 or 3");
    }
    if (config.m < config.horizon + 1) {
        throw InputError("word length m=" + std::to_string(config.m) + " must exceed the horizon (" +
                         std::to_string(config.horizon) + ")");
    }
    if (config.w < config.m) {
        throw InputError("window length w=" + std::to_string(config.w) + " is shorter than word length m=" +
                         std::to_string(config.m));
    }
}

std::vector<std::string> candidate_words(std::string_view prefix, std::size_t m, std::size_t horizon,
                                         const Alphabet& alphabet) {
    if (!alphabet.is_binary()) {
        throw InputError("candidate words are defined for binary alphabets only");
    }
    if (horizon == 0 || horizon > m) {
        throw InputError("horizon " + std::to_string(horizon) + " is incompatible with word length " +
                         std::to_string(m));
    }
    if (prefix.size() != m - horizon) {
        throw InputError("prefix has " + std::to_string(prefix.size()) + " letters, expected " +
                         std::to_string(m - horizon));
    }
    // Labels are ordered down-first, so counting in binary enumerates the
    // completions lexicographically when down < up as characters.
    const std::size_t n = std::size_t{1} << horizon;
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t code = 0; code < n; ++code) {
        std::string word(prefix);
        for (std::size_t bit = horizon; bit-- > 0;) {
            word.push_back(((code >> bit) & 1U) ? alphabet.up() : alphabet.down());
        }
        out.push_back(std::move(word));
    }
    std::sort(out.begin(), out.end());
    return out;
}

CandidateRanks rank_candidates(const std::vector<std::string>& candidates, const RankTable& table,
                               UnseenPolicy policy) {
    CandidateRanks out;
    out.table_size = table.size();
    out.candidates.reserve(candidates.size());
    for (const auto& word : candidates) {
        CandidateRank c{word, table.rank_of(word), false};
        if (!c.rank) {
            c.unseen = true;
            if (policy == UnseenPolicy::rank) {
                c.rank = table.size() + 1;
            }
        }
        out.candidates.push_back(std::move(c));
    }
    return out;
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::up:
            return "up";
        case Direction::down:
            return "down";
        case Direction::abstain:
            break;
    }
    return "abstain";
}

std::string_view to_string(AbstainReason r) {
    switch (r) {
        case AbstainReason::none:
            return "none";
        case AbstainReason::tie:
            return "tie";
        case AbstainReason::unseen_word:
            return "unseen_word";
        case AbstainReason::degenerate_window:
            break;
    }
    return "degenerate_window";
}

Prediction predict(const CandidateRanks& ranks, double zeta, std::size_t horizon, const Alphabet& alphabet) {
    if (!(zeta >= 0.0) || !std::isfinite(zeta)) {
        throw DomainError("zeta must be finite and non-negative");
    }
    if (ranks.candidates.size() != (std::size_t{1} << horizon)) {
        throw InputError("expected " + std::to_string(std::size_t{1} << horizon) + " candidates for horizon " +
                         std::to_string(horizon));
    }
    Prediction p;
    p.zeta = zeta;
    p.horizon = horizon;
    p.candidates = ranks.candidates;
    for (const auto& c : ranks.candidates) {
        if (!c.rank) {
            p.reason = AbstainReason::unseen_word;
            return p;
        }
        if (*c.rank == 0) {
            throw DomainError("rank must be positive");
        }
    }
    const std::size_t m = ranks.candidates.front().word.size();
    if (m < horizon) {
        throw InputError("candidate words are shorter than the horizon");
    }
    std::vector<double> weights;
    weights.reserve(ranks.candidates.size());
    double total = 0.0;
    for (const auto& c : ranks.candidates) {
        weights.push_back(std::pow(static_cast<double>(*c.rank), -zeta));
        total += weights.back();
    }
    double up_weight = 0.0;
    double down_weight = 0.0;
    for (std::size_t day = 0; day < horizon; ++day) {
        const std::size_t pos = m - horizon + day;
        up_weight = 0.0;
        down_weight = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            (ranks.candidates[i].word[pos] == alphabet.up() ? up_weight : down_weight) += weights[i];
        }
        p.day_p_up.push_back(up_weight / total);
    }
    p.p_up = up_weight / total;
    p.p_down = down_weight / total;
    if (up_weight > down_weight) {
        p.direction = Direction::up;
    } else if (up_weight < down_weight) {
        p.direction = Direction::down;
    } else {
        p.reason = AbstainReason::tie;
    }
    return p;
}

namespace {

// Prediction from the window text[end - w, end) for the letter end + horizon - 1.
Prediction predict_from_window(const SymbolSequence& text, std::size_t end, const StrategyConfig& config) {
    auto window = text.view().substr(end - config.w, config.w);
    const auto table = count_words(window, config.m, config.counting);
    std::optional<ZipfFit> fit;
    if (config.zeta_source == ZetaSource::real) {
        fit = try_fit_zipf(table, config.fit);
    } else {
        auto shuffled = shuffle_letters(window, position_seed(config.seed, end));
        fit = try_fit_zipf(count_words(shuffled, config.m, config.counting), config.fit);
    }
    const auto prefix = window.substr(config.w - (config.m - config.horizon));
    auto ranks = rank_candidates(candidate_words(prefix, config.m, config.horizon, text.alphabet), table,
                                 config.unseen);
    Prediction p;
    if (fit) {
        p = predict(ranks, fit->zeta, config.horizon, text.alphabet);
        p.zeta_clamped = fit->clamped;
    } else {
        p.horizon = config.horizon;
        p.candidates = std::move(ranks.candidates);
        p.reason = AbstainReason::degenerate_window;
    }
    p.m = config.m;
    p.w = config.w;
    p.target = end + config.horizon - 1;
    if (p.target < text.size()) {
        if (text.sessions.size() == text.size()) {
            p.session = text.sessions[p.target];
        }
        if (text.dates.size() == text.size()) {
            p.date = text.dates[p.target];
        }
    }
    return p;
}

void check_binary(const SymbolSequence& text) {
    if (!text.alphabet.is_binary()) {
        throw InputError("the prediction rule needs a binary alphabet");
    }
}

}  // namespace

std::vector<Prediction> run_walkforward(const SymbolSequence& text, const StrategyConfig& config) {
    validate(config);
    check_binary(text);
    const std::size_t minimum = config.w + config.horizon;
    if (text.size() < minimum) {
        throw InputError("walk-forward needs at least " + std::to_string(minimum) + " sessions (w + horizon), got " +
                         std::to_string(text.size()));
    }
    const std::size_t first_end = config.w;
    const std::size_t count = text.size() - minimum + 1;
    std::vector<Prediction> out(count);
    detail::parallel_for(
        count, [&](std::size_t i) { out[i] = predict_from_window(text, first_end + i, config); }, config.threads);
    return out;
}

Prediction forecast_next(const SymbolSequence& text, const StrategyConfig& config) {
    validate(config);
    check_binary(text);
    if (text.size() < config.w) {
        throw InputError("forecast needs at least " + std::to_string(config.w) + " sessions, got " +
                         std::to_string(text.size()));
    }
    return predict_from_window(text, text.size(), config);
}

Direction letter_direction(char letter, const Alphabet& alphabet) {
    if (letter == alphabet.up()) {
        return Direction::up;
    }
    if (letter == alphabet.down()) {
        return Direction::down;
    }
    return Direction::abstain;
}

}  // namespace zipfstrat
