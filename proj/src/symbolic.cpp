#include "zipfstrat/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "zipfstrat/errors.hpp"

namespace zipfstrat {
namespace {

std::string default_labels(int states) {
    switch (states) {
        case 2:
            return "du";
        case 3:
            return "dsu";
        default:
            throw InputError("no default labels for " + std::to_string(states) + " states");
    }
}

// Unbiased draw in [0, bound) by rejection; independent of <random>
// distributions, whose output is implementation-defined.
std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t floor = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = gen();
        if (r >= floor) {
            return r % bound;
        }
    }
}

}  // namespace

Alphabet Alphabet::binary(ZeroPolicy zero) { return Alphabet(default_labels(2), {}, zero); }

Alphabet Alphabet::three_state(Decimal threshold) { return Alphabet(default_labels(3), {threshold}); }

Alphabet::Alphabet(std::string labels, std::vector<Decimal> thresholds, ZeroPolicy zero)
    : labels_(std::move(labels)), thresholds_(std::move(thresholds)), zero_(zero) {
    if (labels_.size() < 2) {
        throw InputError("alphabet needs at least two states");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (!std::isgraph(static_cast<unsigned char>(labels_[i]))) {
            throw InputError("alphabet labels must be printable characters");
        }
        if (labels_.find(labels_[i], i + 1) != std::string::npos) {
            throw InputError(std::string("duplicate alphabet label '") + labels_[i] + "'");
        }
    }
    const std::size_t expected = (labels_.size() - 1) / 2;
    if (thresholds_.size() != expected) {
        throw InputError(std::to_string(labels_.size()) + "-state alphabet needs " + std::to_string(expected) +
                         " threshold(s), got " + std::to_string(thresholds_.size()));
    }
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        if (thresholds_[i].sign() <= 0) {
            throw InputError("alphabet thresholds must be positive");
        }
        if (i > 0 && !(thresholds_[i - 1] < thresholds_[i])) {
            throw InputError("alphabet thresholds must be strictly increasing");
        }
    }
}

int Alphabet::index_of(char c) const {
    auto pos = labels_.find(c);
    return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

int Alphabet::classify(Decimal x) const {
    const int n = states();
    const Decimal mag = x.abs();
    const int level = static_cast<int>(
        std::count_if(thresholds_.begin(), thresholds_.end(), [&](Decimal t) { return mag > t; }));
    if (n % 2 == 1) {
        const int centre = n / 2;
        return centre + x.sign() * level;
    }
    int sign = x.sign();
    if (sign == 0) {
        switch (zero_) {
            case ZeroPolicy::up:
                sign = 1;
                break;
            case ZeroPolicy::down:
                sign = -1;
                break;
            case ZeroPolicy::drop:
                return -1;
        }
    }
    return sign > 0 ? n / 2 + level : n / 2 - 1 - level;
}

SymbolSequence symbolize(const IncrementSeries& increments, const Alphabet& alphabet) {
    SymbolSequence seq;
    seq.alphabet = alphabet;
    seq.symbols.reserve(increments.size());
    const bool dated = increments.dates.size() == increments.values.size();
    for (std::size_t i = 0; i < increments.values.size(); ++i) {
        int state = alphabet.classify(increments.values[i]);
        if (state < 0) {
            continue;
        }
        seq.symbols.push_back(alphabet.labels()[static_cast<std::size_t>(state)]);
        seq.sessions.push_back(i);
        if (dated) {
            seq.dates.push_back(increments.dates[i]);
        }
    }
    return seq;
}

SymbolSequence make_sequence(std::string symbols, const Alphabet& alphabet) {
    for (char c : symbols) {
        if (!alphabet.contains(c)) {
            throw InputError(std::string("symbol '") + c + "' is not in alphabet '" + alphabet.labels() + "'");
        }
    }
    SymbolSequence seq;
    seq.symbols = std::move(symbols);
    seq.alphabet = alphabet;
    return seq;
}

std::string shuffle_letters(std::string_view letters, std::uint64_t seed) {
    std::string out(letters);
    std::mt19937_64 gen(seed);
    for (std::size_t i = out.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(bounded(gen, i));
        std::swap(out[i - 1], out[j]);
    }
    return out;
}

SymbolSequence shuffle(const SymbolSequence& sequence, std::uint64_t seed) {
    SymbolSequence out;
    out.alphabet = sequence.alphabet;
    out.symbols = shuffle_letters(sequence.symbols, seed);
    return out;
}

std::string mirror(std::string_view letters, const Alphabet& alphabet) {
    std::string out(letters);
    const auto& labels = alphabet.labels();
    for (char& c : out) {
        int i = alphabet.index_of(c);
        if (i < 0) {
            throw InputError(std::string("symbol '") + c + "' is not in alphabet");
        }
        c = labels[labels.size() - 1 - static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace zipfstrat
