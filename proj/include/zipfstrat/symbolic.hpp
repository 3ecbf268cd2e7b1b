#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zipfstrat/decimal.hpp"
#include "zipfstrat/ingest.hpp"

namespace zipfstrat {

/// What a zero increment becomes under an alphabet with an even number of
/// states (no central "stable" state). Odd alphabets map zero to the centre.
enum class ZeroPolicy { up, down, drop };

/// A (2k+1)-state discretization of increments, for 2k = 1, 2, 3, ...
///
/// Labels run from the most negative state to the most positive. The
/// thresholds are the positive band edges, mirrored onto the negative side:
/// an even alphabet splits at zero and then at each threshold, an odd one has
/// a central band [-t0, t0] and further edges beyond it. Either way there
/// are (states - 1) / 2 thresholds, so the binary alphabet has none and the
/// three-state alphabet has the single threshold l.
class Alphabet {
public:
    /// u/d, sign split at zero.
    static Alphabet binary(ZeroPolicy zero = ZeroPolicy::down);
    /// u/s/d with `s` for -l <= x <= l; l must be positive.
    static Alphabet three_state(Decimal threshold);

    /// General form. Throws InputError unless labels are distinct, single
    /// printable characters, and thresholds are positive and strictly
    /// increasing with the count described above.
    Alphabet(std::string labels, std::vector<Decimal> thresholds, ZeroPolicy zero = ZeroPolicy::down);

    /// 2k, i.e. states() - 1.
    int k2() const { return static_cast<int>(labels_.size()) - 1; }
    int states() const { return static_cast<int>(labels_.size()); }
    bool is_binary() const { return labels_.size() == 2; }
    const std::string& labels() const { return labels_; }
    const std::vector<Decimal>& thresholds() const { return thresholds_; }
    ZeroPolicy zero_policy() const { return zero_; }

    char down() const { return labels_.front(); }
    char up() const { return labels_.back(); }
    bool contains(char c) const { return labels_.find(c) != std::string::npos; }
    /// Position of a label in most-negative-first order; -1 if absent.
    int index_of(char c) const;

    /// State for one increment; -1 means the increment is dropped.
    int classify(Decimal x) const;

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::string labels_;
    std::vector<Decimal> thresholds_;
    ZeroPolicy zero_ = ZeroPolicy::down;
};

/// The "text": one label per kept session.
struct SymbolSequence {
    std::string symbols;
    Alphabet alphabet = Alphabet::binary();
    /// Index of the source session for each symbol (differs from the symbol
    /// index only when zeros are dropped). Empty for synthetic text.
    std::vector<std::size_t> sessions;
    /// Calendar date of each symbol's session; empty for synthetic text.
    std::vector<Date> dates;

    std::size_t size() const { return symbols.size(); }
    bool empty() const { return symbols.empty(); }
    std::string_view view() const { return symbols; }
};

SymbolSequence symbolize(const IncrementSeries& increments, const Alphabet& alphabet);

/// Plain text with an alphabet: every character must be a label.
SymbolSequence make_sequence(std::string symbols, const Alphabet& alphabet = Alphabet::binary());

/// Uniform random permutation of the letters, fully determined by the seed
/// (Fisher-Yates driven by a 64-bit Mersenne Twister with our own bounded
/// draw, so the result does not depend on the standard library's
/// distributions). Session/date annotations are dropped.
SymbolSequence shuffle(const SymbolSequence& sequence, std::uint64_t seed);
std::string shuffle_letters(std::string_view letters, std::uint64_t seed);

/// Swaps labels symmetrically about the centre (u <-> d, s fixed).
std::string mirror(std::string_view letters, const Alphabet& alphabet);

}  // namespace zipfstrat
