#include "zipfstrat/decimal.hpp"

#include <cmath>
#include <limits>

#include "zipfstrat/errors.hpp"

namespace zipfstrat {
namespace {

__extension__ typedef __int128 i128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

std::int64_t narrow(i128 v) {
    if (v > kMax || v < kMin) {
        throw std::overflow_error("decimal overflow");
    }
    return static_cast<std::int64_t>(v);
}

// num / den rounded half-to-even; den > 0.
i128 div_round_even(i128 num, i128 den) {
    i128 q = num / den;
    i128 r = num % den;
    if (r == 0) {
        return q;
    }
    i128 twice = (r < 0 ? -r : r) * 2;
    bool negative = num < 0;
    if (twice > den || (twice == den && (q % 2 != 0))) {
        q += negative ? -1 : 1;
    }
    return q;
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
    auto fail = [&] { return InputError("invalid decimal '" + std::string(text) + "'"); };
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    i128 value = 0;
    int int_digits = 0;
    int frac_digits = 0;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.' && !seen_point) {
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') {
            throw fail();
        }
        if (seen_point) {
            if (++frac_digits > kScaleDigits) {
                throw InputError("decimal '" + std::string(text) + "' has more than 8 fractional digits");
            }
        } else {
            ++int_digits;
        }
        value = value * 10 + (c - '0');
        if (value > static_cast<i128>(kMax)) {
            throw fail();
        }
    }
    if (int_digits + frac_digits == 0) {
        throw fail();
    }
    for (int i = frac_digits; i < kScaleDigits; ++i) {
        value *= 10;
    }
    if (negative) {
        value = -value;
    }
    try {
        return from_raw(narrow(value));
    } catch (const std::overflow_error&) {
        throw fail();
    }
}

Decimal Decimal::from_double(double v) {
    if (!std::isfinite(v)) {
        throw DomainError("cannot convert non-finite value to decimal");
    }
    double scaled = std::nearbyint(v * static_cast<double>(kScale));
    if (scaled >= 9.2e18 || scaled <= -9.2e18) {
        throw std::overflow_error("decimal overflow");
    }
    return from_raw(static_cast<std::int64_t>(scaled));
}

std::string Decimal::to_string() const {
    i128 v = raw_;
    bool negative = v < 0;
    if (negative) {
        v = -v;
    }
    auto whole = static_cast<unsigned long long>(v / kScale);
    auto frac = static_cast<unsigned long long>(v % kScale);
    std::string out = negative ? "-" : "";
    out += std::to_string(whole);
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, kScaleDigits - digits.size(), '0');
        while (digits.back() == '0') {
            digits.pop_back();
        }
        out += '.';
        out += digits;
    }
    return out;
}

Decimal Decimal::operator-() const { return from_raw(narrow(-static_cast<i128>(raw_))); }

Decimal& Decimal::operator+=(Decimal other) {
    raw_ = narrow(static_cast<i128>(raw_) + other.raw_);
    return *this;
}

Decimal& Decimal::operator-=(Decimal other) {
    raw_ = narrow(static_cast<i128>(raw_) - other.raw_);
    return *this;
}

Decimal& Decimal::operator*=(Decimal other) {
    raw_ = narrow(div_round_even(static_cast<i128>(raw_) * other.raw_, kScale));
    return *this;
}

Decimal& Decimal::operator/=(Decimal other) {
    if (other.raw_ == 0) {
        throw DomainError("decimal division by zero");
    }
    i128 num = static_cast<i128>(raw_) * kScale;
    i128 den = other.raw_;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    raw_ = narrow(div_round_even(num, den));
    return *this;
}

Decimal operator*(Decimal a, std::int64_t n) {
    return Decimal::from_raw(narrow(static_cast<i128>(a.raw_) * n));
}

}  // namespace zipfstrat
