#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace zipfstrat {

/// Fixed-point decimal with eight fractional digits, stored as a signed
/// 64-bit count of 1e-8 units. Used for prices, index points and currency so
/// that sums over long histories are exact.
///
/// Addition and subtraction are exact (overflow throws). Multiplication and
/// division round half-to-even at the eighth decimal place.
class Decimal {
public:
    static constexpr int kScaleDigits = 8;
    static constexpr std::int64_t kScale = 100'000'000;

    constexpr Decimal() = default;

    /// Whole-number value.
    static constexpr Decimal from_int(std::int64_t v) { return from_raw(v * kScale); }
    static constexpr Decimal from_raw(std::int64_t raw) {
        Decimal d;
        d.raw_ = raw;
        return d;
    }

    /// Parses "[+-]digits[.digits]". More than eight fractional digits, an
    /// exponent, or any stray character is rejected with InputError.
    static Decimal parse(std::string_view text);

    /// Nearest representable value; for bridging from Python floats and
    /// tests. Not used on any accounting path.
    static Decimal from_double(double v);

    constexpr std::int64_t raw() const { return raw_; }
    double to_double() const { return static_cast<double>(raw_) / static_cast<double>(kScale); }

    /// Shortest decimal form: no exponent, trailing fractional zeros removed
    /// ("1000", "-0.25", "2900.5").
    std::string to_string() const;

    constexpr bool is_zero() const { return raw_ == 0; }
    constexpr int sign() const { return (raw_ > 0) - (raw_ < 0); }
    constexpr Decimal abs() const { return raw_ < 0 ? from_raw(-raw_) : *this; }

    Decimal operator-() const;
    Decimal& operator+=(Decimal other);
    Decimal& operator-=(Decimal other);
    Decimal& operator*=(Decimal other);
    Decimal& operator/=(Decimal other);

    friend Decimal operator+(Decimal a, Decimal b) { return a += b; }
    friend Decimal operator-(Decimal a, Decimal b) { return a -= b; }
    friend Decimal operator*(Decimal a, Decimal b) { return a *= b; }
    friend Decimal operator/(Decimal a, Decimal b) { return a /= b; }
    friend Decimal operator*(Decimal a, std::int64_t n);

    friend constexpr auto operator<=>(Decimal, Decimal) = default;
    friend constexpr bool operator==(Decimal, Decimal) = default;

private:
    std::int64_t raw_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Decimal d) { return os << d.to_string(); }

}  // namespace zipfstrat
