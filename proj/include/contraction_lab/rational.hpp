#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace contraction_lab {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always normalized: gcd(num, den) == 1 and den > 0. Intermediate products
/// are formed in 128-bit integers; a result that does not fit back into 64
/// bits throws std::overflow_error instead of silently wrapping.
class Rational {
public:
    using int_type = std::int64_t;

    constexpr Rational() = default;
    constexpr Rational(int_type n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(int_type n, int_type d) { assign(n, d); }

    [[nodiscard]] constexpr int_type num() const noexcept { return num_; }
    [[nodiscard]] constexpr int_type den() const noexcept { return den_; }

    [[nodiscard]] double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    /// "p/q", or "p" when the denominator is one.
    [[nodiscard]] std::string to_string() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "p", "p/q" and finite decimals such as "-0.125".
    static Rational parse(std::string_view text);

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return from_wide(static_cast<wide>(a.num_) + b.num_, a.den_);
        const wide n = static_cast<wide>(a.num_) * b.den_ + static_cast<wide>(b.num_) * a.den_;
        const wide d = static_cast<wide>(a.den_) * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<wide>(a.num_) * b.num_, static_cast<wide>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from_wide(static_cast<wide>(a.num_) * b.den_, static_cast<wide>(a.den_) * b.num_);
    }
    Rational operator-() const {
        if (num_ == std::numeric_limits<int_type>::min())
            throw std::overflow_error("Rational: negation overflow");
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
        // |num|, den < 2^63 so each cross product fits in 127 bits.
        const wide lhs = static_cast<wide>(a.num_) * b.den_;
        const wide rhs = static_cast<wide>(b.num_) * a.den_;
        return lhs <=> rhs;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    using wide = __int128;

    int_type num_ = 0;
    int_type den_ = 1;

    static wide wide_abs(wide v) { return v < 0 ? -v : v; }

    static wide wide_gcd(wide a, wide b) {
        a = wide_abs(a);
        b = wide_abs(b);
        while (b != 0) {
            const wide t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational from_wide(wide n, wide d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) return Rational{};
        const wide g = wide_gcd(n, d);
        n /= g;
        d /= g;
        constexpr wide lo = std::numeric_limits<int_type>::min() + static_cast<wide>(1);
        constexpr wide hi = std::numeric_limits<int_type>::max();
        if (n < lo || n > hi || d > hi) throw std::overflow_error("Rational: result exceeds 64-bit range");
        Rational r;
        r.num_ = static_cast<int_type>(n);
        r.den_ = static_cast<int_type>(d);
        return r;
    }

    void assign(int_type n, int_type d) { *this = from_wide(n, d); }
};

inline Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }

inline Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
    };
    auto parse_int = [&](std::string_view s) -> int_type {
        if (s.empty()) fail();
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) fail();
        wide v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') fail();
            v = v * 10 + (s[i] - '0');
            if (v > std::numeric_limits<int_type>::max()) throw std::overflow_error("Rational: literal too large");
        }
        return static_cast<int_type>(neg ? -v : v);
    };

    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) fail();

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const int_type d = parse_int(text.substr(slash + 1));
        if (d == 0) throw std::domain_error("Rational: zero denominator in '" + std::string(text) + "'");
        return Rational(parse_int(text.substr(0, slash)), d);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 18) fail();
        const bool neg = !whole.empty() && whole.front() == '-';
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
        int_type scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const Rational w = whole.empty() ? Rational{} : Rational(parse_int(whole));
        const Rational f(parse_int(frac), scale);
        const Rational mag = w + f;
        return neg ? -mag : mag;
    }
    return Rational(parse_int(text));
}

}  // namespace contraction_lab
