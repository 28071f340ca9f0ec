#pragma once

#include <cmath>
#include <concepts>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "contraction_lab/rational.hpp"

namespace contraction_lab {

enum class ArithmeticMode { exact, floating };

inline std::string_view to_string(ArithmeticMode m) { return m == ArithmeticMode::exact ? "exact" : "float"; }

inline ArithmeticMode parse_mode(std::string_view s) {
    if (s == "exact") return ArithmeticMode::exact;
    if (s == "float") return ArithmeticMode::floating;
    throw std::invalid_argument("unknown arithmetic mode '" + std::string(s) + "' (expected exact|float)");
}

/// Comparison and conversion policy for a distance scalar.
///
/// Exact mode decides every (in)equality exactly. Floating mode carries a
/// fixed tolerance eta: a strict inequality a < b only holds with margin eta,
/// and a <= b / a == b are granted within eta.
template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr ArithmeticMode mode = ArithmeticMode::exact;
    static constexpr double eta = 0.0;

    static Rational zero() { return Rational{}; }
    static Rational one() { return Rational{1}; }
    static Rational from_ratio(std::int64_t p, std::int64_t q) { return Rational(p, q); }
    static Rational abs_diff(const Rational& a, const Rational& b) { return abs(a - b); }

    static bool less(const Rational& a, const Rational& b) { return a < b; }
    static bool less_equal(const Rational& a, const Rational& b) { return a <= b; }
    static bool equal(const Rational& a, const Rational& b) { return a == b; }

    static double to_double(const Rational& a) { return a.to_double(); }
    static std::string to_string(const Rational& a) { return a.to_string(); }
    static Rational parse(std::string_view s) { return Rational::parse(s); }
};

template <>
struct ScalarTraits<double> {
    static constexpr ArithmeticMode mode = ArithmeticMode::floating;
    static constexpr double eta = 1e-12;

    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_ratio(std::int64_t p, std::int64_t q) {
        return static_cast<double>(p) / static_cast<double>(q);
    }
    static double abs_diff(double a, double b) { return std::fabs(a - b); }

    static bool less(double a, double b) { return a < b - eta; }
    static bool less_equal(double a, double b) { return a <= b + eta; }
    static bool equal(double a, double b) { return std::fabs(a - b) <= eta; }

    static double to_double(double a) { return a; }
    static std::string to_string(double a) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", a);
        return buf;
    }
    /// Accepts rational "p/q" syntax as well as ordinary floating literals.
    static double parse(std::string_view s) {
        if (s.find('/') != std::string_view::npos) return Rational::parse(s).to_double();
        const std::string text(s);
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
            throw std::invalid_argument("not a number: '" + text + "'");
        return v;
    }
};

template <typename S>
concept DistanceScalar = requires { ScalarTraits<S>::mode; };

}  // namespace contraction_lab
