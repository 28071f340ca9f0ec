#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "contraction_lab/errors.hpp"
#include "contraction_lab/metric_space.hpp"
#include "contraction_lab/sampled_space.hpp"
#include "contraction_lab/self_map.hpp"

namespace contraction_lab {

/// Truncation parameters for the catalog instances.
struct CatalogParams {
    /// Grid step for continuous parts, as num/den. Zero means "entry default"
    /// (1/512 for burton_logistic, 1/200 for composite).
    std::int64_t grid_step_num = 0;
    std::int64_t grid_step_den = 1;
    /// Index bound: N for floor_half's {0..N} (default 256), max n for
    /// composite's {4n, 4n+1} (default 50). Zero means "entry default".
    std::int64_t max_n = 0;
};

inline constexpr std::array<std::string_view, 4> catalog_ids{"burton_logistic", "floor_half",
                                                             "period2_counterexample", "composite"};

/// Verdict a catalog entry is expected to receive from the classifier.
struct ExpectedVerdict {
    std::string classification;  // pairwise_strict | large_contraction | uniform_tpc | large_tpc
    bool pass;
    std::string note;
};

template <DistanceScalar S>
using AnyMap = std::variant<TableMap<S>, FormulaMap<S>>;

template <DistanceScalar S>
struct CatalogEntry {
    std::string id;
    AnyMap<S> map;
    std::vector<ExpectedVerdict> expected;
};

namespace detail {

template <DistanceScalar S>
bool is_integer(const S& x) {
    if constexpr (std::is_same_v<S, Rational>) {
        return x.den() == 1;
    } else {
        return std::floor(x) == x;
    }
}

template <DistanceScalar S>
std::int64_t to_int(const S& x) {
    if constexpr (std::is_same_v<S, Rational>) {
        return x.num();
    } else {
        return static_cast<std::int64_t>(x);
    }
}

template <DistanceScalar S>
std::vector<S> step_grid(std::int64_t step_num, std::int64_t step_den, bool include_one, int level) {
    // Grid k * step / 2^level over [0, 1] (or [0, 1) when include_one is false).
    const std::int64_t den = step_den << level;
    std::vector<S> out;
    for (std::int64_t k = 0;; ++k) {
        const std::int64_t num = k * step_num;
        if (num > den || (!include_one && num == den)) break;
        out.push_back(ScalarTraits<S>::from_ratio(num, den));
    }
    return out;
}

}  // namespace detail

/// T x = x / (1 + x) on [0, 1).
template <DistanceScalar S>
CatalogEntry<S> make_burton_logistic(const CatalogParams& p = {}) {
    using T = ScalarTraits<S>;
    const std::int64_t sn = p.grid_step_num ? p.grid_step_num : 1;
    const std::int64_t sd = p.grid_step_num ? p.grid_step_den : 512;
    auto space = std::make_shared<const LineSpace<S>>(
        "[0,1) with |x-y|",
        // Orbits are started from x0 = 1, so the closure [0,1] is admitted.
        [](const S& x) { return !(x < T::zero()) && !(T::one() < x); },
        [sn, sd](int level) { return detail::step_grid<S>(sn, sd, false, level); }, T::from_ratio(sn, sd),
        /*complete=*/false);
    FormulaMap<S> map(space, "x/(1+x)", [](const S& x) { return x / (T::one() + x); });
    return {"burton_logistic",
            std::move(map),
            {{"pairwise_strict", true, "d(Tx,Ty) = d(x,y)/((1+x)(1+y))"},
             {"large_contraction", true, "delta(eps) = 1/(1+eps)"},
             {"uniform_tpc", false, "triples (e,2e,3e) have ratio 1/((1+e)(1+3e)) -> 1"},
             {"large_tpc", true, "ratio 1/((1+x)(1+z)) <= 1/(1+eps)"}}};
}

/// T(n) = floor(n/2) on {0, ..., N}.
template <DistanceScalar S>
CatalogEntry<S> make_floor_half(const CatalogParams& p = {}) {
    const std::int64_t n_max = p.max_n ? p.max_n : 256;
    if (n_max < 2) throw InputError("floor_half needs max_n >= 2");
    auto space = std::make_shared<const FiniteMetricSpace<S>>(
        FiniteMetricSpace<S>::integer_line(static_cast<std::size_t>(n_max + 1)));
    std::vector<std::size_t> images(space->size());
    for (std::size_t i = 0; i < images.size(); ++i) images[i] = i / 2;
    return {"floor_half",
            TableMap<S>(space, std::move(images)),
            {{"pairwise_strict", false, "d(T2,T1) = 1 = d(2,1)"},
             {"large_contraction", false, "witness pair (1,2) at ratio 1"},
             {"uniform_tpc", true, "sup ratio bounded by 3/4"},
             {"large_tpc", true, "implied by the uniform bound"}}};
}

/// X = {0,1,2}, T0 = 1, T1 = 0, T2 = 1.
template <DistanceScalar S>
CatalogEntry<S> make_period2_counterexample(const CatalogParams& = {}) {
    auto space = std::make_shared<const FiniteMetricSpace<S>>(FiniteMetricSpace<S>::integer_line(3));
    return {"period2_counterexample",
            TableMap<S>(space, {1, 0, 1}),
            {{"pairwise_strict", false, "d(T0,T1) = 1 = d(0,1)"},
             {"large_contraction", false, "d(T0,T1) = 1 = d(0,1)"},
             {"uniform_tpc", true, "P(1,0,1) = 2 vs P(0,1,2) = 4, alpha = 1/2"},
             {"large_tpc", true, "delta = 1/2 at every eps"}}};
}

/// X = [0,1] u {4n, 4n+1 : 1 <= n <= max_n}; T x = x/(x+1) on [0,1],
/// T(4n) = 0, T(4n+1) = 1 - 1/n.
template <DistanceScalar S>
CatalogEntry<S> make_composite(const CatalogParams& p = {}) {
    using T = ScalarTraits<S>;
    const std::int64_t sn = p.grid_step_num ? p.grid_step_num : 1;
    const std::int64_t sd = p.grid_step_num ? p.grid_step_den : 200;
    const std::int64_t n_max = p.max_n ? p.max_n : 50;
    if (n_max < 1) throw InputError("composite needs max_n >= 1");
    auto in_unit = [](const S& x) { return !(x < T::zero()) && !(T::one() < x); };
    auto member = [in_unit](const S& x) {
        if (in_unit(x)) return true;
        if (!detail::is_integer(x) || x < T::from_ratio(4, 1)) return false;
        const auto k = detail::to_int(x) % 4;
        return k == 0 || k == 1;
    };
    auto sampler = [sn, sd, n_max](int level) {
        std::vector<S> pts = detail::step_grid<S>(sn, sd, true, level);
        const std::int64_t top = n_max << level;
        for (std::int64_t n = 1; n <= top; ++n) {
            pts.push_back(T::from_ratio(4 * n, 1));
            pts.push_back(T::from_ratio(4 * n + 1, 1));
        }
        return pts;
    };
    auto space = std::make_shared<const LineSpace<S>>("[0,1] u {4n, 4n+1 : n >= 1} with |x-y|", member,
                                                      sampler, T::from_ratio(sn, sd), /*complete=*/true);
    FormulaMap<S> map(space, "x/(x+1) on [0,1]; T(4n)=0; T(4n+1)=1-1/n", [in_unit](const S& x) {
        if (in_unit(x)) return x / (x + T::one());
        const std::int64_t v = detail::to_int(x);
        if (v % 4 == 0) return T::zero();
        return T::one() - T::from_ratio(1, v / 4);
    });
    return {"composite",
            std::move(map),
            {{"pairwise_strict", true, "strict on every sampled pair"},
             {"large_contraction", false, "pairs (4n, 4n+1) have ratio 1 - 1/n"},
             {"uniform_tpc", false, "triples (e,2e,3e) have ratio -> 1"},
             {"large_tpc", true, "delta(eps) = 1/(1+eps) for eps <= 1, 1/2 beyond"}}};
}

template <DistanceScalar S>
CatalogEntry<S> catalog(std::string_view id, const CatalogParams& p = {}) {
    if (id == "burton_logistic") return make_burton_logistic<S>(p);
    if (id == "floor_half") return make_floor_half<S>(p);
    if (id == "period2_counterexample") return make_period2_counterexample<S>(p);
    if (id == "composite") return make_composite<S>(p);
    throw InputError("unknown catalog id '" + std::string(id) +
                     "' (expected burton_logistic|floor_half|period2_counterexample|composite)");
}

/// Arithmetic mode used when the caller does not override it.
inline ArithmeticMode default_mode(std::string_view id) {
    return (id == "burton_logistic" || id == "composite") ? ArithmeticMode::floating : ArithmeticMode::exact;
}

}  // namespace contraction_lab
