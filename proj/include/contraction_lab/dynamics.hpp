#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "contraction_lab/classify.hpp"
#include "contraction_lab/errors.hpp"
#include "contraction_lab/metric_space.hpp"
#include "contraction_lab/self_map.hpp"

namespace contraction_lab {

enum class HaltReason { fixed_point, period2, budget };

inline std::string to_string(HaltReason h) {
    switch (h) {
        case HaltReason::fixed_point: return "fixed-point";
        case HaltReason::period2: return "period-2";
        case HaltReason::budget: return "budget";
    }
    return "?";
}

template <typename P, DistanceScalar S>
struct OrbitTrace {
    P x0{};
    std::vector<P> states;
    std::vector<std::string> labels;
    std::vector<S> step_dist;   // d(x_n, x_{n+1})
    std::vector<S> perimeters;  // P(x_n, x_{n+1}, x_{n+2})
    S orbit_bound{};            // max_n d(x_0, x_n)
    HaltReason halted_by = HaltReason::budget;
    std::size_t halt_index = 0;  // n at which the halt condition was observed
    S residual{};                // d(x_n, T x_n) at halt_index
};

struct OrbitOptions {
    /// Stop at the first x_n with T^2 x_n = x_n != T x_n.
    bool halt_on_period2 = true;
};

template <DistanceScalar S>
S default_residual_tol() {
    if constexpr (ScalarTraits<S>::mode == ArithmeticMode::exact) {
        return ScalarTraits<S>::zero();
    } else {
        return 1e-10;
    }
}

/// Picard iteration x_{n+1} = T x_n from x0.
///
/// Halts at the first n where d(x_n, T x_n) <= residual_tol (fixed point),
/// else where T^2 x_n = x_n (period 2; the trace then carries x_{n+1..n+3}),
/// else when n reaches max_steps.
template <SelfMapLike Map>
OrbitTrace<typename Map::point_type, typename Map::scalar_type> picard_orbit(
    const Map& map, const typename Map::point_type& x0, std::size_t max_steps,
    const typename Map::scalar_type& residual_tol, OrbitOptions options = {}) {
    using P = typename Map::point_type;
    using S = typename Map::scalar_type;
    using T = ScalarTraits<S>;
    if (max_steps < 2) throw InputError("picard_orbit needs max_steps >= 2");
    const auto& space = map.space();
    space.require(x0);

    OrbitTrace<P, S> tr;
    tr.x0 = x0;
    tr.states.push_back(x0);
    for (std::size_t n = 0;; ++n) {
        const P x = tr.states[n];
        const P y = map.apply(x);
        const S r = space.distance(x, y);
        tr.residual = r;
        tr.halt_index = n;
        if (T::less_equal(r, residual_tol)) {
            tr.halted_by = HaltReason::fixed_point;
            break;
        }
        if (options.halt_on_period2) {
            const P z = map.apply(y);
            if (T::less_equal(space.distance(z, x), residual_tol)) {
                tr.halted_by = HaltReason::period2;
                tr.states.push_back(y);
                tr.states.push_back(z);
                tr.states.push_back(map.apply(z));
                break;
            }
        }
        if (n == max_steps) {
            tr.halted_by = HaltReason::budget;
            break;
        }
        tr.states.push_back(y);
    }

    const auto& st = tr.states;
    tr.orbit_bound = T::zero();
    for (std::size_t n = 0; n < st.size(); ++n) {
        tr.labels.push_back(space.label(st[n]));
        const S d0 = space.distance(st[0], st[n]);
        if (tr.orbit_bound < d0) tr.orbit_bound = d0;
        if (n + 1 < st.size()) tr.step_dist.push_back(space.distance(st[n], st[n + 1]));
        if (n + 2 < st.size()) tr.perimeters.push_back(perimeter(space, st[n], st[n + 1], st[n + 2]));
    }
    return tr;
}

template <SelfMapLike Map>
auto picard_orbit(const Map& map, const typename Map::point_type& x0, std::size_t max_steps) {
    return picard_orbit(map, x0, max_steps, default_residual_tol<typename Map::scalar_type>());
}

template <DistanceScalar S>
struct DecreaseVerdict {
    bool pass = true;
    bool vacuous = false;
    std::optional<std::size_t> first_violation;  // n with P_{n+1} >= P_n
    std::optional<S> p_n;
    std::optional<S> p_next;
};

/// P_{n+1} < P_n for every recorded n.
template <typename P, DistanceScalar S>
DecreaseVerdict<S> check_perimeter_decrease(const OrbitTrace<P, S>& tr) {
    DecreaseVerdict<S> v;
    if (tr.perimeters.size() < 2) {
        if (tr.halted_by == HaltReason::fixed_point) {
            v.vacuous = true;
            return v;
        }
        throw InputError("trace has fewer than 2 perimeter entries");
    }
    for (std::size_t n = 0; n + 1 < tr.perimeters.size(); ++n) {
        if (!ScalarTraits<S>::less(tr.perimeters[n + 1], tr.perimeters[n])) {
            v.pass = false;
            v.first_violation = n;
            v.p_n = tr.perimeters[n];
            v.p_next = tr.perimeters[n + 1];
            break;
        }
    }
    return v;
}

struct DistinctVerdict {
    bool pass = true;
    std::optional<std::pair<std::size_t, std::size_t>> repeat;  // (i, j), i < j, x_i = x_j
};

/// No two recorded states coincide. A fixed-point halt records the fixed
/// point once, so it never produces a repeat.
template <MetricSpaceLike Space, typename P, DistanceScalar S>
DistinctVerdict check_distinct_iterates(const Space& space, const OrbitTrace<P, S>& tr) {
    DistinctVerdict v;
    for (std::size_t j = 1; j < tr.states.size() && v.pass; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (ScalarTraits<S>::equal(space.distance(tr.states[i], tr.states[j]), ScalarTraits<S>::zero())) {
                v.pass = false;
                v.repeat = std::make_pair(i, j);
                break;
            }
        }
    }
    return v;
}

/// Every x in `points` with T^2 x = x and T x != x.
template <SelfMapLike Map>
std::vector<typename Map::point_type> detect_period2(const Map& map,
                                                     const std::vector<typename Map::point_type>& points) {
    using T = ScalarTraits<typename Map::scalar_type>;
    const auto& space = map.space();
    std::vector<typename Map::point_type> out;
    for (const auto& x : points) {
        const auto y = map.apply(x);
        if (T::equal(space.distance(x, y), T::zero())) continue;
        if (T::equal(space.distance(map.apply(y), x), T::zero())) out.push_back(x);
    }
    return out;
}

template <typename P, DistanceScalar S>
struct FixedPointCertificate {
    P point{};
    S residual{};
    S tolerance{};
};

/// Certificate iff d(x, T x) <= tol.
template <SelfMapLike Map>
std::optional<FixedPointCertificate<typename Map::point_type, typename Map::scalar_type>> certify_fixed_point(
    const Map& map, const typename Map::point_type& x, const typename Map::scalar_type& tol) {
    const auto r = map.space().distance(x, map.apply(x));
    if (!ScalarTraits<typename Map::scalar_type>::less_equal(r, tol)) return std::nullopt;
    return FixedPointCertificate<typename Map::point_type, typename Map::scalar_type>{x, r, tol};
}

template <SelfMapLike Map>
auto certify_fixed_point(const Map& map, const typename Map::point_type& x) {
    return certify_fixed_point(map, x, default_residual_tol<typename Map::scalar_type>());
}

/// {x : T x = x}, by exhaustive scan.
template <DistanceScalar S>
std::vector<std::size_t> enumerate_fixed_points(const TableMap<S>& map) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < map.space().size(); ++x)
        if (map.apply(x) == x) out.push_back(x);
    return out;
}

template <DistanceScalar S>
struct DecayPair {
    std::size_t m = 0;
    std::size_t n = 0;
    S distance{};   // d(x_m, x_n)
    S perimeter{};  // P(x_{m+1}, x_m, x_n)
    double bound = 0.0;  // 4 L delta^n
};

template <DistanceScalar S>
struct CauchyDiagnostic {
    S eps0{};
    S eps_used{};  // grid eps whose delta was used
    S delta{};
    S orbit_bound{};
    std::size_t pairs_examined = 0;
    std::vector<DecayPair<S>> bad_pairs;   // every pair with d(x_m, x_n) >= eps0
    std::vector<DecayPair<S>> violations;  // those breaking the 4 L delta^n bound
    bool stride_sampled = false;

    [[nodiscard]] bool pass() const noexcept { return violations.empty(); }
    [[nodiscard]] bool vacuous() const noexcept { return bad_pairs.empty(); }
};

namespace detail {

/// lhs <= 4 L delta^n, exactly while the power fits, else in double.
template <DistanceScalar S>
bool within_decay_bound(const S& lhs, const S& four_l, const S& delta, std::size_t n, double& bound_out) {
    using T = ScalarTraits<S>;
    const double b = T::to_double(four_l) * std::pow(T::to_double(delta), static_cast<double>(n));
    bound_out = b;
    if constexpr (T::mode == ArithmeticMode::exact) {
        try {
            S rhs = four_l;
            for (std::size_t i = 0; i < n; ++i) rhs *= delta;
            return T::less_equal(lhs, rhs);
        } catch (const std::overflow_error&) {
            return T::to_double(lhs) <= b;
        }
    } else {
        return T::less_equal(lhs, b * (1.0 + 1e-12));
    }
}

}  // namespace detail

/// For every recorded pair m > n with d(x_m, x_n) >= eps0, checks
/// P(x_{m+1}, x_m, x_n) <= 4 L delta(eps0/3)^n. Orbits longer than 512
/// states are examined on a deterministic stride.
template <MetricSpaceLike Space, typename P, DistanceScalar S>
CauchyDiagnostic<S> geometric_decay_check(const Space& space, const OrbitTrace<P, S>& tr,
                                          const ModulusTable<S>& table, const S& eps0) {
    using T = ScalarTraits<S>;
    if (!T::less(T::zero(), eps0)) throw InputError("eps0 must be positive");
    const S third = eps0 / T::from_ratio(3, 1);
    const auto* entry = table.lookup_at_most(third);
    if (entry == nullptr || entry->vacuous())
        throw InputError("modulus table does not cover eps0/3 = " + T::to_string(third));

    CauchyDiagnostic<S> diag;
    diag.eps0 = eps0;
    diag.eps_used = entry->eps;
    diag.delta = *entry->delta;
    diag.orbit_bound = tr.orbit_bound;
    const S four_l = T::from_ratio(4, 1) * tr.orbit_bound;

    const std::size_t last = tr.states.size();  // need x_{m+1}, so m <= last - 2
    if (last < 2) return diag;
    const std::size_t stride = last > 512 ? (last + 511) / 512 : 1;
    diag.stride_sampled = stride > 1;
    for (std::size_t m = stride; m + 1 < last; m += stride) {
        for (std::size_t n = 0; n < m; n += stride) {
            ++diag.pairs_examined;
            const S d = space.distance(tr.states[m], tr.states[n]);
            if (!T::less_equal(eps0, d)) continue;
            DecayPair<S> pr{m, n, d, perimeter(space, tr.states[m + 1], tr.states[m], tr.states[n]), 0.0};
            const bool ok = detail::within_decay_bound(pr.perimeter, four_l, diag.delta, n, pr.bound);
            diag.bad_pairs.push_back(pr);
            if (!ok) diag.violations.push_back(pr);
        }
    }
    return diag;
}

/// d(x_m, x_n) <= P(x_{m+1}, x_m, x_n) for every recorded m > n; returns the
/// first offending (m, n) if any.
template <MetricSpaceLike Space, typename P, DistanceScalar S>
std::optional<std::pair<std::size_t, std::size_t>> check_distance_below_perimeter(const Space& space,
                                                                                   const OrbitTrace<P, S>& tr) {
    for (std::size_t m = 1; m + 1 < tr.states.size(); ++m)
        for (std::size_t n = 0; n < m; ++n)
            if (!ScalarTraits<S>::less_equal(space.distance(tr.states[m], tr.states[n]),
                                             perimeter(space, tr.states[m + 1], tr.states[m], tr.states[n])))
                return std::make_pair(m, n);
    return std::nullopt;
}

}  // namespace contraction_lab
