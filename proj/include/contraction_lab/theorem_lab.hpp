#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "contraction_lab/catalog.hpp"
#include "contraction_lab/classify.hpp"
#include "contraction_lab/dynamics.hpp"
#include "contraction_lab/errors.hpp"
#include "contraction_lab/metric_space.hpp"
#include "contraction_lab/parallel.hpp"
#include "contraction_lab/self_map.hpp"

namespace contraction_lab {

enum class TheoremId { burton, petrov, mesmouli_uncorrected, corrected_main };

inline std::string to_string(TheoremId t) {
    switch (t) {
        case TheoremId::burton: return "burton";
        case TheoremId::petrov: return "petrov";
        case TheoremId::mesmouli_uncorrected: return "mesmouli_uncorrected";
        case TheoremId::corrected_main: return "corrected_main";
    }
    return "?";
}

inline TheoremId parse_theorem(std::string_view s) {
    if (s == "burton") return TheoremId::burton;
    if (s == "petrov") return TheoremId::petrov;
    if (s == "mesmouli_uncorrected") return TheoremId::mesmouli_uncorrected;
    if (s == "corrected_main") return TheoremId::corrected_main;
    throw InputError("unknown theorem id '" + std::string(s) +
                     "' (expected burton|petrov|mesmouli_uncorrected|corrected_main)");
}

enum class HypothesisStatus { pass, fail, vacuous };

inline std::string to_string(HypothesisStatus h) {
    switch (h) {
        case HypothesisStatus::pass: return "pass";
        case HypothesisStatus::fail: return "fail";
        case HypothesisStatus::vacuous: return "vacuous";
    }
    return "?";
}

struct Hypothesis {
    std::string name;
    HypothesisStatus status = HypothesisStatus::pass;
    std::string detail;
    std::vector<std::string> witnesses;

    [[nodiscard]] bool holds() const noexcept { return status != HypothesisStatus::fail; }
};

enum class TheoremStatus { confirmed, refuted, inapplicable };

inline std::string to_string(TheoremStatus s) {
    switch (s) {
        case TheoremStatus::confirmed: return "confirmed";
        case TheoremStatus::refuted: return "refuted";
        case TheoremStatus::inapplicable: return "inapplicable";
    }
    return "?";
}

struct Conclusion {
    bool fixed_point_exists = false;
    std::vector<std::string> fixed_points;
    bool count_le_two = true;
    std::optional<bool> unique;  // set only for theorems that claim uniqueness
    /// Approximate Picard limit for sampled spaces.
    std::optional<std::string> orbit_limit;
    std::optional<std::string> orbit_limit_residual;
};

struct TheoremVerdict {
    TheoremId theorem = TheoremId::corrected_main;
    std::string x0;
    std::vector<Hypothesis> hypotheses;
    Conclusion conclusion;
    TheoremStatus status = TheoremStatus::inapplicable;
    /// Sampled space: verdicts hold on the enumerated scope only.
    bool scope_qualified = false;
    /// Whether the uniqueness premise (an orbit converging to x* from outside)
    /// was observed, and if so whether the fixed point set was a singleton.
    std::optional<bool> uniqueness_remark_holds;
    std::vector<std::string> notes;
};

namespace detail {

template <DistanceScalar S>
std::string triple_text(const std::vector<std::string>& labels, const Witness<S>& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.arity; ++i) s += (i ? "," : "") + labels[w.index[i]];
    return s + ") lhs=" + ScalarTraits<S>::to_string(w.lhs) + " rhs=" + ScalarTraits<S>::to_string(w.rhs);
}

template <DistanceScalar S>
Hypothesis modulus_hypothesis(std::string name, const ContractionReport<S>& r, const ModulusVerdict<S>& v) {
    Hypothesis h{std::move(name), v.pass ? HypothesisStatus::pass : HypothesisStatus::fail, v.reason, {}};
    if (!v.pass && v.witness) h.witnesses.push_back(triple_text(r.labels_for(*v.witness), *v.witness));
    return h;
}

inline std::vector<std::string> hypothesis_names(TheoremId t) {
    switch (t) {
        case TheoremId::burton: return {"large_contraction", "orbit_bounded"};
        case TheoremId::petrov: return {"uniform_tpc", "no_period2"};
        case TheoremId::mesmouli_uncorrected: return {"large_tpc", "orbit_bounded"};
        case TheoremId::corrected_main: return {"large_tpc", "no_period2", "orbit_bounded"};
    }
    return {};
}

inline bool claims_uniqueness(TheoremId t) {
    return t == TheoremId::burton || t == TheoremId::mesmouli_uncorrected;
}

template <DistanceScalar S>
Hypothesis class_hypothesis(std::string_view name, const ContractionReport<S>& r) {
    if (name == "large_contraction") return modulus_hypothesis("large_contraction", r, r.large_contraction);
    if (name == "large_tpc") return modulus_hypothesis("large_tpc", r, r.large_tpc);
    Hypothesis h{"uniform_tpc", r.uniform_tpc.pass ? HypothesisStatus::pass : HypothesisStatus::fail,
                 "alpha = " + ScalarTraits<S>::to_string(*r.uniform_tpc.alpha) + "; " + r.uniform_tpc.reason, {}};
    if (!r.uniform_tpc.pass && r.uniform_tpc.witness) h.witnesses.push_back(triple_text(r.labels_for(*r.uniform_tpc.witness), *r.uniform_tpc.witness));
    return h;
}

inline void settle(TheoremVerdict& v) {
    auto& c = v.conclusion;
    c.count_le_two = c.fixed_points.size() <= 2;
    c.fixed_point_exists = !c.fixed_points.empty() || c.orbit_limit.has_value();
    bool ok = c.fixed_point_exists && c.count_le_two;
    if (claims_uniqueness(v.theorem)) {
        c.unique = c.fixed_points.size() == 1 || (c.fixed_points.empty() && c.orbit_limit.has_value());
        ok = ok && *c.unique;
    }
    const bool hyps = std::all_of(v.hypotheses.begin(), v.hypotheses.end(), [](const Hypothesis& h) { return h.holds(); });
    v.status = !hyps ? TheoremStatus::inapplicable : (ok ? TheoremStatus::confirmed : TheoremStatus::refuted);
}

}  // namespace detail

/// Checks a theorem's hypotheses and conclusion on a finite instance.
/// Every check is exhaustive, so the resulting status is exact.
template <DistanceScalar S>
TheoremVerdict verdict(TheoremId theorem, const TableMap<S>& map, std::size_t x0, unsigned workers = 0) {
    const auto& space = map.space();
    space.require(x0);
    const auto scope = exhaustive_scope(map);
    const auto report = full_report(scope, default_eps_grid<S>(), nullptr, workers);

    TheoremVerdict v;
    v.theorem = theorem;
    v.x0 = space.label(x0);
    for (const auto& name : detail::hypothesis_names(theorem)) {
        if (name == "no_period2") {
            const auto p2 = detect_period2(map, map.points());
            Hypothesis h{"no_period2", p2.empty() ? HypothesisStatus::pass : HypothesisStatus::fail,
                         p2.empty() ? "no x with T^2 x = x != T x" : "points of prime period 2 found", {}};
            for (auto x : p2) h.witnesses.push_back(space.label(x));
            v.hypotheses.push_back(std::move(h));
        } else if (name == "orbit_bounded") {
            // One orbit of length |X| visits its whole eventual cycle.
            OrbitOptions opts;
            opts.halt_on_period2 = false;
            const auto tr = picard_orbit(map, x0, std::max<std::size_t>(space.size(), 2), ScalarTraits<S>::zero(), opts);
            v.hypotheses.push_back({"orbit_bounded", HypothesisStatus::pass,
                                    "finite space; L = " + ScalarTraits<S>::to_string(tr.orbit_bound), {}});
        } else {
            v.hypotheses.push_back(detail::class_hypothesis(name, report));
        }
    }
    for (auto x : enumerate_fixed_points(map)) v.conclusion.fixed_points.push_back(space.label(x));
    detail::settle(v);
    return v;
}

struct SampledVerdictOptions {
    std::size_t max_steps = 200000;
};

/// Scope-qualified verdict on a sampled space: hypotheses are checked on the
/// sample grid (with refinement), fixed points are the grid points fixed by
/// T plus the certified Picard limit from x0.
template <DistanceScalar S>
TheoremVerdict verdict(TheoremId theorem, const FormulaMap<S>& map, const S& x0, SampledVerdictOptions opt = {},
                       unsigned workers = 0) {
    using T = ScalarTraits<S>;
    const auto& space = map.space();
    space.require(x0);
    TheoremVerdict v;
    v.theorem = theorem;
    v.x0 = space.label(x0);
    v.scope_qualified = true;
    v.notes.push_back("sampled space: verdict holds on the enumerated scope only");

    const auto scope = sampled_scope(map, 0);
    const auto fine = sampled_scope(map, 1);
    const auto report = full_report(scope, default_eps_grid<S>(), &fine, workers);
    const auto grid = map.points(0);
    const auto tr = picard_orbit(map, x0, opt.max_steps, default_residual_tol<S>());

    for (const auto& name : detail::hypothesis_names(theorem)) {
        if (name == "no_period2") {
            const auto p2 = detect_period2(map, grid);
            Hypothesis h{"no_period2", p2.empty() ? HypothesisStatus::pass : HypothesisStatus::fail,
                         p2.empty() ? "no grid point with T^2 x = x != T x" : "points of prime period 2 found", {}};
            for (const auto& x : p2) h.witnesses.push_back(space.label(x));
            v.hypotheses.push_back(std::move(h));
        } else if (name == "orbit_bounded") {
            v.hypotheses.push_back({"orbit_bounded", HypothesisStatus::pass,
                                    "recorded orbit of " + std::to_string(tr.states.size()) +
                                        " states; L = " + T::to_string(tr.orbit_bound),
                                    {}});
        } else {
            v.hypotheses.push_back(detail::class_hypothesis(name, report));
        }
    }
    for (const auto& x : grid)
        if (T::equal(space.distance(x, map.apply(x)), T::zero())) v.conclusion.fixed_points.push_back(space.label(x));
    if (tr.halted_by == HaltReason::fixed_point) {
        v.conclusion.orbit_limit = space.label(tr.states.back());
        v.conclusion.orbit_limit_residual = T::to_string(tr.residual);
        if (!T::equal(tr.residual, T::zero())) {
            v.uniqueness_remark_holds = v.conclusion.fixed_points.size() <= 1;
        }
    }
    detail::settle(v);
    if (!space.complete()) {
        v.status = TheoremStatus::inapplicable;
        v.notes.push_back("space " + space.description() + " is not complete; conclusions are not asserted");
    }
    return v;
}

// ---------------------------------------------------------------------------
// Random instances and refutation search

enum class MapDistribution { uniform, contractive, two_cycle, mixed };

inline std::string to_string(MapDistribution m) {
    switch (m) {
        case MapDistribution::uniform: return "uniform";
        case MapDistribution::contractive: return "contractive";
        case MapDistribution::two_cycle: return "two_cycle";
        case MapDistribution::mixed: return "mixed";
    }
    return "?";
}

inline MapDistribution parse_map_distribution(std::string_view s) {
    if (s == "uniform") return MapDistribution::uniform;
    if (s == "contractive") return MapDistribution::contractive;
    if (s == "two_cycle") return MapDistribution::two_cycle;
    if (s == "mixed") return MapDistribution::mixed;
    throw InputError("unknown map distribution '" + std::string(s) + "'");
}

struct SearchConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    std::size_t min_size = 3;
    std::size_t max_size = 12;
    /// Raw distances are k / dist_denominator, k uniform in 1..dist_denominator.
    std::int64_t dist_denominator = 64;
    MapDistribution maps = MapDistribution::mixed;
};

struct RandomInstance {
    std::int64_t trial = 0;  // -1 for the seeded instance
    MapDistribution mode = MapDistribution::uniform;
    TableMap<Rational> map;
};

namespace detail {

/// Uniform integer in [0, bound) by rejection; portable across standard libraries.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r < limit) return r % bound;
    }
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace detail

inline void validate(const SearchConfig& c) {
    if (c.min_size < 3) throw InputError("space sizes must be at least 3");
    if (c.max_size < c.min_size) throw InputError("size range is empty");
    if (c.trials < 1) throw InputError("trials must be at least 1");
    if (c.dist_denominator < 1) throw InputError("distance denominator must be positive");
}

/// Deterministic in (config.seed, trial_index): a repaired random distance
/// table and a self-map drawn from the configured distribution.
inline RandomInstance random_instance(const SearchConfig& config, std::size_t trial_index) {
    validate(config);
    if (trial_index >= config.trials) throw InputError("trial index out of range");
    auto rng = detail::trial_rng(config.seed, trial_index);
    const std::size_t n = config.min_size + detail::draw_below(rng, config.max_size - config.min_size + 1);

    DistTable<Rational> raw(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto k = static_cast<std::int64_t>(1 + detail::draw_below(rng, config.dist_denominator));
            raw(i, j) = raw(j, i) = Rational(k, config.dist_denominator);
        }
    auto space = std::make_shared<const FiniteMetricSpace<Rational>>(metric_repair(std::move(raw)));

    MapDistribution mode = config.maps;
    if (mode == MapDistribution::mixed) mode = static_cast<MapDistribution>(trial_index % 3);

    std::vector<std::size_t> images(n);
    switch (mode) {
        case MapDistribution::uniform:
        case MapDistribution::mixed:
            for (auto& im : images) im = detail::draw_below(rng, n);
            break;
        case MapDistribution::contractive: {
            const std::size_t k = 1 + detail::draw_below(rng, 3);
            std::vector<std::size_t> pool(n);
            for (std::size_t i = 0; i < n; ++i) pool[i] = i;
            for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + detail::draw_below(rng, n - i)]);
            for (auto& im : images) im = pool[detail::draw_below(rng, k)];
            break;
        }
        case MapDistribution::two_cycle: {
            const std::size_t a = detail::draw_below(rng, n);
            std::size_t b = detail::draw_below(rng, n - 1);
            if (b >= a) ++b;
            for (auto& im : images) im = detail::draw_below(rng, 2) == 0 ? a : b;
            images[a] = b;
            images[b] = a;
            break;
        }
    }
    return {static_cast<std::int64_t>(trial_index), mode, TableMap<Rational>(space, std::move(images))};
}

/// X = {0,1,2} with T0 = 1, T1 = 0, T2 = 1, tagged as trial -1.
inline RandomInstance seeded_counterexample() {
    auto e = make_period2_counterexample<Rational>();
    return {-1, MapDistribution::uniform, std::get<TableMap<Rational>>(e.map)};
}

struct Refutation {
    RandomInstance instance;
    TheoremVerdict verdict;
    std::optional<RandomInstance> minimized;
};

/// Results of running the theorem checks over a random stream.
struct SearchFindings {
    TheoremId theorem = TheoremId::corrected_main;
    SearchConfig config;
    std::size_t trials_run = 0;
    std::size_t hypotheses_passed = 0;
    std::vector<Refutation> hits;
    /// Trials whose hypotheses passed with exactly two fixed points.
    std::vector<std::int64_t> two_fixed_point_trials;
};

namespace detail {

struct TrialOutcome {
    bool hypotheses_pass = false;
    bool refuted = false;
    bool two_fixed = false;
    std::optional<Refutation> hit;
};

inline TrialOutcome run_trial(TheoremId theorem, const RandomInstance& inst) {
    TrialOutcome o;
    auto v = verdict(theorem, inst.map, 0, 1);
    o.hypotheses_pass = v.status != TheoremStatus::inapplicable;
    o.refuted = v.status == TheoremStatus::refuted;
    o.two_fixed = o.hypotheses_pass && v.conclusion.fixed_points.size() == 2;
    if (o.refuted) o.hit = Refutation{inst, std::move(v), std::nullopt};
    return o;
}

}  // namespace detail

/// Greedily deletes points (keeping x0 = index 0, |X| >= 3 and closure of
/// the map) while the verdict stays refuted. The result is locally minimal.
inline RandomInstance minimize_refutation(TheoremId theorem, const RandomInstance& instance) {
    if (verdict(theorem, instance.map, 0, 1).status != TheoremStatus::refuted)
        throw InputError("instance does not refute " + to_string(theorem));
    RandomInstance cur = instance;
    for (bool shrunk = true; shrunk;) {
        shrunk = false;
        const auto& space = cur.map.space();
        const auto& img = cur.map.images();
        const std::size_t n = space.size();
        if (n <= 3) break;
        for (std::size_t p = n; p-- > 1;) {
            bool hit = false;
            for (std::size_t q = 0; q < n; ++q)
                if (q != p && img[q] == p) hit = true;
            if (hit) continue;
            std::vector<std::size_t> keep, remap(n, 0);
            for (std::size_t q = 0; q < n; ++q)
                if (q != p) {
                    remap[q] = keep.size();
                    keep.push_back(q);
                }
            std::vector<std::size_t> images;
            for (auto q : keep) images.push_back(remap[img[q]]);
            RandomInstance cand{cur.trial, cur.mode, TableMap<Rational>(space.subspace(keep), std::move(images))};
            if (verdict(theorem, cand.map, 0, 1).status == TheoremStatus::refuted) {
                cur = std::move(cand);
                shrunk = true;
                break;
            }
        }
    }
    return cur;
}

/// Runs `theorem` over the random stream, collecting refuting instances in
/// trial order. The seeded 3-point counterexample is always tried first.
inline SearchFindings search_refutations(TheoremId theorem, const SearchConfig& config, bool minimize = true,
                                         unsigned workers = 0) {
    validate(config);
    SearchFindings f;
    f.theorem = theorem;
    f.config = config;

    auto seeded = detail::run_trial(theorem, seeded_counterexample());
    if (seeded.hit) f.hits.push_back(std::move(*seeded.hit));

    struct Acc {
        std::size_t passed = 0;
        std::vector<Refutation> hits;
        std::vector<std::int64_t> two;
    };
    auto acc = ordered_parallel_reduce<Acc>(
        config.trials, [] { return Acc{}; },
        [&](std::size_t t, Acc& a) {
            const auto inst = random_instance(config, t);
            auto o = detail::run_trial(theorem, inst);
            a.passed += o.hypotheses_pass ? 1 : 0;
            if (o.two_fixed) a.two.push_back(inst.trial);
            if (o.hit) a.hits.push_back(std::move(*o.hit));
        },
        [](Acc& into, Acc&& from) {
            into.passed += from.passed;
            for (auto& h : from.hits) into.hits.push_back(std::move(h));
            into.two.insert(into.two.end(), from.two.begin(), from.two.end());
        },
        workers);
    f.trials_run = config.trials;
    f.hypotheses_passed = acc.passed;
    f.two_fixed_point_trials = std::move(acc.two);
    for (auto& h : acc.hits) f.hits.push_back(std::move(h));
    if (minimize)
        for (auto& h : f.hits) h.minimized = minimize_refutation(theorem, h.instance);
    return f;
}

/// Cross-checks of the fixed-point theorems over a random stream.
struct TheoremValidation {
    std::size_t trials = 0;
    std::size_t corrected_hypotheses = 0;   // large TPC and no period-2 point
    std::size_t corrected_violations = 0;   // ... with 0 or > 2 fixed points
    std::size_t uniform_tpc = 0;
    std::size_t uniform_tpc_violations = 0;  // > 2 fixed points
    std::size_t petrov_hypotheses = 0;       // uniform TPC and no period-2 point
    std::size_t petrov_violations = 0;       // not 1 or 2 fixed points
    std::size_t large_contraction = 0;
    std::size_t burton_violations = 0;       // not exactly one fixed point
    std::vector<std::int64_t> violating_trials;
};

inline TheoremValidation validate_theorems(const SearchConfig& config, unsigned workers = 0) {
    validate(config);
    auto out = ordered_parallel_reduce<TheoremValidation>(
        config.trials, [] { return TheoremValidation{}; },
        [&](std::size_t t, TheoremValidation& a) {
            const auto inst = random_instance(config, t);
            const auto report = full_report(inst.map, default_eps_grid<Rational>(), 1);
            const auto fixed = enumerate_fixed_points(inst.map).size();
            const bool no_p2 = detect_period2(inst.map, inst.map.points()).empty();
            bool bad = false;
            a.trials = 1;
            if (report.large_tpc.pass && no_p2) {
                ++a.corrected_hypotheses;
                if (fixed == 0 || fixed > 2) ++a.corrected_violations, bad = true;
            }
            if (report.uniform_tpc.pass) {
                ++a.uniform_tpc;
                if (fixed > 2) ++a.uniform_tpc_violations, bad = true;
                if (no_p2) {
                    ++a.petrov_hypotheses;
                    if (fixed == 0 || fixed > 2) ++a.petrov_violations, bad = true;
                }
            }
            if (report.large_contraction.pass) {
                ++a.large_contraction;
                if (fixed != 1) ++a.burton_violations, bad = true;
            }
            if (bad) a.violating_trials.push_back(inst.trial);
        },
        [](TheoremValidation& into, TheoremValidation&& from) {
            into.trials += from.trials;
            into.corrected_hypotheses += from.corrected_hypotheses;
            into.corrected_violations += from.corrected_violations;
            into.uniform_tpc += from.uniform_tpc;
            into.uniform_tpc_violations += from.uniform_tpc_violations;
            into.petrov_hypotheses += from.petrov_hypotheses;
            into.petrov_violations += from.petrov_violations;
            into.large_contraction += from.large_contraction;
            into.burton_violations += from.burton_violations;
            into.violating_trials.insert(into.violating_trials.end(), from.violating_trials.begin(),
                                         from.violating_trials.end());
        },
        workers);
    return out;
}

}  // namespace contraction_lab
