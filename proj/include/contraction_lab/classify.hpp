#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "contraction_lab/errors.hpp"
#include "contraction_lab/metric_space.hpp"
#include "contraction_lab/parallel.hpp"
#include "contraction_lab/scalar.hpp"
#include "contraction_lab/self_map.hpp"

namespace contraction_lab {

enum class EnumerationScope { exact, sampled };

inline std::string to_string(EnumerationScope s) { return s == EnumerationScope::exact ? "exact" : "sampled"; }

/// The finite data every classifier needs: pairwise distances of the
/// enumerated points and of their images.
template <DistanceScalar S>
struct Scope {
    std::vector<std::string> labels;
    DistTable<S> dist;
    DistTable<S> image_dist;
    EnumerationScope kind = EnumerationScope::exact;
    /// Grid step of the sampled continuous part; 0 for exhaustive scopes.
    double resolution = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
};

template <SelfMapLike Map>
Scope<typename Map::scalar_type> make_scope(const Map& map, const std::vector<typename Map::point_type>& points,
                                            EnumerationScope kind = EnumerationScope::exact,
                                            double resolution = 0.0) {
    using S = typename Map::scalar_type;
    const auto& space = map.space();
    const std::size_t n = points.size();
    std::vector<typename Map::point_type> images;
    images.reserve(n);
    Scope<S> scope;
    scope.kind = kind;
    scope.resolution = resolution;
    scope.dist = DistTable<S>(n);
    scope.image_dist = DistTable<S>(n);
    for (const auto& p : points) {
        images.push_back(map.apply(p));
        scope.labels.push_back(space.label(p));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            scope.dist(i, j) = scope.dist(j, i) = space.distance(points[i], points[j]);
            scope.image_dist(i, j) = scope.image_dist(j, i) = space.distance(images[i], images[j]);
        }
    }
    return scope;
}

/// A pair (arity 2) or triple (arity 3) of scope indices together with both
/// sides of the inequality it was tested against: lhs is the image distance
/// or perimeter, rhs the original one.
template <DistanceScalar S>
struct Witness {
    std::size_t arity = 0;
    std::array<std::size_t, 3> index{};
    S lhs{};
    S rhs{};
    /// Indices refer to the refined scope rather than the reported one.
    bool refined = false;

    [[nodiscard]] S ratio() const { return lhs / rhs; }

    [[nodiscard]] bool lex_less(const Witness& o) const {
        return std::lexicographical_compare(index.begin(), index.begin() + arity, o.index.begin(),
                                            o.index.begin() + o.arity);
    }
};

/// Running supremum of lhs/rhs. Ties go to the lexicographically smallest
/// witness, so merging is associative, commutative and deterministic.
template <DistanceScalar S>
struct SupTracker {
    std::optional<Witness<S>> best;
    S best_ratio{};

    void offer(const Witness<S>& w, const S& ratio) {
        if (!best || best_ratio < ratio || (!(ratio < best_ratio) && w.lex_less(*best))) {
            best = w;
            best_ratio = ratio;
        }
    }
    void merge(const SupTracker& o) {
        if (o.best) offer(*o.best, o.best_ratio);
    }
};

enum class ModulusKind { pairwise, triple };

inline std::string to_string(ModulusKind k) { return k == ModulusKind::pairwise ? "pairwise" : "triple"; }

template <DistanceScalar S>
struct ModulusEntry {
    S eps{};
    /// Supremum of ratios over qualifying pairs/triples; empty when vacuous.
    std::optional<S> delta;
    std::optional<Witness<S>> witness;
    /// Added at eps = smallest scope distance so that every pair/triple is covered.
    bool scope_floor = false;
    /// Sampled scopes only: eps too small for the grid to resolve.
    bool below_resolution = false;
    /// Sampled scopes only: delta at double resolution.
    std::optional<S> refined_delta;
    bool gap_vanishes = false;

    [[nodiscard]] bool vacuous() const noexcept { return !delta.has_value(); }
};

template <DistanceScalar S>
struct ModulusTable {
    ModulusKind kind = ModulusKind::pairwise;
    std::vector<ModulusEntry<S>> entries;  // eps ascending

    /// Entry at the largest eps not exceeding `eps`, or nullptr.
    [[nodiscard]] const ModulusEntry<S>* lookup_at_most(const S& eps) const {
        const ModulusEntry<S>* hit = nullptr;
        for (const auto& e : entries)
            if (ScalarTraits<S>::less_equal(e.eps, eps)) hit = &e;
        return hit;
    }
};

template <DistanceScalar S>
struct StrictVerdict {
    bool pass = true;
    std::optional<Witness<S>> violation;  // first violation in lexicographic order
};

template <DistanceScalar S>
struct ModulusVerdict {
    bool pass = false;
    /// Every non-vacuous delta < 1 (condition 2 / (ii) alone, before the trend test).
    bool deltas_below_one = false;
    ModulusTable<S> table;
    std::string reason;
    std::optional<Witness<S>> witness;
};

template <DistanceScalar S>
struct AlphaVerdict {
    bool pass = false;
    std::optional<S> alpha;
    std::optional<Witness<S>> witness;
    std::optional<S> refined_alpha;
    bool gap_vanishes = false;
    std::string reason;
};

template <DistanceScalar S>
struct ContractionReport {
    EnumerationScope scope = EnumerationScope::exact;
    std::size_t points = 0;
    double resolution = 0.0;
    std::vector<std::string> labels;
    std::vector<std::string> refined_labels;  // sampled scopes only
    StrictVerdict<S> pairwise_strict;
    ModulusVerdict<S> large_contraction;
    StrictVerdict<S> triple_strict;
    AlphaVerdict<S> uniform_tpc;
    ModulusVerdict<S> large_tpc;

    [[nodiscard]] const std::vector<std::string>& labels_for(const Witness<S>& w) const {
        return w.refined ? refined_labels : labels;
    }
};

/// Default eps grid {2^-9, 2^-8, ..., 1, 2, 4}.
template <DistanceScalar S>
std::vector<S> default_eps_grid() {
    std::vector<S> g;
    for (int e = -9; e <= 2; ++e) {
        g.push_back(e < 0 ? ScalarTraits<S>::from_ratio(1, std::int64_t{1} << -e)
                          : ScalarTraits<S>::from_ratio(std::int64_t{1} << e, 1));
    }
    return g;
}

namespace detail {

template <DistanceScalar S>
std::vector<S> checked_eps_grid(std::vector<S> eps) {
    if (eps.empty()) throw InputError("eps grid must not be empty");
    for (const auto& e : eps)
        if (!(ScalarTraits<S>::zero() < e)) throw InputError("eps grid entries must be positive");
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    return eps;
}

/// Number of grid entries eps with eps <= key (within tolerance).
template <DistanceScalar S>
std::size_t bucket_of(const std::vector<S>& eps, const S& key) {
    std::size_t lo = 0, hi = eps.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (ScalarTraits<S>::less_equal(eps[mid], key))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

template <DistanceScalar S>
struct ScanResult {
    std::optional<Witness<S>> first_violation;
    SupTracker<S> overall;
    std::vector<SupTracker<S>> buckets;  // buckets[b]: key admits exactly the first b eps entries

    explicit ScanResult(std::size_t n_eps = 0) : buckets(n_eps + 1) {}

    void merge(ScanResult&& later) {
        if (!first_violation) first_violation = std::move(later.first_violation);
        overall.merge(later.overall);
        for (std::size_t b = 0; b < buckets.size(); ++b) buckets[b].merge(later.buckets[b]);
    }
};

template <DistanceScalar S>
void record(ScanResult<S>& acc, const std::vector<S>& eps, const Witness<S>& w, const S& key) {
    const S ratio = w.ratio();
    if (!ScalarTraits<S>::less(w.lhs, w.rhs) && !acc.first_violation) acc.first_violation = w;
    acc.overall.offer(w, ratio);
    acc.buckets[bucket_of(eps, key)].offer(w, ratio);
}

template <DistanceScalar S>
ScanResult<S> scan_pairs(const Scope<S>& scope, const std::vector<S>& eps, unsigned workers) {
    const std::size_t n = scope.size();
    return ordered_parallel_reduce<ScanResult<S>>(
        n, [&] { return ScanResult<S>(eps.size()); },
        [&](std::size_t i, ScanResult<S>& acc) {
            for (std::size_t j = i + 1; j < n; ++j) {
                Witness<S> w{2, {i, j, 0}, scope.image_dist(i, j), scope.dist(i, j)};
                record(acc, eps, w, scope.dist(i, j));
            }
        },
        [](ScanResult<S>& into, ScanResult<S>&& from) { into.merge(std::move(from)); }, workers);
}

template <DistanceScalar S>
ScanResult<S> scan_triples(const Scope<S>& scope, const std::vector<S>& eps, unsigned workers) {
    const std::size_t n = scope.size();
    const auto& d = scope.dist;
    const auto& e = scope.image_dist;
    return ordered_parallel_reduce<ScanResult<S>>(
        n, [&] { return ScanResult<S>(eps.size()); },
        [&](std::size_t i, ScanResult<S>& acc) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const S dij = d(i, j);
                const S eij = e(i, j);
                for (std::size_t k = j + 1; k < n; ++k) {
                    const S& dik = d(i, k);
                    const S& djk = d(j, k);
                    Witness<S> w{3, {i, j, k}, eij + e(j, k) + e(i, k), dij + djk + dik};
                    const S& key = std::max({dij, djk, dik});
                    record(acc, eps, w, key);
                }
            }
        },
        [](ScanResult<S>& into, ScanResult<S>&& from) { into.merge(std::move(from)); }, workers);
}

template <DistanceScalar S>
S min_distance(const Scope<S>& scope) {
    std::optional<S> m;
    for (std::size_t i = 0; i < scope.size(); ++i)
        for (std::size_t j = i + 1; j < scope.size(); ++j)
            if (!m || scope.dist(i, j) < *m) m = scope.dist(i, j);
    return *m;
}

template <DistanceScalar S>
ModulusTable<S> build_table(ModulusKind kind, const std::vector<S>& eps, const ScanResult<S>& scan) {
    ModulusTable<S> table{kind, {}};
    // delta(eps_j) = sup over buckets b > j.
    SupTracker<S> suffix;
    std::vector<ModulusEntry<S>> rev;
    for (std::size_t j = eps.size(); j-- > 0;) {
        suffix.merge(scan.buckets[j + 1]);
        ModulusEntry<S> entry;
        entry.eps = eps[j];
        if (suffix.best) {
            entry.delta = suffix.best_ratio;
            entry.witness = suffix.best;
        }
        rev.push_back(std::move(entry));
    }
    table.entries.assign(rev.rbegin(), rev.rend());
    return table;
}

template <DistanceScalar S>
std::vector<S> with_floor(const Scope<S>& scope, const std::vector<S>& eps, bool& added) {
    const S floor = min_distance(scope);
    added = floor < eps.front();
    if (!added) return eps;
    std::vector<S> out{floor};
    out.insert(out.end(), eps.begin(), eps.end());
    return out;
}

template <DistanceScalar S>
ModulusVerdict<S> modulus_verdict(ModulusKind kind, const std::vector<S>& eps, bool floor_added,
                                  const ScanResult<S>& scan) {
    ModulusVerdict<S> v;
    v.table = build_table(kind, eps, scan);
    if (floor_added) v.table.entries.front().scope_floor = true;
    v.deltas_below_one = true;
    for (const auto& e : v.table.entries) {
        if (e.vacuous()) continue;
        if (!ScalarTraits<S>::less(*e.delta, ScalarTraits<S>::one())) {
            v.deltas_below_one = false;
            if (!v.witness) {
                v.witness = e.witness;
                v.reason = "delta(" + ScalarTraits<S>::to_string(e.eps) + ") = " + ScalarTraits<S>::to_string(*e.delta) +
                           " is not below 1";
            }
        }
    }
    v.pass = v.deltas_below_one;
    return v;
}

template <DistanceScalar S>
bool gap_vanishes(const S& coarse, const S& refined) {
    const double g0 = 1.0 - ScalarTraits<S>::to_double(coarse);
    const double g1 = 1.0 - ScalarTraits<S>::to_double(refined);
    return g0 > 0.0 && g1 <= (2.0 / 3.0) * g0;
}

}  // namespace detail

/// d(Tx,Ty) < d(x,y) for every distinct pair of the scope.
template <DistanceScalar S>
StrictVerdict<S> check_pairwise_strict(const Scope<S>& scope, unsigned workers = 0) {
    if (scope.size() < 2) throw InputError("pairwise check needs at least 2 points");
    auto scan = detail::scan_pairs(scope, std::vector<S>{}, workers);
    return {!scan.first_violation.has_value(), scan.first_violation};
}

/// delta(eps) = sup d(Tx,Ty)/d(x,y) over pairs with d(x,y) >= eps.
template <DistanceScalar S>
ModulusVerdict<S> estimate_large_contraction_modulus(const Scope<S>& scope, std::vector<S> eps_grid,
                                                     unsigned workers = 0) {
    if (scope.size() < 2) throw InputError("pairwise modulus needs at least 2 points");
    bool floor_added = false;
    const auto eps = detail::with_floor(scope, detail::checked_eps_grid(std::move(eps_grid)), floor_added);
    const auto scan = detail::scan_pairs(scope, eps, workers);
    auto v = detail::modulus_verdict(ModulusKind::pairwise, eps, floor_added, scan);
    if (v.pass) v.reason = "every non-vacuous delta is below 1";
    return v;
}

namespace detail {

template <DistanceScalar S>
AlphaVerdict<S> alpha_from_scan(const ScanResult<S>& scan) {
    AlphaVerdict<S> v;
    v.alpha = scan.overall.best_ratio;
    v.witness = scan.overall.best;
    v.pass = ScalarTraits<S>::less(*v.alpha, ScalarTraits<S>::one());
    v.reason = v.pass ? "alpha below 1" : "alpha is not below 1";
    return v;
}

template <DistanceScalar S>
struct TripleAnalysis {
    AlphaVerdict<S> alpha;
    ModulusVerdict<S> modulus;
    StrictVerdict<S> strict;
};

/// One pass over all triples feeds alpha, the modulus table and strictness.
template <DistanceScalar S>
TripleAnalysis<S> analyze_triples(const Scope<S>& scope, std::vector<S> eps_grid, unsigned workers) {
    if (scope.size() < 3) throw InputError("triple scan needs at least 3 points");
    bool floor_added = false;
    const auto eps = with_floor(scope, checked_eps_grid(std::move(eps_grid)), floor_added);
    const auto scan = scan_triples(scope, eps, workers);
    TripleAnalysis<S> out;
    out.alpha = alpha_from_scan(scan);
    out.modulus = modulus_verdict(ModulusKind::triple, eps, floor_added, scan);
    out.strict = {!scan.first_violation.has_value(), scan.first_violation};
    auto& v = out.modulus;
    if (v.pass && !out.strict.pass) {
        v.pass = false;
        v.witness = out.strict.violation;
        v.reason = "strict perimeter decrease fails";
    } else if (v.pass) {
        v.reason = "strict on every triple and every non-vacuous delta is below 1";
    }
    return out;
}

}  // namespace detail

/// sup P(Tx,Ty,Tz)/P(x,y,z) over pairwise distinct triples.
template <DistanceScalar S>
AlphaVerdict<S> estimate_tpc_alpha(const Scope<S>& scope, unsigned workers = 0) {
    if (scope.size() < 3) throw InputError("triple scan needs at least 3 points");
    return detail::alpha_from_scan(detail::scan_triples(scope, std::vector<S>{}, workers));
}

/// delta(eps) = sup P(T.)/P(.) over triples whose largest side is >= eps,
/// plus the strict triple inequality.
template <DistanceScalar S>
std::pair<ModulusVerdict<S>, StrictVerdict<S>> estimate_large_tpc_modulus(const Scope<S>& scope,
                                                                          std::vector<S> eps_grid,
                                                                          unsigned workers = 0) {
    auto a = detail::analyze_triples(scope, std::move(eps_grid), workers);
    return {std::move(a.modulus), std::move(a.strict)};
}

namespace detail {

template <DistanceScalar S>
void apply_trend(ModulusVerdict<S>& coarse, const ModulusVerdict<S>& refined, double resolution) {
    for (std::size_t i = 0; i < coarse.table.entries.size(); ++i) {
        auto& e = coarse.table.entries[i];
        if (e.scope_floor) continue;
        if (ScalarTraits<S>::to_double(e.eps) < 4.0 * resolution) {
            e.below_resolution = true;
            continue;
        }
        const auto it = std::find_if(refined.table.entries.begin(), refined.table.entries.end(),
                                     [&](const auto& r) { return !r.scope_floor && r.eps == e.eps; });
        if (it == refined.table.entries.end() || e.vacuous() || it->vacuous()) continue;
        e.refined_delta = it->delta;
        e.gap_vanishes = gap_vanishes(*e.delta, *it->delta);
        if (e.gap_vanishes && coarse.pass) {
            coarse.pass = false;
            coarse.witness = it->witness;
            if (coarse.witness) coarse.witness->refined = true;
            coarse.reason = "gap 1 - delta(" + ScalarTraits<S>::to_string(e.eps) + ") shrinks under refinement: " +
                            ScalarTraits<S>::to_string(*e.delta) + " -> " + ScalarTraits<S>::to_string(*it->delta);
        }
    }
}

}  // namespace detail

/// Runs every classifier on `scope`. For sampled scopes, `refined` is the
/// same space sampled at double resolution; an entry whose distance to 1
/// shrinks under refinement is treated as not bounded away from 1.
///
/// Throws InternalConsistencyError when a modulus certificate passes but the
/// corresponding strict inequality fails on the same scope.
template <DistanceScalar S>
ContractionReport<S> full_report(const Scope<S>& scope, const std::vector<S>& eps_grid,
                                 const Scope<std::type_identity_t<S>>* refined = nullptr, unsigned workers = 0) {
    ContractionReport<S> r;
    r.scope = scope.kind;
    r.points = scope.size();
    r.resolution = scope.resolution;
    r.labels = scope.labels;
    r.pairwise_strict = check_pairwise_strict(scope, workers);
    r.large_contraction = estimate_large_contraction_modulus(scope, eps_grid, workers);
    auto triples = detail::analyze_triples(scope, eps_grid, workers);
    r.uniform_tpc = std::move(triples.alpha);
    r.large_tpc = std::move(triples.modulus);
    r.triple_strict = std::move(triples.strict);

    if (r.large_contraction.deltas_below_one && !r.pairwise_strict.pass)
        throw InternalConsistencyError("large-contraction moduli pass but a pair violates d(Tx,Ty) < d(x,y)");
    if (r.large_tpc.deltas_below_one && !r.triple_strict.pass)
        throw InternalConsistencyError("large-TPC moduli pass but a triple violates strict perimeter decrease");

    if (!r.pairwise_strict.pass) {
        r.large_contraction.pass = false;
        r.large_contraction.witness = r.pairwise_strict.violation;
        r.large_contraction.reason = "d(Tx,Ty) < d(x,y) fails";
    }

    if (refined != nullptr) {
        r.refined_labels = refined->labels;
        const auto lc = estimate_large_contraction_modulus(*refined, eps_grid, workers);
        detail::apply_trend(r.large_contraction, lc, scope.resolution);
        const auto fine = detail::analyze_triples(*refined, eps_grid, workers);
        detail::apply_trend(r.large_tpc, fine.modulus, scope.resolution);
        const auto& alpha = fine.alpha;
        r.uniform_tpc.refined_alpha = alpha.alpha;
        r.uniform_tpc.gap_vanishes = detail::gap_vanishes(*r.uniform_tpc.alpha, *alpha.alpha);
        if (r.uniform_tpc.gap_vanishes && r.uniform_tpc.pass) {
            r.uniform_tpc.pass = false;
            r.uniform_tpc.witness = alpha.witness;
            if (r.uniform_tpc.witness) r.uniform_tpc.witness->refined = true;
            r.uniform_tpc.reason = "gap 1 - alpha shrinks under refinement: " +
                                   ScalarTraits<S>::to_string(*r.uniform_tpc.alpha) + " -> " +
                                   ScalarTraits<S>::to_string(*alpha.alpha);
        }
    }
    return r;
}

/// Exhaustive scope over every point of a finite map.
template <DistanceScalar S>
Scope<S> exhaustive_scope(const TableMap<S>& map) {
    return make_scope(map, map.points(), EnumerationScope::exact, 0.0);
}

/// Sampled scope at `level` (0 = configured resolution).
template <DistanceScalar S>
Scope<S> sampled_scope(const FormulaMap<S>& map, int level = 0) {
    return make_scope(map, map.points(level), EnumerationScope::sampled, map.space().grid_step(level));
}

template <DistanceScalar S>
ContractionReport<S> full_report(const TableMap<S>& map, const std::vector<S>& eps_grid, unsigned workers = 0) {
    return full_report(exhaustive_scope(map), eps_grid, nullptr, workers);
}

template <DistanceScalar S>
ContractionReport<S> full_report(const FormulaMap<S>& map, const std::vector<S>& eps_grid, unsigned workers = 0) {
    const auto coarse = sampled_scope(map, 0);
    const auto fine = sampled_scope(map, 1);
    return full_report(coarse, eps_grid, &fine, workers);
}

}  // namespace contraction_lab
