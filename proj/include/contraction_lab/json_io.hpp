#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "contraction_lab/classify.hpp"
#include "contraction_lab/dynamics.hpp"
#include "contraction_lab/errors.hpp"
#include "contraction_lab/metric_space.hpp"
#include "contraction_lab/self_map.hpp"
#include "contraction_lab/theorem_lab.hpp"

namespace contraction_lab::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Spaces and maps

/// Mode recorded in a space document (default "exact").
inline ArithmeticMode document_mode(const json& space_doc) {
    if (!space_doc.is_object()) throw InputError("space document must be a JSON object");
    if (!space_doc.contains("mode")) return ArithmeticMode::exact;
    return parse_mode(space_doc.at("mode").get<std::string>());
}

template <DistanceScalar S>
json space_to_json(const FiniteMetricSpace<S>& space) {
    json dist = json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < space.size(); ++j) row.push_back(ScalarTraits<S>::to_string(space.distance(i, j)));
        dist.push_back(std::move(row));
    }
    return json{{"points", space.labels()}, {"dist", std::move(dist)}, {"mode", to_string(ScalarTraits<S>::mode)}};
}

namespace detail {

template <DistanceScalar S>
S scalar_from_json(const json& v) {
    if (v.is_string()) return ScalarTraits<S>::parse(v.get<std::string>());
    if (v.is_number_integer()) return ScalarTraits<S>::from_ratio(v.get<std::int64_t>(), 1);
    if (v.is_number()) return ScalarTraits<S>::parse(v.dump());
    throw InputError("distance entries must be numbers or \"p/q\" strings, got " + v.dump());
}

}  // namespace detail

/// Parses {"points": [...], "dist": [[...]], "mode": ...}. Rejects tables
/// that are not square or violate the metric axioms.
template <DistanceScalar S>
FiniteMetricSpace<S> space_from_json(const json& doc) {
    try {
        const auto& pts = doc.at("points");
        const auto& dist = doc.at("dist");
        if (!pts.is_array() || !dist.is_array()) throw InputError("'points' and 'dist' must be arrays");
        std::vector<std::string> labels;
        for (const auto& p : pts) labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
        std::vector<std::vector<S>> rows;
        for (const auto& r : dist) {
            if (!r.is_array()) throw InputError("'dist' rows must be arrays");
            std::vector<S> row;
            for (const auto& v : r) row.push_back(detail::scalar_from_json<S>(v));
            rows.push_back(std::move(row));
        }
        return FiniteMetricSpace<S>(std::move(labels), DistTable<S>::from_rows(rows));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed space document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

template <DistanceScalar S>
json map_to_json(const TableMap<S>& map) {
    return json{{"space", space_to_json(map.space())}, {"map", map.images()}};
}

template <DistanceScalar S>
TableMap<S> map_from_json(const json& doc) {
    try {
        auto space = space_from_json<S>(doc.at("space"));
        std::vector<std::size_t> images;
        for (const auto& v : doc.at("map")) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
                throw InputError("map entries must be non-negative point indices");
            images.push_back(v.get<std::size_t>());
        }
        return TableMap<S>(std::move(space), std::move(images));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed map document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Reports

template <DistanceScalar S>
json witness_to_json(const std::vector<std::string>& labels, const Witness<S>& w) {
    json pts = json::array();
    for (std::size_t i = 0; i < w.arity; ++i) pts.push_back(labels[w.index[i]]);
    return json{{"points", std::move(pts)},
                {"lhs", ScalarTraits<S>::to_string(w.lhs)},
                {"rhs", ScalarTraits<S>::to_string(w.rhs)},
                {"ratio", ScalarTraits<S>::to_string(w.ratio())},
                {"refined_scope", w.refined}};
}

template <DistanceScalar S>
json optional_witness(const std::vector<std::string>& labels, const std::optional<Witness<S>>& w) {
    return w ? witness_to_json(labels, *w) : json(nullptr);
}

template <DistanceScalar S>
json table_to_json(const std::vector<std::string>& labels, const ModulusTable<S>& t) {
    json entries = json::array();
    for (const auto& e : t.entries) {
        json j{{"eps", ScalarTraits<S>::to_string(e.eps)},
               {"delta", e.delta ? json(ScalarTraits<S>::to_string(*e.delta)) : json(nullptr)},
               {"vacuous", e.vacuous()},
               {"witness", optional_witness(labels, e.witness)}};
        if (e.scope_floor) j["scope_floor"] = true;
        if (e.below_resolution) j["below_resolution"] = true;
        if (e.refined_delta) {
            j["refined_delta"] = ScalarTraits<S>::to_string(*e.refined_delta);
            j["gap_vanishes"] = e.gap_vanishes;
        }
        entries.push_back(std::move(j));
    }
    return json{{"kind", to_string(t.kind)}, {"entries", std::move(entries)}};
}

template <DistanceScalar S>
json report_to_json(const ContractionReport<S>& r) {
    const auto& L = r.labels;
    auto ow = [&](const std::optional<Witness<S>>& w) {
        return w ? witness_to_json(r.labels_for(*w), *w) : json(nullptr);
    };
    auto strict = [&](const StrictVerdict<S>& v) {
        return json{{"pass", v.pass}, {"witness", ow(v.violation)}};
    };
    auto modulus = [&](const ModulusVerdict<S>& v) {
        return json{{"pass", v.pass},
                    {"reason", v.reason},
                    {"witness", ow(v.witness)},
                    {"table", table_to_json(L, v.table)}};
    };
    json alpha{{"pass", r.uniform_tpc.pass},
               {"alpha", r.uniform_tpc.alpha ? json(ScalarTraits<S>::to_string(*r.uniform_tpc.alpha)) : json(nullptr)},
               {"reason", r.uniform_tpc.reason},
               {"witness", ow(r.uniform_tpc.witness)}};
    if (r.uniform_tpc.refined_alpha) {
        alpha["refined_alpha"] = ScalarTraits<S>::to_string(*r.uniform_tpc.refined_alpha);
        alpha["gap_vanishes"] = r.uniform_tpc.gap_vanishes;
    }
    return json{{"enumeration_scope", to_string(r.scope)},
                {"mode", to_string(ScalarTraits<S>::mode)},
                {"points", r.points},
                {"resolution", r.resolution},
                {"is_pairwise_strict", strict(r.pairwise_strict)},
                {"large_contraction", modulus(r.large_contraction)},
                {"is_triple_strict", strict(r.triple_strict)},
                {"uniform_tpc", std::move(alpha)},
                {"large_tpc", modulus(r.large_tpc)}};
}

/// eps,delta rows of a modulus table; vacuous entries leave delta empty.
template <DistanceScalar S>
std::string table_to_csv(const ModulusTable<S>& t) {
    std::ostringstream os;
    os << "eps,delta\n";
    for (const auto& e : t.entries) {
        os << ScalarTraits<S>::to_string(e.eps) << ',';
        if (e.delta) os << ScalarTraits<S>::to_string(*e.delta);
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Orbits

template <typename P, DistanceScalar S>
json trace_to_json(const OrbitTrace<P, S>& tr) {
    using T = ScalarTraits<S>;
    json steps = json::array();
    for (std::size_t n = 0; n < tr.states.size(); ++n) {
        json s{{"n", n}, {"x", tr.labels[n]}};
        s["step_dist"] = n < tr.step_dist.size() ? json(T::to_string(tr.step_dist[n])) : json(nullptr);
        s["perimeter"] = n < tr.perimeters.size() ? json(T::to_string(tr.perimeters[n])) : json(nullptr);
        steps.push_back(std::move(s));
    }
    return json{{"x0", tr.labels.front()},
                {"halted_by", to_string(tr.halted_by)},
                {"halt_index", tr.halt_index},
                {"residual", T::to_string(tr.residual)},
                {"orbit_bound", T::to_string(tr.orbit_bound)},
                {"states", std::move(steps)}};
}

/// Columns n, x_n, d(x_n,x_{n+1}), P_n; values beyond the trace are blank.
template <typename P, DistanceScalar S>
std::string trace_to_csv(const OrbitTrace<P, S>& tr) {
    using T = ScalarTraits<S>;
    std::ostringstream os;
    os << "n,x_n,d(x_n,x_{n+1}),P_n\n";
    for (std::size_t n = 0; n < tr.states.size(); ++n) {
        os << n << ',' << tr.labels[n] << ',';
        if (n < tr.step_dist.size()) os << T::to_string(tr.step_dist[n]);
        os << ',';
        if (n < tr.perimeters.size()) os << T::to_string(tr.perimeters[n]);
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Theorem verdicts and findings

inline json verdict_to_json(const TheoremVerdict& v) {
    json hyps = json::array();
    for (const auto& h : v.hypotheses)
        hyps.push_back(json{{"name", h.name}, {"status", to_string(h.status)}, {"detail", h.detail}, {"witnesses", h.witnesses}});
    const auto& c = v.conclusion;
    json concl{{"fixed_point_exists", c.fixed_point_exists},
               {"fixed_points", c.fixed_points},
               {"count_le_two", c.count_le_two},
               {"unique", c.unique ? json(*c.unique) : json(nullptr)}};
    if (c.orbit_limit) {
        concl["orbit_limit"] = *c.orbit_limit;
        concl["orbit_limit_residual"] = *c.orbit_limit_residual;
    }
    json j{{"theorem", to_string(v.theorem)},
           {"x0", v.x0},
           {"hypotheses", std::move(hyps)},
           {"conclusion", std::move(concl)},
           {"status", to_string(v.status)},
           {"scope_qualified", v.scope_qualified}};
    if (v.uniqueness_remark_holds) j["uniqueness_remark_holds"] = *v.uniqueness_remark_holds;
    if (!v.notes.empty()) j["notes"] = v.notes;
    return j;
}

inline json instance_to_json(const RandomInstance& inst) {
    json j = map_to_json(inst.map);
    j["trial"] = inst.trial;
    j["map_distribution"] = to_string(inst.mode);
    return j;
}

inline json findings_to_json(const SearchFindings& f) {
    json hits = json::array();
    for (const auto& h : f.hits) {
        json j{{"instance", instance_to_json(h.instance)}, {"verdict", verdict_to_json(h.verdict)}};
        if (h.minimized) j["minimized"] = instance_to_json(*h.minimized);
        hits.push_back(std::move(j));
    }
    return json{{"theorem", to_string(f.theorem)},
                {"seed", f.config.seed},
                {"trials", f.trials_run},
                {"size_range", json::array({f.config.min_size, f.config.max_size})},
                {"dist_denominator", f.config.dist_denominator},
                {"map_distribution", to_string(f.config.maps)},
                {"hypotheses_passed", f.hypotheses_passed},
                {"hit_count", f.hits.size()},
                {"two_fixed_point_trials", f.two_fixed_point_trials},
                {"hits", std::move(hits)}};
}

}  // namespace contraction_lab::io
