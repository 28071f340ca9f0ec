// Acceptance suite: one PASS/FAIL line per criterion, sub-check details below it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "contraction_lab/catalog.hpp"
#include "contraction_lab/classify.hpp"
#include "contraction_lab/dynamics.hpp"
#include "contraction_lab/theorem_lab.hpp"

using namespace contraction_lab;

namespace {

struct Sub {
    std::string what;
    bool pass;
    std::string got;
};

struct Criterion {
    int number;
    std::string title;
    double time_limit_s;
    std::function<std::vector<Sub>()> run;
};

std::string pair_labels(const auto& report, const auto& w) {
    if (!w) return "none";
    const auto& labels = report.labels_for(*w);
    std::string s = "(";
    for (std::size_t i = 0; i < w->arity; ++i) s += (i ? "," : "") + labels[w->index[i]];
    return s + ")";
}

template <DistanceScalar S>
const ModulusEntry<S>* at(const ModulusTable<S>& t, const S& eps) {
    for (const auto& e : t.entries)
        if (!e.scope_floor && ScalarTraits<S>::equal(e.eps, eps)) return &e;
    return nullptr;
}

std::string num(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::vector<Sub> criterion1() {
    std::vector<Sub> out;
    const auto e = make_period2_counterexample<Rational>();
    const auto& m = std::get<TableMap<Rational>>(e.map);
    const auto r = full_report(m, default_eps_grid<Rational>());
    out.push_back({"uniform TPC alpha = 1/2", *r.uniform_tpc.alpha == Rational(1, 2), r.uniform_tpc.alpha->to_string()});
    out.push_back({"large TPC pass", r.large_tpc.pass, r.large_tpc.pass ? "pass" : "fail"});
    const auto w = pair_labels(r, r.large_contraction.witness);
    out.push_back({"large contraction fail with witness pair",
                   !r.large_contraction.pass && r.large_contraction.witness && r.large_contraction.witness->arity == 2,
                   w});
    out.push_back({"no fixed points", enumerate_fixed_points(m).empty(), std::to_string(enumerate_fixed_points(m).size())});
    const auto p2 = detect_period2(m, m.points());
    out.push_back({"period-2 points {0,1}", p2 == std::vector<std::size_t>{0, 1}, std::to_string(p2.size()) + " points"});
    const auto vu = verdict(TheoremId::mesmouli_uncorrected, m, 0);
    out.push_back({"uncorrected theorem refuted", vu.status == TheoremStatus::refuted, to_string(vu.status)});
    const auto vc = verdict(TheoremId::corrected_main, m, 0);
    out.push_back({"corrected theorem inapplicable", vc.status == TheoremStatus::inapplicable, to_string(vc.status)});
    return out;
}

std::vector<Sub> criterion2() {
    std::vector<Sub> out;
    const auto e = make_burton_logistic<double>();
    const auto& m = std::get<FormulaMap<double>>(e.map);
    const double h = m.space().grid_step();
    out.push_back({"grid step 1/512", h == 1.0 / 512, num(h)});
    const auto r = full_report(m, default_eps_grid<double>());
    for (double eps : {0.125, 0.25, 0.5}) {
        const auto* en = at(r.large_contraction.table, eps);
        const double d = en && en->delta ? *en->delta : -1.0;
        out.push_back({"LC delta(" + num(eps) + ") within 2h of 1/(1+eps)", std::fabs(d - 1.0 / (1.0 + eps)) <= 2 * h,
                       num(d)});
    }
    out.push_back({"sup TPC ratio >= 0.99", *r.uniform_tpc.alpha >= 0.99, num(*r.uniform_tpc.alpha)});
    const auto ex = make_burton_logistic<Rational>();
    const auto tr = picard_orbit(std::get<FormulaMap<Rational>>(ex.map), Rational(1), 200);
    const bool ok = tr.states.size() > 200 && tr.states[200] == Rational(1, 201);
    out.push_back({"exact x_200 = 1/201", ok, tr.states.size() > 200 ? tr.states[200].to_string() : "short trace"});
    return out;
}

std::vector<Sub> criterion3() {
    std::vector<Sub> out;
    const auto e = make_floor_half<Rational>();
    const auto& m = std::get<TableMap<Rational>>(e.map);
    out.push_back({"space {0..256}", m.space().size() == 257, std::to_string(m.space().size())});
    const auto r = full_report(m, default_eps_grid<Rational>());
    const auto alpha = *r.uniform_tpc.alpha;
    out.push_back({"sup triple ratio = 3/4 exactly", alpha == Rational(3, 4),
                   alpha.to_string() + " at " + pair_labels(r, r.uniform_tpc.witness)});
    const auto& w = r.large_contraction.witness;
    out.push_back({"LC fail with witness (1,2) at ratio 1",
                   !r.large_contraction.pass && pair_labels(r, w) == "(1,2)" && w->ratio() == Rational(1),
                   pair_labels(r, w) + (w ? " ratio " + w->ratio().to_string() : "")});
    const auto v = verdict(TheoremId::corrected_main, m, 256);
    const bool fixed0 = v.conclusion.fixed_points == std::vector<std::string>{"0"};
    out.push_back({"corrected theorem confirmed, fixed points {0}", v.status == TheoremStatus::confirmed && fixed0,
                   to_string(v.status)});
    return out;
}

std::vector<Sub> criterion4() {
    std::vector<Sub> out;
    const auto e = make_composite<double>();
    const auto& m = std::get<FormulaMap<double>>(e.map);
    const auto r = full_report(m, default_eps_grid<double>());
    const auto& w = r.large_contraction.witness;
    const bool a = !r.large_contraction.pass && w && w->arity == 2 && w->ratio() >= 0.98 - 1e-12 &&
                   std::fabs(w->rhs - 1.0) <= 1e-12;
    out.push_back({"(a) LC fail, pair witness ratio >= 0.98 at distance 1", a,
                   pair_labels(r, w) + (w ? " ratio " + num(w->ratio()) + " d " + num(w->rhs) : "")});
    out.push_back({"(b) uniform TPC fail, sup ratio >= 0.985", !r.uniform_tpc.pass && *r.uniform_tpc.alpha >= 0.985,
                   num(*r.uniform_tpc.alpha)});
    const auto* half = at(r.large_tpc.table, 0.5);
    const auto* two = at(r.large_tpc.table, 2.0);
    const bool c = r.large_tpc.pass && half && half->delta && *half->delta <= 2.0 / 3.0 + 1e-9 && two && two->delta &&
                   *two->delta <= 0.5;
    out.push_back({"(c) large TPC pass, delta(1/2) <= 2/3, delta(2) <= 1/2", c,
                   std::string(r.large_tpc.pass ? "pass" : "fail") + " delta(1/2)=" +
                       (half && half->delta ? num(*half->delta) : "-") +
                       " delta(2)=" + (two && two->delta ? num(*two->delta) : "-")});
    return out;
}

std::vector<Sub> criterion5() {
    std::vector<Sub> out;
    SearchConfig c;
    c.seed = 42;
    c.trials = 10000;
    c.min_size = 3;
    c.max_size = 12;
    const auto v = validate_theorems(c);
    out.push_back({"10^4 trials", v.trials == 10000, std::to_string(v.trials)});
    out.push_back({"corrected hypotheses: 0 with no or > 2 fixed points", v.corrected_violations == 0,
                   std::to_string(v.corrected_violations) + " of " + std::to_string(v.corrected_hypotheses)});
    out.push_back({"uniform TPC: <= 2 fixed points", v.uniform_tpc_violations == 0,
                   std::to_string(v.uniform_tpc_violations) + " of " + std::to_string(v.uniform_tpc)});
    out.push_back({"large contraction: exactly one fixed point", v.burton_violations == 0,
                   std::to_string(v.burton_violations) + " of " + std::to_string(v.large_contraction)});
    return out;
}

/// Random large-TPC, period-2-free instances used by criteria 6 and 7.
std::vector<TableMap<Rational>> qualifying_instances(std::size_t trials, std::size_t& generated) {
    SearchConfig c;
    c.seed = 7;
    c.trials = trials;
    std::vector<TableMap<Rational>> keep;
    generated = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        auto inst = random_instance(c, t);
        if (!detect_period2(inst.map, inst.map.points()).empty()) continue;
        if (!full_report(inst.map, default_eps_grid<Rational>(), 1).large_tpc.pass) continue;
        keep.push_back(std::move(inst.map));
    }
    return keep;
}

std::vector<Sub> criterion6() {
    std::vector<Sub> out;
    std::size_t generated = 0;
    const auto maps = qualifying_instances(3000, generated);
    std::size_t orbits = 0, decrease_bad = 0, dist_bad = 0, lemma_triples = 0, lemma_bad = 0;
    for (const auto& m : maps) {
        const auto& sp = m.space();
        for (std::size_t x0 = 0; x0 < sp.size(); ++x0) {
            const auto tr = picard_orbit(m, x0, sp.size() + 2, Rational(0));
            ++orbits;
            if (!check_perimeter_decrease(tr).pass) ++decrease_bad;
            if (check_distance_below_perimeter(sp, tr)) ++dist_bad;
        }
        std::vector<Rational> eps0s = default_eps_grid<Rational>();
        for (std::size_t a = 0; a < sp.size(); ++a)
            for (std::size_t b = 0; b < sp.size(); ++b)
                for (std::size_t c = 0; c < sp.size(); ++c) {
                    const Rational p = perimeter(sp, a, b, c);
                    const Rational mx = std::max({sp.distance(a, b), sp.distance(b, c), sp.distance(a, c)});
                    auto probe = eps0s;
                    probe.push_back(p);
                    for (const auto& e0 : probe) {
                        if (!(e0 <= p)) continue;
                        ++lemma_triples;
                        if (!(e0 / Rational(3) <= mx)) ++lemma_bad;
                    }
                }
    }
    out.push_back({"qualifying instances found", !maps.empty(),
                   std::to_string(maps.size()) + " of " + std::to_string(generated)});
    out.push_back({"perimeter strictly decreasing until fixed point", decrease_bad == 0,
                   std::to_string(decrease_bad) + " violations over " + std::to_string(orbits) + " orbits"});
    out.push_back({"d(x_m,x_n) <= P(x_{m+1},x_m,x_n)", dist_bad == 0, std::to_string(dist_bad) + " violations"});
    out.push_back({"eps0/3 lemma on all triples", lemma_bad == 0,
                   std::to_string(lemma_bad) + " violations over " + std::to_string(lemma_triples) + " checks"});

    {
        const auto e = make_burton_logistic<double>();
        const auto& m = std::get<FormulaMap<double>>(e.map);
        const auto r = full_report(m, default_eps_grid<double>());
        const auto tr = picard_orbit(m, 1.0, 200);
        const auto d = geometric_decay_check(m.space(), tr, r.large_tpc.table, 0.25);
        out.push_back({"decay bound holds on burton_logistic from 1, eps0 = 1/4", d.pass() && !d.vacuous(),
                       std::to_string(d.bad_pairs.size()) + " qualifying pairs, " + std::to_string(d.violations.size()) +
                           " violations"});
    }
    {
        const auto e = make_period2_counterexample<Rational>();
        const auto& m = std::get<TableMap<Rational>>(e.map);
        const auto r = full_report(m, default_eps_grid<Rational>());
        OrbitOptions opts;
        opts.halt_on_period2 = false;
        const auto tr = picard_orbit(m, std::size_t{2}, 60, Rational(0), opts);
        const auto d = geometric_decay_check(m.space(), tr, r.large_tpc.table, Rational(1, 2));
        out.push_back({"decay bound fails on period2_counterexample from 2, eps0 = 1/2", !d.pass(),
                       std::to_string(d.bad_pairs.size()) + " qualifying pairs, " + std::to_string(d.violations.size()) +
                           " violations"});
    }
    return out;
}

std::vector<Sub> criterion7() {
    std::vector<Sub> out;
    SearchConfig c;
    c.seed = 11;
    c.trials = 3000;
    std::size_t halts = 0, halt_bad = 0;
    auto check_all = [&](const TableMap<Rational>& m) {
        const auto fixed = enumerate_fixed_points(m);
        for (std::size_t x0 = 0; x0 < m.space().size(); ++x0) {
            const auto tr = picard_orbit(m, x0, m.space().size() + 2, Rational(0));
            if (tr.halted_by != HaltReason::fixed_point) continue;
            ++halts;
            if (std::find(fixed.begin(), fixed.end(), tr.states.back()) == fixed.end()) ++halt_bad;
        }
    };
    for (std::size_t t = 0; t < c.trials; ++t) check_all(random_instance(c, t).map);
    for (const auto& id : {"floor_half", "period2_counterexample"})
        check_all(std::get<TableMap<Rational>>(catalog<Rational>(id).map));
    out.push_back({"fixed-point halts lie in enumerate_fixed_points", halts > 0 && halt_bad == 0,
                   std::to_string(halt_bad) + " bad of " + std::to_string(halts) + " halts"});

    std::size_t generated = 0;
    const auto maps = qualifying_instances(3000, generated);
    std::size_t orbits = 0, late = 0;
    for (const auto& m : maps) {
        const std::size_t n = m.space().size();
        for (std::size_t x0 = 0; x0 < n; ++x0) {
            const auto tr = picard_orbit(m, x0, n + 2, Rational(0));
            ++orbits;
            if (tr.halted_by != HaltReason::fixed_point || tr.halt_index > n) ++late;
        }
    }
    out.push_back({"large-TPC period-2-free orbits reach a fixed point within |X| steps", !maps.empty() && late == 0,
                   std::to_string(late) + " of " + std::to_string(orbits) + " orbits"});
    return out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "counterexample reproduction", 1.0, criterion1},
        {2, "x/(1+x) on [0,1) suite", 30.0, criterion2},
        {3, "floor(n/2) on {0..256} suite", 60.0, criterion3},
        {4, "composite space suite", 120.0, criterion4},
        {5, "randomized theorem validation", 600.0, criterion5},
        {6, "proof-machinery properties", 600.0, criterion6},
        {7, "orbit / enumeration oracle equivalence", 600.0, criterion7},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<Sub> subs;
        std::string error;
        try {
            subs = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = error.empty() && secs < c.time_limit_s;
        for (const auto& s : subs) pass = pass && s.pass;
        failed += !pass;
        std::printf("criterion %d: %s  %s  (%.2fs, limit %.0fs)\n", c.number, pass ? "PASS" : "FAIL", c.title.c_str(),
                    secs, c.time_limit_s);
        for (const auto& s : subs)
            std::printf("    [%s] %s: %s\n", s.pass ? "ok" : "FAIL", s.what.c_str(), s.got.c_str());
        if (!error.empty()) std::printf("    [FAIL] exception: %s\n", error.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
