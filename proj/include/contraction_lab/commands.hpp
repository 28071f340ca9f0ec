#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "contraction_lab/catalog.hpp"
#include "contraction_lab/classify.hpp"
#include "contraction_lab/dynamics.hpp"
#include "contraction_lab/json_io.hpp"
#include "contraction_lab/theorem_lab.hpp"

namespace contraction_lab::cli {

using io::json;

/// Everything a command needs. A run is a pure function of this struct.
struct RunConfig {
    std::string command;
    std::optional<std::string> instance;  // path to a JSON map document
    std::optional<std::string> catalog_id;
    std::optional<std::string> theorem;
    std::optional<std::string> x0;
    std::size_t steps = 1000;
    std::optional<std::string> tol;
    std::optional<std::string> eps_grid;  // comma separated
    std::optional<std::string> grid_step;
    std::optional<std::int64_t> max_n;
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    std::string size_range = "3..12";
    std::string maps = "mixed";
    std::optional<std::string> mode;
    std::string format = "json";
    std::string out_dir = "out";
};

enum ExitCode : int { ok = 0, failure = 1, refuted = 2 };

/// Stable textual form of the parameters that influence a run's output.
inline std::string canonical(const RunConfig& c) {
    std::ostringstream os;
    auto opt = [&](const char* k, const auto& v) {
        os << k << '=';
        if (v) os << *v;
        os << ';';
    };
    os << "command=" << c.command << ';';
    opt("instance", c.instance);
    opt("catalog", c.catalog_id);
    opt("theorem", c.theorem);
    opt("x0", c.x0);
    os << "steps=" << c.steps << ';';
    opt("tol", c.tol);
    opt("eps", c.eps_grid);
    opt("grid", c.grid_step);
    opt("maxn", c.max_n);
    os << "seed=" << c.seed << ";trials=" << c.trials << ";sizes=" << c.size_range << ";maps=" << c.maps << ';';
    opt("mode", c.mode);
    os << "format=" << c.format << ';';
    return os.str();
}

/// 64-bit FNV-1a of the canonical config, as 16 hex digits.
inline std::string config_hash(const RunConfig& c) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : canonical(c)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline std::filesystem::path output_path(const RunConfig& c, const std::string& ext) {
    std::filesystem::create_directories(c.out_dir);
    return std::filesystem::path(c.out_dir) / (c.command + "-" + config_hash(c) + "." + ext);
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::pair<std::size_t, std::size_t> parse_size_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw InputError("size range must look like A..B, got '" + s + "'");
    try {
        return {std::stoul(s.substr(0, dots)), std::stoul(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw InputError("size range must look like A..B, got '" + s + "'");
    }
}

template <DistanceScalar S>
std::vector<S> parse_eps_grid(const std::optional<std::string>& text) {
    if (!text) return default_eps_grid<S>();
    std::vector<S> out;
    std::stringstream ss(*text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.find_first_not_of(' ') == std::string::npos) continue;
        try {
            out.push_back(ScalarTraits<S>::parse(item));
        } catch (const std::exception& e) {
            throw InputError(std::string("bad eps grid entry: ") + e.what());
        }
    }
    if (out.empty()) throw InputError("eps grid must not be empty");
    return out;
}

inline CatalogParams catalog_params(const RunConfig& c) {
    CatalogParams p;
    if (c.grid_step) {
        const Rational step = Rational::parse(*c.grid_step);
        if (step <= Rational{0} || Rational{1} < step) throw InputError("grid step must lie in (0, 1]");
        p.grid_step_num = step.num();
        p.grid_step_den = step.den();
    }
    if (c.max_n) p.max_n = *c.max_n;
    return p;
}

/// Loads the configured instance in the right arithmetic mode and hands the
/// map (TableMap<S> or FormulaMap<S>) to `f`.
template <typename F>
int visit_instance(const RunConfig& c, F&& f) {
    if (c.catalog_id && c.instance) throw InputError("give either --catalog or --instance, not both");
    if (c.catalog_id) {
        const auto mode = c.mode ? parse_mode(*c.mode) : default_mode(*c.catalog_id);
        const auto params = catalog_params(c);
        if (mode == ArithmeticMode::exact) {
            auto e = catalog<Rational>(*c.catalog_id, params);
            return std::visit(f, e.map);
        }
        auto e = catalog<double>(*c.catalog_id, params);
        return std::visit(f, e.map);
    }
    if (!c.instance) throw InputError("an instance is required (--catalog ID or --instance PATH)");
    std::ifstream in(*c.instance);
    if (!in) throw InputError("cannot open instance file '" + *c.instance + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("instance file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("space") || !doc.contains("map"))
        throw InputError("instance file needs \"space\" and \"map\" members");
    const auto mode = c.mode ? parse_mode(*c.mode) : io::document_mode(doc.at("space"));
    if (mode == ArithmeticMode::exact) return f(io::map_from_json<Rational>(doc));
    return f(io::map_from_json<double>(doc));
}

template <DistanceScalar S>
std::size_t parse_point(const TableMap<S>& map, const std::string& text) {
    return map.space().index_of(text);
}

template <DistanceScalar S>
S parse_point(const FormulaMap<S>& map, const std::string& text) {
    S x;
    try {
        x = ScalarTraits<S>::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("bad point: ") + e.what());
    }
    map.space().require(x);
    return x;
}

template <DistanceScalar S>
std::size_t default_x0(const TableMap<S>&) {
    return 0;
}

template <DistanceScalar S>
S default_x0(const FormulaMap<S>&) {
    return ScalarTraits<S>::one();
}

// ---------------------------------------------------------------------------

inline int cmd_classify(const RunConfig& c, std::ostream& out = std::cout) {
    return visit_instance(c, [&](const auto& map) -> int {
        using Map = std::decay_t<decltype(map)>;
        using S = typename Map::scalar_type;
        const auto eps = parse_eps_grid<S>(c.eps_grid);
        const auto report = full_report(map, eps);
        const auto id = c.catalog_id ? *c.catalog_id : *c.instance;
        if (c.format == "csv") {
            std::string text = "kind,eps,delta\n";
            for (const auto* t : {&report.large_contraction.table, &report.large_tpc.table}) {
                const std::string body = io::table_to_csv(*t);
                std::stringstream ss(body);
                std::string line;
                std::getline(ss, line);  // header
                while (std::getline(ss, line)) text += to_string(t->kind) + "," + line + "\n";
            }
            write_file(output_path(c, "csv"), text);
        } else {
            json j = io::report_to_json(report);
            j = json{{"instance", id}, {"report", std::move(j)}};
            write_file(output_path(c, "json"), dump(j));
        }
        out << "classify " << id << " (" << to_string(report.scope) << ", " << report.points << " points)\n"
            << "  pairwise_strict   " << (report.pairwise_strict.pass ? "pass" : "fail") << "\n"
            << "  large_contraction " << (report.large_contraction.pass ? "pass" : "fail") << "\n"
            << "  uniform_tpc       " << (report.uniform_tpc.pass ? "pass" : "fail")
            << "  alpha=" << ScalarTraits<S>::to_string(*report.uniform_tpc.alpha) << "\n"
            << "  large_tpc         " << (report.large_tpc.pass ? "pass" : "fail") << "\n";
        return ExitCode::ok;
    });
}

inline int cmd_iterate(const RunConfig& c, std::ostream& out = std::cout) {
    return visit_instance(c, [&](const auto& map) -> int {
        using Map = std::decay_t<decltype(map)>;
        using S = typename Map::scalar_type;
        const auto x0 = c.x0 ? parse_point(map, *c.x0) : default_x0(map);
        const S tol = c.tol ? ScalarTraits<S>::parse(*c.tol) : default_residual_tol<S>();
        const auto tr = picard_orbit(map, x0, c.steps, tol);
        const auto distinct = check_distinct_iterates(map.space(), tr);

        json j = io::trace_to_json(tr);
        j["converged"] = tr.halted_by == HaltReason::fixed_point;
        j["perimeter_decrease"] = nullptr;
        if (tr.perimeters.size() >= 2 || tr.halted_by == HaltReason::fixed_point) {
            const auto dec = check_perimeter_decrease(tr);
            json d{{"pass", dec.pass}, {"vacuous", dec.vacuous}, {"first_violation", nullptr}};
            if (dec.first_violation) d["first_violation"] = *dec.first_violation;
            j["perimeter_decrease"] = std::move(d);
        }
        j["distinct_iterates"] = json{{"pass", distinct.pass},
                                      {"repeat", distinct.repeat ? json::array({distinct.repeat->first, distinct.repeat->second})
                                                                 : json(nullptr)}};
        write_file(output_path(c, "json"), dump(j));
        write_file(output_path(c, "csv"), io::trace_to_csv(tr));
        out << "iterate from " << tr.labels.front() << ": halted_by " << to_string(tr.halted_by) << " at n="
            << tr.halt_index << ", final state " << tr.labels.back() << ", residual "
            << ScalarTraits<S>::to_string(tr.residual)
            << (tr.halted_by == HaltReason::fixed_point ? "" : " (not converged)") << "\n";
        return ExitCode::ok;
    });
}

inline int cmd_verify(const RunConfig& c, std::ostream& out = std::cout) {
    if (!c.theorem) throw InputError("verify needs --theorem ID");
    const TheoremId theorem = parse_theorem(*c.theorem);
    return visit_instance(c, [&](const auto& map) -> int {
        const auto x0 = c.x0 ? parse_point(map, *c.x0) : default_x0(map);
        const auto v = verdict(theorem, map, x0);
        write_file(output_path(c, "json"), dump(io::verdict_to_json(v)));
        out << "verify " << to_string(theorem) << ": " << to_string(v.status) << "\n";
        for (const auto& h : v.hypotheses) out << "  " << h.name << " " << to_string(h.status) << "\n";
        out << "  fixed points:";
        for (const auto& p : v.conclusion.fixed_points) out << ' ' << p;
        out << "\n";
        return v.status == TheoremStatus::refuted ? ExitCode::refuted : ExitCode::ok;
    });
}

inline int cmd_search(const RunConfig& c, std::ostream& out = std::cout) {
    if (!c.theorem) throw InputError("search needs --theorem ID");
    const TheoremId theorem = parse_theorem(*c.theorem);
    if (theorem != TheoremId::mesmouli_uncorrected && theorem != TheoremId::corrected_main)
        throw InputError("search supports mesmouli_uncorrected and corrected_main");
    SearchConfig sc;
    sc.seed = c.seed;
    sc.trials = c.trials;
    std::tie(sc.min_size, sc.max_size) = parse_size_range(c.size_range);
    sc.maps = parse_map_distribution(c.maps);
    const auto f = search_refutations(theorem, sc);
    write_file(output_path(c, "json"), dump(io::findings_to_json(f)));
    out << "search " << to_string(theorem) << ": " << f.trials_run << " trials, " << f.hypotheses_passed
        << " passed the hypotheses, " << f.hits.size() << " refutation(s)\n";
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------
// reproduce

struct Check {
    std::string id;
    std::string cites;
    std::string expected;
    std::string computed;
    bool pass = false;
};

namespace detail {

template <DistanceScalar S>
std::string labels_of(const ContractionReport<S>& r, const std::optional<Witness<S>>& w) {
    if (!w) return "none";
    const auto& labels = r.labels_for(*w);
    std::string s = "(";
    for (std::size_t i = 0; i < w->arity; ++i) s += (i ? "," : "") + labels[w->index[i]];
    return s + ")";
}

template <DistanceScalar S>
const ModulusEntry<S>* entry_at(const ModulusTable<S>& t, const S& eps) {
    for (const auto& e : t.entries)
        if (!e.scope_floor && ScalarTraits<S>::equal(e.eps, eps)) return &e;
    return nullptr;
}

inline std::string yes_no(bool b) { return b ? "pass" : "fail"; }

template <DistanceScalar S>
void check_expected(std::vector<Check>& checks, const CatalogEntry<S>& e, const ContractionReport<S>& r) {
    for (const auto& ex : e.expected) {
        bool got = false;
        if (ex.classification == "pairwise_strict") got = r.pairwise_strict.pass;
        if (ex.classification == "large_contraction") got = r.large_contraction.pass;
        if (ex.classification == "uniform_tpc") got = r.uniform_tpc.pass;
        if (ex.classification == "large_tpc") got = r.large_tpc.pass;
        checks.push_back({e.id + "." + ex.classification, "catalog expectation: " + ex.note, yes_no(ex.pass),
                          yes_no(got), got == ex.pass});
    }
}

}  // namespace detail

/// Every worked example and counterexample, checked against its stated value.
inline std::vector<Check> reproduce_checks() {
    using detail::yes_no;
    std::vector<Check> checks;
    auto add = [&](std::string id, std::string cites, std::string expected, std::string computed, bool pass) {
        checks.push_back({std::move(id), std::move(cites), std::move(expected), std::move(computed), pass});
    };
    const auto eps = default_eps_grid<Rational>();
    const auto epsd = default_eps_grid<double>();

    {  // three-point counterexample
        const auto e = make_period2_counterexample<Rational>();
        const auto& m = std::get<TableMap<Rational>>(e.map);
        const auto r = full_report(m, eps);
        detail::check_expected(checks, e, r);
        add("period2.tpc_alpha", "classify.estimate_tpc_alpha: period2_counterexample -> 1/2", "1/2",
            r.uniform_tpc.alpha->to_string(), *r.uniform_tpc.alpha == Rational(1, 2));
        const auto w = detail::labels_of(r, r.pairwise_strict.violation);
        add("period2.pairwise_witness", "classify.full_report: period2_counterexample pairwise witness", "(0,1)", w,
            w == "(0,1)");
        const auto fixed = enumerate_fixed_points(m);
        add("period2.fixed_points", "dynamics.enumerate_fixed_points: period2_counterexample -> {}", "{}",
            fixed.empty() ? "{}" : "nonempty", fixed.empty());
        const auto p2 = detect_period2(m, m.points());
        add("period2.detect_period2", "dynamics.detect_period2: period2_counterexample -> {0,1}", "{0,1}",
            p2 == std::vector<std::size_t>{0, 1} ? "{0,1}" : "other", p2 == std::vector<std::size_t>{0, 1});
        const auto vm = verdict(TheoremId::mesmouli_uncorrected, m, 0);
        add("period2.verdict_uncorrected", "theorem_lab.verdict: mesmouli_uncorrected on period2_counterexample",
            "refuted", to_string(vm.status), vm.status == TheoremStatus::refuted);
        const auto vc = verdict(TheoremId::corrected_main, m, 0);
        add("period2.verdict_corrected", "theorem_lab.verdict: corrected_main on period2_counterexample",
            "inapplicable", to_string(vc.status), vc.status == TheoremStatus::inapplicable);
        const auto tr = picard_orbit(m, std::size_t{2}, 50);
        add("period2.orbit", "dynamics.picard_orbit: period2_counterexample from 2", "period-2",
            to_string(tr.halted_by), tr.halted_by == HaltReason::period2);
    }
    {  // floor_half on {0..256}
        const auto e = make_floor_half<Rational>();
        const auto& m = std::get<TableMap<Rational>>(e.map);
        const auto r = full_report(m, eps);
        detail::check_expected(checks, e, r);
        add("floor_half.tpc_alpha_bound", "classify.estimate_tpc_alpha: floor_half ratio bounded by 3/4",
            "<= 3/4", r.uniform_tpc.alpha->to_string(), *r.uniform_tpc.alpha <= Rational(3, 4));
        const auto w = detail::labels_of(r, r.pairwise_strict.violation);
        add("floor_half.pairwise_witness", "classify.check_pairwise_strict: floor_half witness (1,2) at ratio 1",
            "(1,2) ratio 1", w + " ratio " + r.pairwise_strict.violation->ratio().to_string(),
            w == "(1,2)" && r.pairwise_strict.violation->ratio() == Rational(1));
        const auto v = verdict(TheoremId::corrected_main, m, 256);
        std::string fp;
        for (const auto& p : v.conclusion.fixed_points) fp += (fp.empty() ? "" : ",") + p;
        add("floor_half.verdict_corrected", "theorem_lab.verdict: corrected_main on floor_half from 256",
            "confirmed {0}", to_string(v.status) + " {" + fp + "}",
            v.status == TheoremStatus::confirmed && fp == "0");
    }
    {  // x/(1+x) on [0,1)
        const auto e = make_burton_logistic<double>();
        const auto& m = std::get<FormulaMap<double>>(e.map);
        const auto r = full_report(m, epsd);
        detail::check_expected(checks, e, r);
        const double h = m.space().grid_step();
        for (double x : {0.125, 0.25, 0.5}) {
            const auto* en = detail::entry_at(r.large_contraction.table, x);
            const double d = en && en->delta ? *en->delta : -1.0;
            add("burton.lc_delta(" + ScalarTraits<double>::to_string(x) + ")",
                "classify.estimate_large_contraction_modulus: burton_logistic delta(eps) = 1/(1+eps)",
                ScalarTraits<double>::to_string(1.0 / (1.0 + x)) + " +- 2h", ScalarTraits<double>::to_string(d),
                std::fabs(d - 1.0 / (1.0 + x)) <= 2.0 * h);
        }
        add("burton.tpc_alpha", "classify.estimate_tpc_alpha: burton_logistic sup ratio -> 1", ">= 0.99",
            ScalarTraits<double>::to_string(*r.uniform_tpc.alpha), *r.uniform_tpc.alpha >= 0.99);
        const auto* q = detail::entry_at(r.large_tpc.table, 0.25);
        add("burton.ltpc_delta(0.25)", "classify.estimate_large_tpc_modulus: burton_logistic delta(1/4) <= 4/5",
            "<= 0.8", q && q->delta ? ScalarTraits<double>::to_string(*q->delta) : "vacuous",
            q && q->delta && *q->delta <= 0.8 + 1e-12);

        const auto ex = make_burton_logistic<Rational>();
        const auto tr = picard_orbit(std::get<FormulaMap<Rational>>(ex.map), Rational(1), 200);
        add("burton.orbit_x200", "dynamics.picard_orbit: burton_logistic x_200 = 1/201 (exact)", "1/201",
            tr.states.size() > 200 ? tr.states[200].to_string() : "short", tr.states.size() > 200 && tr.states[200] == Rational(1, 201));
        const auto dec = check_perimeter_decrease(tr);
        add("burton.perimeter_decrease", "dynamics.check_perimeter_decrease: burton_logistic trace", "pass",
            yes_no(dec.pass), dec.pass);
    }
    {  // composite
        const auto e = make_composite<double>();
        const auto& m = std::get<FormulaMap<double>>(e.map);
        const auto r = full_report(m, epsd);
        detail::check_expected(checks, e, r);
        const auto* one = detail::entry_at(r.large_contraction.table, 1.0);
        add("composite.lc_delta(1)", "classify.estimate_large_contraction_modulus: composite delta(1) >= 49/50",
            ">= 0.98", one && one->delta ? ScalarTraits<double>::to_string(*one->delta) : "vacuous",
            one && one->delta && *one->delta >= 0.98 - 1e-12);
        add("composite.tpc_alpha", "classify.estimate_tpc_alpha: composite sup ratio", ">= 0.985",
            ScalarTraits<double>::to_string(*r.uniform_tpc.alpha), *r.uniform_tpc.alpha >= 0.985);
        const auto* half = detail::entry_at(r.large_tpc.table, 0.5);
        add("composite.ltpc_delta(1/2)", "classify.estimate_large_tpc_modulus: composite delta(1/2) = 2/3",
            "<= 2/3 + 1e-9", half && half->delta ? ScalarTraits<double>::to_string(*half->delta) : "vacuous",
            half && half->delta && *half->delta <= 2.0 / 3.0 + 1e-9);
        const auto* two = detail::entry_at(r.large_tpc.table, 2.0);
        add("composite.ltpc_delta(2)", "classify.estimate_large_tpc_modulus: composite delta(2) <= 1/2", "<= 1/2",
            two && two->delta ? ScalarTraits<double>::to_string(*two->delta) : "vacuous",
            two && two->delta && *two->delta <= 0.5 + 1e-12);
    }
    return checks;
}

inline int cmd_reproduce(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    const auto checks = reproduce_checks();
    json arr = json::array();
    bool all = true;
    for (const auto& ch : checks) {
        all = all && ch.pass;
        arr.push_back(json{{"id", ch.id}, {"cites", ch.cites}, {"expected", ch.expected}, {"computed", ch.computed}, {"pass", ch.pass}});
        out << (ch.pass ? "PASS " : "FAIL ") << ch.id << ": " << ch.computed << "\n";
        if (!ch.pass) err << "mismatch " << ch.id << ": expected " << ch.expected << ", computed " << ch.computed << "\n";
    }
    write_file(output_path(c, "json"), dump(json{{"all_pass", all}, {"checks", std::move(arr)}}));
    return all ? ExitCode::ok : ExitCode::failure;
}

/// Dispatches on c.command; input errors print a diagnostic and return 1.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        if (c.format != "json" && c.format != "csv") throw InputError("format must be json or csv");
        if (c.command == "reproduce") return cmd_reproduce(c, out, err);
        if (c.command == "classify") return cmd_classify(c, out);
        if (c.command == "iterate") return cmd_iterate(c, out);
        if (c.command == "verify") return cmd_verify(c, out);
        if (c.command == "search") return cmd_search(c, out);
        throw InputError("unknown command '" + c.command + "'");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::failure;
    }
}

}  // namespace contraction_lab::cli
