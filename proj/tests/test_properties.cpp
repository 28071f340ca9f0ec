#include <gtest/gtest.h>

#include "contraction_lab/commands.hpp"
#include "oracles.hpp"

using namespace contraction_lab;
using R = Rational;

namespace {

std::vector<RandomInstance> stream(std::uint64_t seed, std::size_t trials) {
    SearchConfig c;
    c.seed = seed;
    c.trials = trials;
    std::vector<RandomInstance> out;
    for (std::size_t t = 0; t < trials; ++t) out.push_back(random_instance(c, t));
    return out;
}

TableMap<R> scaled(const TableMap<R>& m, const R& k) {
    const auto& s = m.space();
    DistTable<R> t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) t(i, j) = s.distance(i, j) * k;
    return TableMap<R>(FiniteMetricSpace<R>(s.labels(), std::move(t)), m.images());
}

}  // namespace

TEST(Property, DeltaMonotoneInEps) {
    for (const auto& inst : stream(21, 200)) {
        const auto r = full_report(inst.map, default_eps_grid<R>(), 1);
        for (const auto* t : {&r.large_contraction.table, &r.large_tpc.table}) {
            std::optional<R> prev;
            for (const auto& e : t->entries) {
                if (!e.delta) continue;
                if (prev) {
                    EXPECT_LE(*e.delta, *prev);
                }
                prev = e.delta;
            }
        }
    }
}

TEST(Property, ScalingInvariance) {
    const R k(3);
    std::vector<R> grid = default_eps_grid<R>();
    std::vector<R> grid_k;
    for (const auto& e : grid) grid_k.push_back(e * k);
    for (const auto& inst : stream(22, 120)) {
        const auto a = full_report(inst.map, grid, 1);
        const auto b = full_report(scaled(inst.map, k), grid_k, 1);
        EXPECT_EQ(*a.uniform_tpc.alpha, *b.uniform_tpc.alpha);
        EXPECT_EQ(a.large_tpc.pass, b.large_tpc.pass);
        EXPECT_EQ(a.large_contraction.pass, b.large_contraction.pass);
        ASSERT_EQ(a.large_tpc.table.entries.size(), b.large_tpc.table.entries.size());
        for (std::size_t i = 0; i < a.large_tpc.table.entries.size(); ++i)
            EXPECT_EQ(a.large_tpc.table.entries[i].delta, b.large_tpc.table.entries[i].delta);
    }
}

TEST(Property, EpsThirdLemma) {
    for (const auto& inst : stream(23, 150)) {
        const auto d = oracle::table_of(inst.map);
        const auto n = d.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    const R p = perimeter(inst.map.space(), a, b, c);
                    const R mx = std::max({d[a][b], d[b][c], d[a][c]});
                    for (const R& e0 : {p, p / R(2), R(1, 8)}) {
                        if (R(0) < e0 && e0 <= p) {
                            EXPECT_LE(e0 / R(3), mx);
                        }
                    }
                }
    }
}

TEST(Property, IterateComposition) {
    for (const auto& inst : stream(24, 100))
        for (std::size_t x = 0; x < inst.map.space().size(); ++x)
            for (std::size_t j = 0; j < 4; ++j)
                EXPECT_EQ(iterate(inst.map, iterate(inst.map, x, j), 3), iterate(inst.map, x, j + 3));
}

TEST(Property, ClassInclusions) {
    // uniform TPC => large TPC; large contraction => pairwise strict.
    for (const auto& inst : stream(25, 400)) {
        const auto r = full_report(inst.map, default_eps_grid<R>(), 1);
        EXPECT_TRUE(!r.uniform_tpc.pass || r.large_tpc.pass);
        EXPECT_TRUE(!r.large_contraction.pass || r.pairwise_strict.pass);
        EXPECT_TRUE(!r.large_tpc.pass || r.triple_strict.pass);
    }
}

TEST(Property, OrbitsMatchDirectIteration) {
    for (const auto& inst : stream(26, 200)) {
        const auto n = inst.map.space().size();
        for (std::size_t x0 = 0; x0 < n; ++x0) {
            const auto tr = picard_orbit(inst.map, x0, n + 2, R(0));
            const auto direct = oracle::orbit_until_repeat(inst.map, x0);
            if (tr.halted_by == HaltReason::fixed_point) {
                EXPECT_EQ(tr.states, direct);
                EXPECT_EQ(inst.map.apply(tr.states.back()), tr.states.back());
            }
            for (std::size_t i = 0; i + 1 < tr.states.size(); ++i) EXPECT_EQ(tr.states[i + 1], inst.map.apply(tr.states[i]));
        }
    }
}

TEST(Property, LargeTpcPeriod2FreeOrbitsConverge) {
    std::size_t checked = 0;
    for (const auto& inst : stream(27, 800)) {
        if (!oracle::period2_points(inst.map).empty()) continue;
        if (!full_report(inst.map, default_eps_grid<R>(), 1).large_tpc.pass) continue;
        const auto n = inst.map.space().size();
        const auto fixed = oracle::fixed_points(inst.map);
        EXPECT_GE(fixed.size(), 1u);
        EXPECT_LE(fixed.size(), 2u);
        for (std::size_t x0 = 0; x0 < n; ++x0) {
            const auto tr = picard_orbit(inst.map, x0, n + 2, R(0));
            ++checked;
            EXPECT_EQ(tr.halted_by, HaltReason::fixed_point);
            EXPECT_LE(tr.halt_index, n);
            EXPECT_TRUE(check_perimeter_decrease(tr).pass);
            EXPECT_TRUE(check_distinct_iterates(inst.map.space(), tr).pass);
            EXPECT_FALSE(check_distance_below_perimeter(inst.map.space(), tr));
        }
    }
    EXPECT_GT(checked, 0u);
}

TEST(Property, ReportJsonDeterministic) {
    const auto e = make_floor_half<R>({0, 1, 64});
    const auto& m = std::get<TableMap<R>>(e.map);
    const auto a = io::report_to_json(full_report(m, default_eps_grid<R>(), 1)).dump();
    const auto b = io::report_to_json(full_report(m, default_eps_grid<R>(), 4)).dump();
    EXPECT_EQ(a, b);
}
