#include <gtest/gtest.h>

#include <random>

#include "contraction_lab/metric_space.hpp"
#include "oracles.hpp"

using namespace contraction_lab;
using R = Rational;

namespace {

DistTable<R> table(const std::vector<std::vector<R>>& rows) { return DistTable<R>::from_rows(rows); }

}  // namespace

TEST(ValidateMetric, LineIsMetric) {
    EXPECT_TRUE(validate_metric(FiniteMetricSpace<R>::integer_line(3).table()).ok());
}

TEST(ValidateMetric, TriangleWitness) {
    const auto rep = validate_metric(table({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}));
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].kind, AxiomKind::triangle);
    EXPECT_EQ(rep.violations[0].witness, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ValidateMetric, SymmetryWitness) {
    const auto rep = validate_metric(table({{0, 1}, {2, 0}}));
    ASSERT_FALSE(rep.ok());
    EXPECT_EQ(rep.violations[0].kind, AxiomKind::symmetry);
    EXPECT_EQ(rep.violations[0].witness, (std::vector<std::size_t>{0, 1}));
}

TEST(ValidateMetric, NonSquareIsInputError) {
    EXPECT_THROW(table({{0, 1}, {1}}), InputError);
}

TEST(FiniteMetricSpace, RejectsInvalidAndTinySpaces) {
    EXPECT_THROW(FiniteMetricSpace<R>(index_labels(3), table({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}})), InputError);
    EXPECT_THROW(FiniteMetricSpace<R>::integer_line(2), InputError);
}

TEST(FiniteMetricSpace, LookupAndSubspace) {
    const auto s = FiniteMetricSpace<R>::line({R(0), R(1, 2), R(3)});
    EXPECT_EQ(s.index_of("1/2"), 1u);
    EXPECT_EQ(s.distance(0, 2), R(3));
    EXPECT_THROW((void)s.index_of("7"), InputError);
    EXPECT_THROW((void)s.distance(0, 3), InputError);
    const auto sub = FiniteMetricSpace<R>::integer_line(5).subspace({4, 0, 2});
    EXPECT_EQ(sub.labels(), (std::vector<std::string>{"4", "0", "2"}));
    EXPECT_EQ(sub.distance(0, 1), R(4));
}

TEST(Perimeter, SymmetricAndDominatesTwiceMaxSide) {
    const auto s = FiniteMetricSpace<R>::line({R(0), R(1), R(7, 2), R(6)});
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            for (std::size_t c = 0; c < 4; ++c) {
                const R p = perimeter(s, a, b, c);
                EXPECT_EQ(p, perimeter(s, c, a, b));
                EXPECT_EQ(p, perimeter(s, b, a, c));
                EXPECT_LE(R(2) * std::max({s.distance(a, b), s.distance(b, c), s.distance(a, c)}), p);
            }
}

TEST(Triple, RequiresDistinctPoints) {
    EXPECT_THROW(Triple<int>(1, 1, 2), InputError);
    EXPECT_NO_THROW(Triple<int>(1, 2, 3));
}

TEST(MetricRepair, ShortensTriangleViolation) {
    const auto s = metric_repair(table({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}));
    EXPECT_EQ(s.distance(0, 2), R(2));
}

TEST(MetricRepair, IdempotentOnMetrics) {
    const auto s = FiniteMetricSpace<R>::line({R(0), R(1, 3), R(2), R(5)});
    EXPECT_EQ(metric_repair(s.labels(), s.table()), s);
}

TEST(MetricRepair, RejectsZeroOffDiagonalAndAsymmetry) {
    EXPECT_THROW(metric_repair(table({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}})), InputError);
    EXPECT_THROW(metric_repair(table({{0, 1, 1}, {2, 0, 1}, {1, 1, 0}})), InputError);
}

TEST(MetricRepair, MatchesOracleOnRandomTables) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + rng() % 8;
        oracle::Table raw(n, std::vector<R>(n, R(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) raw[i][j] = raw[j][i] = R(1 + static_cast<std::int64_t>(rng() % 40), 8);
        const auto repaired = metric_repair(DistTable<R>::from_rows(raw));
        const auto expect = oracle::shortest_paths(raw);
        ASSERT_TRUE(oracle::is_metric(expect));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_EQ(repaired.distance(i, j), expect[i][j]);
                EXPECT_LE(repaired.distance(i, j), raw[i][j]);
            }
        EXPECT_TRUE(validate_metric(repaired.table()).ok());
    }
}

TEST(MetricRepair, FloatModeWithinTolerance) {
    const auto s = metric_repair(DistTable<double>::from_rows({{0, 0.1, 0.35}, {0.1, 0, 0.2}, {0.35, 0.2, 0}}));
    EXPECT_NEAR(s.distance(0, 2), 0.3, 1e-15);
    EXPECT_TRUE(validate_metric(s.table()).ok());
}
