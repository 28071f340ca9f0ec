#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "contraction_lab/errors.hpp"
#include "contraction_lab/scalar.hpp"

namespace contraction_lab {

/// Row-major square matrix of distances.
template <DistanceScalar S>
class DistTable {
public:
    DistTable() = default;
    explicit DistTable(std::size_t n) : n_(n), data_(n * n, ScalarTraits<S>::zero()) {}

    /// Throws InputError when `rows` is not square.
    static DistTable from_rows(const std::vector<std::vector<S>>& rows) {
        DistTable t(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                throw InputError("distance table is not square: row " + std::to_string(i) + " has " +
                                 std::to_string(rows[i].size()) + " entries, expected " +
                                 std::to_string(rows.size()));
            std::copy(rows[i].begin(), rows[i].end(), t.data_.begin() + static_cast<std::ptrdiff_t>(i * t.n_));
        }
        return t;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] const S& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    S& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

    friend bool operator==(const DistTable&, const DistTable&) = default;

private:
    std::size_t n_ = 0;
    std::vector<S> data_;
};

enum class AxiomKind { zero_diagonal, positivity, symmetry, triangle };

inline std::string to_string(AxiomKind k) {
    switch (k) {
        case AxiomKind::zero_diagonal: return "zero_diagonal";
        case AxiomKind::positivity: return "positivity";
        case AxiomKind::symmetry: return "symmetry";
        case AxiomKind::triangle: return "triangle";
    }
    return "?";
}

struct AxiomViolation {
    AxiomKind kind;
    /// (i) for diagonal, (i,j) for positivity/symmetry, (i,j,k) with
    /// d(i,k) > d(i,j) + d(j,k) for the triangle inequality.
    std::vector<std::size_t> witness;
    std::string detail;
};

struct ValidationReport {
    std::vector<AxiomViolation> violations;
    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

template <DistanceScalar S>
ValidationReport validate_metric(const DistTable<S>& d) {
    using T = ScalarTraits<S>;
    ValidationReport report;
    const std::size_t n = d.size();
    auto add = [&](AxiomKind kind, std::vector<std::size_t> w, std::string detail) {
        report.violations.push_back({kind, std::move(w), std::move(detail)});
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!T::equal(d(i, i), T::zero()))
            add(AxiomKind::zero_diagonal, {i}, "d(i,i) = " + T::to_string(d(i, i)));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!T::less(T::zero(), d(i, j)) || !T::less(T::zero(), d(j, i)))
                add(AxiomKind::positivity, {i, j}, "d(i,j) = " + T::to_string(d(i, j)));
            if (!T::equal(d(i, j), d(j, i)))
                add(AxiomKind::symmetry, {i, j},
                    "d(i,j) = " + T::to_string(d(i, j)) + " but d(j,i) = " + T::to_string(d(j, i)));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                const S via = d(i, j) + d(j, k);
                if (!T::less_equal(d(i, k), via))
                    add(AxiomKind::triangle, {i, j, k},
                        "d(i,k) = " + T::to_string(d(i, k)) + " > d(i,j) + d(j,k) = " + T::to_string(via));
            }
        }
    }
    return report;
}

template <DistanceScalar S>
ValidationReport validate_metric(const std::vector<std::vector<S>>& rows) {
    return validate_metric(DistTable<S>::from_rows(rows));
}

/// A finite metric space with at least three points. Immutable; the
/// constructor rejects any table that violates the metric axioms.
template <DistanceScalar S>
class FiniteMetricSpace {
public:
    using scalar_type = S;
    using point_type = std::size_t;

    FiniteMetricSpace(std::vector<std::string> labels, DistTable<S> dist)
        : labels_(std::move(labels)), dist_(std::move(dist)) {
        if (labels_.size() != dist_.size())
            throw InputError("label count " + std::to_string(labels_.size()) + " does not match table size " +
                             std::to_string(dist_.size()));
        if (labels_.size() < 3) throw InputError("a space needs at least 3 points");
        if (auto report = validate_metric(dist_); !report.ok()) {
            const auto& v = report.violations.front();
            std::string w;
            for (auto idx : v.witness) w += (w.empty() ? "" : ",") + std::to_string(idx);
            throw InputError("not a metric: " + to_string(v.kind) + " violated at (" + w + "): " + v.detail);
        }
    }

    /// Points labelled by their coordinates with d(x,y) = |x - y|.
    static FiniteMetricSpace line(const std::vector<S>& coords) {
        DistTable<S> t(coords.size());
        std::vector<std::string> labels;
        labels.reserve(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) {
            labels.push_back(ScalarTraits<S>::to_string(coords[i]));
            for (std::size_t j = 0; j < coords.size(); ++j) t(i, j) = ScalarTraits<S>::abs_diff(coords[i], coords[j]);
        }
        return FiniteMetricSpace(std::move(labels), std::move(t));
    }

    /// Line metric on {0, 1, ..., n-1}.
    static FiniteMetricSpace integer_line(std::size_t n) {
        std::vector<S> coords;
        coords.reserve(n);
        for (std::size_t i = 0; i < n; ++i) coords.push_back(ScalarTraits<S>::from_ratio(static_cast<std::int64_t>(i), 1));
        return line(coords);
    }

    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] const DistTable<S>& table() const noexcept { return dist_; }
    [[nodiscard]] bool contains(point_type p) const noexcept { return p < size(); }

    [[nodiscard]] const std::string& label(point_type p) const {
        require(p);
        return labels_[p];
    }

    [[nodiscard]] point_type index_of(std::string_view label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw InputError("unknown point '" + std::string(label) + "'");
        return static_cast<point_type>(it - labels_.begin());
    }

    [[nodiscard]] const S& distance(point_type a, point_type b) const {
        require(a);
        require(b);
        return dist_(a, b);
    }

    void require(point_type p) const {
        if (p >= size())
            throw InputError("unknown point index " + std::to_string(p) + " (space has " + std::to_string(size()) +
                             " points)");
    }

    /// Subspace on the given indices (in that order), relabelled consistently.
    [[nodiscard]] FiniteMetricSpace subspace(const std::vector<point_type>& keep) const {
        DistTable<S> t(keep.size());
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            labels.push_back(label(keep[i]));
            for (std::size_t j = 0; j < keep.size(); ++j) t(i, j) = distance(keep[i], keep[j]);
        }
        return FiniteMetricSpace(std::move(labels), std::move(t));
    }

    friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

private:
    std::vector<std::string> labels_;
    DistTable<S> dist_;
};

/// Pairwise distinct triple of point identifiers.
template <typename P>
struct Triple {
    P x, y, z;

    Triple(P a, P b, P c) : x(std::move(a)), y(std::move(b)), z(std::move(c)) {
        if (x == y || y == z || x == z) throw InputError("triple points must be pairwise distinct");
    }
};

/// Any space exposing a distance between its points.
template <typename Space>
concept MetricSpaceLike = requires(const Space& s, const typename Space::point_type& p) {
    typename Space::scalar_type;
    typename Space::point_type;
    { s.distance(p, p) } -> std::convertible_to<typename Space::scalar_type>;
    { s.contains(p) } -> std::convertible_to<bool>;
};

/// d(a,b) + d(b,c) + d(a,c). Distinctness is not required.
template <MetricSpaceLike Space>
typename Space::scalar_type perimeter(const Space& space, const typename Space::point_type& a,
                                      const typename Space::point_type& b, const typename Space::point_type& c) {
    return space.distance(a, b) + space.distance(b, c) + space.distance(a, c);
}

/// All-pairs shortest-path closure of a symmetric table with zero diagonal
/// and positive off-diagonal entries. The result is a metric, entrywise no
/// larger than the input, and equal to the input when it already is one.
template <DistanceScalar S>
DistTable<S> shortest_path_closure(DistTable<S> d) {
    using T = ScalarTraits<S>;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!T::equal(d(i, i), T::zero())) throw InputError("metric_repair: nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!T::equal(d(i, j), d(j, i)))
                throw InputError("metric_repair: table is not symmetric at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
            if (!T::less(T::zero(), d(i, j)))
                throw InputError("metric_repair: off-diagonal entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") must be positive");
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && d(i, k) + d(k, j) < d(i, j)) d(i, j) = d(i, k) + d(k, j);
    return d;
}

template <DistanceScalar S>
FiniteMetricSpace<S> metric_repair(std::vector<std::string> labels, DistTable<S> d) {
    return FiniteMetricSpace<S>(std::move(labels), shortest_path_closure(std::move(d)));
}

/// Labels "0".."n-1".
inline std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

template <DistanceScalar S>
FiniteMetricSpace<S> metric_repair(DistTable<S> d) {
    const auto n = d.size();
    return metric_repair(index_labels(n), std::move(d));
}

}  // namespace contraction_lab
