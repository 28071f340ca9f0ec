#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond Rational and the map/space containers, and favour obviousness over speed.

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "contraction_lab/rational.hpp"
#include "contraction_lab/self_map.hpp"

namespace oracle {

using contraction_lab::Rational;
using Table = std::vector<std::vector<Rational>>;
using Map = contraction_lab::TableMap<Rational>;

inline Table table_of(const Map& m) {
    const auto n = m.space().size();
    Table t(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[i][j] = m.space().distance(i, j);
    return t;
}

/// All-pairs shortest paths by repeated relaxation until nothing changes.
inline Table shortest_paths(Table d) {
    const auto n = d.size();
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    if (d[i][k] + d[k][j] < d[i][j]) {
                        d[i][j] = d[i][k] + d[k][j];
                        changed = true;
                    }
    }
    return d;
}

inline bool is_metric(const Table& d) {
    const auto n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i][i] != Rational(0)) return false;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && !(Rational(0) < d[i][j])) return false;
            if (d[i][j] != d[j][i]) return false;
            for (std::size_t k = 0; k < n; ++k)
                if (d[i][j] + d[j][k] < d[i][k]) return false;
        }
    }
    return true;
}

inline Rational per(const Table& d, std::size_t a, std::size_t b, std::size_t c) {
    return d[a][b] + d[b][c] + d[a][c];
}

/// sup over ordered pairs x != y of d(Tx,Ty)/d(x,y) with d(x,y) >= eps.
inline std::optional<Rational> pair_delta(const Map& m, const Rational& eps) {
    const auto d = table_of(m);
    std::optional<Rational> best;
    for (std::size_t x = 0; x < d.size(); ++x)
        for (std::size_t y = 0; y < d.size(); ++y) {
            if (x == y || d[x][y] < eps) continue;
            const Rational r = d[m.apply(x)][m.apply(y)] / d[x][y];
            if (!best || *best < r) best = r;
        }
    return best;
}

/// sup over pairwise distinct triples of P(Tx,Ty,Tz)/P(x,y,z) with largest side >= eps.
inline std::optional<Rational> triple_delta(const Map& m, const Rational& eps) {
    const auto d = table_of(m);
    const auto n = d.size();
    std::optional<Rational> best;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                if (std::max({d[x][y], d[y][z], d[x][z]}) < eps) continue;
                const Rational r = per(d, m.apply(x), m.apply(y), m.apply(z)) / per(d, x, y, z);
                if (!best || *best < r) best = r;
            }
    return best;
}

inline Rational triple_alpha(const Map& m) { return *triple_delta(m, Rational(0)); }

inline bool pairwise_strict(const Map& m) {
    const auto d = table_of(m);
    for (std::size_t x = 0; x < d.size(); ++x)
        for (std::size_t y = 0; y < d.size(); ++y)
            if (x != y && !(d[m.apply(x)][m.apply(y)] < d[x][y])) return false;
    return true;
}

inline std::vector<std::size_t> fixed_points(const Map& m) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < m.space().size(); ++x)
        if (m.apply(x) == x) out.push_back(x);
    return out;
}

inline std::vector<std::size_t> period2_points(const Map& m) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < m.space().size(); ++x)
        if (m.apply(m.apply(x)) == x && m.apply(x) != x) out.push_back(x);
    return out;
}

/// Points of the orbit x, Tx, T^2x, ... until the first repeat.
inline std::vector<std::size_t> orbit_until_repeat(const Map& m, std::size_t x) {
    std::vector<std::size_t> out;
    std::set<std::size_t> seen;
    while (seen.insert(x).second) {
        out.push_back(x);
        x = m.apply(x);
    }
    return out;
}

}  // namespace oracle
