#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "contraction_lab/errors.hpp"
#include "contraction_lab/scalar.hpp"

namespace contraction_lab {

/// Subset of the real line with d(x,y) = |x - y|, explored through
/// deterministic sample grids.
///
/// Level 0 is the configured resolution; each further level doubles it
/// (halves the grid step, doubles any index truncation). Points are the
/// coordinates themselves, so images that fall off the grid keep their exact
/// value and distances to them stay computable.
template <DistanceScalar S>
class LineSpace {
public:
    using scalar_type = S;
    using point_type = S;
    using Membership = std::function<bool(const S&)>;
    using Sampler = std::function<std::vector<S>(int level)>;

    LineSpace(std::string description, Membership member, Sampler sampler, S grid_step, bool complete)
        : description_(std::move(description)),
          member_(std::move(member)),
          sampler_(std::move(sampler)),
          grid_step_(std::move(grid_step)),
          complete_(complete) {}

    [[nodiscard]] const std::string& description() const noexcept { return description_; }
    [[nodiscard]] bool complete() const noexcept { return complete_; }
    [[nodiscard]] bool contains(const S& x) const { return member_(x); }
    [[nodiscard]] S distance(const S& a, const S& b) const { return ScalarTraits<S>::abs_diff(a, b); }
    [[nodiscard]] std::string label(const S& x) const { return ScalarTraits<S>::to_string(x); }

    void require(const S& x) const {
        if (!contains(x)) throw InputError("point " + label(x) + " is not in " + description_);
    }

    /// Grid spacing of the continuous part at `level`.
    [[nodiscard]] double grid_step(int level = 0) const {
        double h = ScalarTraits<S>::to_double(grid_step_);
        for (int i = 0; i < level; ++i) h /= 2.0;
        return h;
    }

    /// Deterministic, sorted, duplicate-free point set.
    [[nodiscard]] std::vector<S> sample(int level = 0) const { return sampler_(level); }

private:
    std::string description_;
    Membership member_;
    Sampler sampler_;
    S grid_step_;
    bool complete_;
};

/// {lo, lo + step, ..., hi} with step = 1/den (hi included when it lies on the grid).
template <DistanceScalar S>
std::vector<S> uniform_grid(std::int64_t lo_num, std::int64_t hi_num, std::int64_t den) {
    std::vector<S> out;
    for (std::int64_t k = lo_num; k <= hi_num; ++k) out.push_back(ScalarTraits<S>::from_ratio(k, den));
    return out;
}

}  // namespace contraction_lab
