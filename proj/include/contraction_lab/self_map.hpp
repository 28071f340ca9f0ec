#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "contraction_lab/errors.hpp"
#include "contraction_lab/metric_space.hpp"
#include "contraction_lab/sampled_space.hpp"

namespace contraction_lab {

/// Self-map of a finite space given by its image table.
template <DistanceScalar S>
class TableMap {
public:
    using space_type = FiniteMetricSpace<S>;
    using point_type = std::size_t;
    using scalar_type = S;

    TableMap(std::shared_ptr<const space_type> space, std::vector<std::size_t> images)
        : space_(std::move(space)), images_(std::move(images)) {
        if (!space_) throw InputError("map needs a space");
        if (images_.size() != space_->size())
            throw InputError("map table has " + std::to_string(images_.size()) + " entries, space has " +
                             std::to_string(space_->size()) + " points");
        for (std::size_t i = 0; i < images_.size(); ++i)
            if (images_[i] >= space_->size())
                throw InputError("image of point " + std::to_string(i) + " is outside the space");
    }

    TableMap(space_type space, std::vector<std::size_t> images)
        : TableMap(std::make_shared<const space_type>(std::move(space)), std::move(images)) {}

    [[nodiscard]] const space_type& space() const noexcept { return *space_; }
    [[nodiscard]] std::shared_ptr<const space_type> space_ptr() const noexcept { return space_; }
    [[nodiscard]] const std::vector<std::size_t>& images() const noexcept { return images_; }

    [[nodiscard]] std::size_t apply(std::size_t x) const {
        space_->require(x);
        return images_[x];
    }

    /// Every point of the space, in index order.
    [[nodiscard]] std::vector<std::size_t> points() const {
        std::vector<std::size_t> out(space_->size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
        return out;
    }

private:
    std::shared_ptr<const space_type> space_;
    std::vector<std::size_t> images_;
};

/// Self-map of a sampled line space given by a formula evaluated in S.
template <DistanceScalar S>
class FormulaMap {
public:
    using space_type = LineSpace<S>;
    using point_type = S;
    using scalar_type = S;
    using Formula = std::function<S(const S&)>;

    FormulaMap(std::shared_ptr<const space_type> space, std::string formula_text, Formula f)
        : space_(std::move(space)), text_(std::move(formula_text)), f_(std::move(f)) {}

    [[nodiscard]] const space_type& space() const noexcept { return *space_; }
    [[nodiscard]] const std::string& formula_text() const noexcept { return text_; }

    [[nodiscard]] S apply(const S& x) const {
        space_->require(x);
        S y = f_(x);
        if (!space_->contains(y))
            throw InternalConsistencyError("image " + space_->label(y) + " of " + space_->label(x) +
                                           " leaves " + space_->description());
        return y;
    }

    [[nodiscard]] std::vector<S> points(int level = 0) const { return space_->sample(level); }

private:
    std::shared_ptr<const space_type> space_;
    std::string text_;
    Formula f_;
};

template <typename Map>
concept SelfMapLike = requires(const Map& m, const typename Map::point_type& p) {
    typename Map::space_type;
    typename Map::point_type;
    typename Map::scalar_type;
    { m.space() } -> std::convertible_to<const typename Map::space_type&>;
    { m.apply(p) } -> std::convertible_to<typename Map::point_type>;
};

/// T^k(x).
template <SelfMapLike Map>
typename Map::point_type iterate(const Map& map, typename Map::point_type x, std::size_t k) {
    map.space().require(x);
    for (std::size_t i = 0; i < k; ++i) x = map.apply(x);
    return x;
}

}  // namespace contraction_lab
