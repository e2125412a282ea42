#pragma once

#include <span>
#include <vector>

#include "sfcscan/grid.hpp"

namespace sfcscan {

/// A single-channel real-valued function sampled on a grid, stored row-major.
class ScalarField {
public:
    explicit ScalarField(GridShape shape, double fill = 0.0)
        : shape_(shape), values_(shape.cells(), fill) {}

    ScalarField(GridShape shape, std::vector<double> values);

    const GridShape& shape() const noexcept { return shape_; }

    double at(Coord c) const { return values_[shape_.offset(c)]; }
    double& at(Coord c) { return values_[shape_.offset(c)]; }
    double operator[](std::size_t offset) const { return values_[offset]; }
    double& operator[](std::size_t offset) { return values_[offset]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    GridShape shape_;
    std::vector<double> values_;
};

}  // namespace sfcscan
