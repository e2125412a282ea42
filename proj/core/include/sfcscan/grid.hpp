#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>

#include "sfcscan/error.hpp"

namespace sfcscan {

/// A cell of the pixel lattice. `row` runs over [0, height), `col` over [0, width).
struct Coord {
    std::int64_t row = 0;
    std::int64_t col = 0;

    friend constexpr bool operator==(const Coord&, const Coord&) = default;
};

/// Manhattan (lattice) distance between two cells.
constexpr std::int64_t manhattan(Coord a, Coord b) noexcept {
    const auto dr = a.row - b.row;
    const auto dc = a.col - b.col;
    return (dr < 0 ? -dr : dr) + (dc < 0 ? -dc : dc);
}

/// Height and width of a rectangular grid. Always validated: both sides
/// positive and the cell count representable.
class GridShape {
public:
    GridShape(std::int64_t height, std::int64_t width) : height_(height), width_(width) {
        if (height < 1 || width < 1) {
            throw InvalidArgument("grid shape must be positive, got " + std::to_string(height) +
                                  "x" + std::to_string(width));
        }
        // Indices are stored as uint32 in ScanOrder.
        if (height > std::numeric_limits<std::uint32_t>::max() / width) {
            throw InvalidArgument("grid shape too large: " + std::to_string(height) + "x" +
                                  std::to_string(width));
        }
    }

    std::int64_t height() const noexcept { return height_; }
    std::int64_t width() const noexcept { return width_; }
    std::size_t cells() const noexcept { return static_cast<std::size_t>(height_ * width_); }

    bool contains(Coord c) const noexcept {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }

    /// Row-major offset of a cell; the storage layout used by ScalarField.
    std::size_t offset(Coord c) const noexcept {
        return static_cast<std::size_t>(c.row * width_ + c.col);
    }
    Coord coord(std::size_t offset) const noexcept {
        const auto o = static_cast<std::int64_t>(offset);
        return {o / width_, o % width_};
    }

    std::string to_string() const { return std::to_string(height_) + "x" + std::to_string(width_); }

    friend bool operator==(const GridShape&, const GridShape&) = default;

private:
    std::int64_t height_;
    std::int64_t width_;
};

/// Parses "HxW" or a single integer "N" (square).
GridShape parse_shape(const std::string& text);

}  // namespace sfcscan
