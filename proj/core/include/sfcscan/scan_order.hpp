#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfcscan/field.hpp"
#include "sfcscan/grid.hpp"

namespace sfcscan {

enum class Family { Raster, Continuous, LocalWindow, Hilbert, Peano };

inline constexpr Family kAllFamilies[] = {Family::Raster, Family::Continuous, Family::LocalWindow,
                                          Family::Hilbert, Family::Peano};

/// Lower-case name used in files and on the command line
/// ("raster", "continuous", "local", "hilbert", "peano").
std::string_view family_name(Family family) noexcept;
Family parse_family(std::string_view name);

inline constexpr std::int64_t kDefaultLocalWindow = 8;

struct ScanParams {
    /// Tile side for Family::LocalWindow; ignored by the other families.
    std::int64_t window = kDefaultLocalWindow;
    /// Traverse the family's sequence back to front.
    bool reversed = false;

    friend bool operator==(const ScanParams&, const ScanParams&) = default;
};

/// A bijection between the cells of a grid and the sequence positions
/// [0, cells). Immutable once built.
class ScanOrder {
public:
    /// Builds an order from the visiting sequence: `sequence[k]` is the
    /// row-major offset of the k-th visited cell. Throws InvalidArgument
    /// unless the sequence is a permutation of [0, cells).
    static ScanOrder from_sequence(GridShape shape, Family family, ScanParams params,
                                   std::vector<std::uint32_t> sequence);

    const GridShape& shape() const noexcept { return shape_; }
    Family family() const noexcept { return family_; }
    const ScanParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return inverse_.size(); }

    /// Sequence index of a cell.
    std::size_t index_of(Coord c) const { return forward_[shape_.offset(c)]; }
    /// Cell visited at sequence index k.
    Coord coord_at(std::size_t k) const { return shape_.coord(inverse_[k]); }

    /// offset -> index, row-major.
    std::span<const std::uint32_t> forward() const noexcept { return forward_; }
    /// index -> offset.
    std::span<const std::uint32_t> inverse() const noexcept { return inverse_; }

    /// Short identity string, e.g. "hilbert_64x64" or "local_32x32_w8".
    std::string label() const;

    friend bool operator==(const ScanOrder&, const ScanOrder&) = default;

private:
    ScanOrder(GridShape shape, Family family, ScanParams params)
        : shape_(shape), family_(family), params_(params) {}

    GridShape shape_;
    Family family_;
    ScanParams params_;
    std::vector<std::uint32_t> forward_;
    std::vector<std::uint32_t> inverse_;
};

ScanOrder raster_order(GridShape shape, bool reversed = false);

/// Boustrophedon: even rows left to right, odd rows right to left.
ScanOrder continuous_order(GridShape shape, bool reversed = false);

/// window x window tiles in raster order of tiles, raster inside each tile.
/// Tiles on the right and bottom edges are clipped to the grid.
ScanOrder local_order(GridShape shape, std::int64_t window = kDefaultLocalWindow,
                      bool reversed = false);

/// Hilbert ordering. On 2^k x 2^k grids this is the classic curve entering
/// at (0,0) and leaving at (0, width-1), every step a lattice neighbour. Other
/// shapes use recursive halving along the longer side; steps are then at most
/// Manhattan distance 2.
ScanOrder hilbert_order(GridShape shape, bool reversed = false);

/// Peano ordering. On 3^k x 3^k grids this is the classic serpentine curve
/// entering at (0,0) and leaving at (height-1, width-1). Other shapes are cut
/// out of the smallest enclosing 3^k square and renumbered.
ScanOrder peano_order(GridShape shape, bool reversed = false);

ScanOrder make_order(Family family, GridShape shape, ScanParams params = {});

/// output[k] = field(inverse(k)).
std::vector<double> apply_order(const ScanOrder& order, const ScalarField& field);

/// Inverse of apply_order: scatters a sequence back onto the grid.
ScalarField invert_order(const ScanOrder& order, std::span<const double> sequence);

/// Text format: header `family height width [key=value ...]`, then one
/// `index row col` line per cell sorted by index.
void write_order(std::ostream& out, const ScanOrder& order);
ScanOrder read_order(std::istream& in);

void save_order(const std::string& path, const ScanOrder& order);
ScanOrder load_order(const std::string& path);

}  // namespace sfcscan
