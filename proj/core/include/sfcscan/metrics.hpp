#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sfcscan/scan_order.hpp"

namespace sfcscan {

/// A sampling set P inside a grid: distinct in-bounds cells. The stored order
/// is meaningful (scan order for prefixes) and is used for tie-breaking by
/// consumers such as nearest-neighbour interpolation.
class SampleSet {
public:
    /// Throws InvalidArgument on out-of-bounds or duplicate points.
    SampleSet(GridShape shape, std::vector<Coord> points, std::string source = {});

    const GridShape& shape() const noexcept { return shape_; }
    const std::vector<Coord>& points() const noexcept { return points_; }
    const std::string& source() const noexcept { return source_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

private:
    GridShape shape_;
    std::vector<Coord> points_;
    std::string source_;
};

/// First m cells of the order. Requires 1 <= m <= cells.
SampleSet prefix_samples(const ScanOrder& order, std::size_t m);

/// Cells at sequence indices 0, stride, 2*stride, ...
SampleSet strided_samples(const ScanOrder& order, std::size_t stride);

enum class Norm { Euclidean, Manhattan, Chebyshev };

Norm parse_norm(std::string_view name);

/// Largest distance from any grid cell to its nearest sample (cell units).
/// Uses an exact distance transform for the Euclidean norm and multi-source
/// breadth-first search for the lattice norms. O(cells).
double dispersion(const SampleSet& samples, Norm norm = Norm::Euclidean);

/// Reference O(cells * samples) evaluation of the same quantity.
double dispersion_brute_force(const SampleSet& samples, Norm norm = Norm::Euclidean);

/// Squared Euclidean distance from every cell to its nearest sample, row-major.
std::vector<std::int64_t> squared_distance_transform(const SampleSet& samples);

struct JumpStats {
    std::int64_t max_jump = 0;
    double mean_jump = 0.0;
    std::int64_t jumps_gt1 = 0;
};

/// Manhattan distance statistics over consecutive cells of the order.
/// Requires at least two cells.
JumpStats jump_statistics(const ScanOrder& order);

struct BoxDimension {
    double slope = 0.0;
    double r2 = 0.0;
    std::vector<std::int64_t> scales;
    std::vector<std::int64_t> counts;
};

inline const std::vector<std::int64_t> kDefaultBoxScales = {2, 4, 8, 16, 32};

/// Default scales restricted to sizes not exceeding the shorter grid side.
std::vector<std::int64_t> default_box_scales(GridShape shape);

/// Least-squares slope of log N(s) against log(1/s), where N(s) counts the
/// s x s boxes (aligned at the origin, clipped at the edges) holding at
/// least one sample. Throws InvalidArgument for fewer than three distinct
/// scales or a flat count profile.
BoxDimension box_counting_dimension(const SampleSet& samples,
                                    const std::vector<std::int64_t>& scales);

/// One row of the metric table for an order and a prefix length.
struct MetricReport {
    std::string scan;
    Family family = Family::Raster;
    std::int64_t height = 0;
    std::int64_t width = 0;
    std::size_t m = 0;
    double dispersion = 0.0;
    std::int64_t max_jump = 0;
    double mean_jump = 0.0;
    std::int64_t jumps_gt1 = 0;
    /// NaN when the prefix is too small or too regular for a fit.
    double boxdim_slope = 0.0;
    double boxdim_r2 = 0.0;
};

MetricReport make_metric_report(const ScanOrder& order, std::size_t m,
                                const std::vector<std::int64_t>& scales);

/// Same, for an arbitrary sample set drawn from `order` (m = sample count).
MetricReport make_metric_report(const ScanOrder& order, const SampleSet& samples,
                                const std::vector<std::int64_t>& scales,
                                Norm norm = Norm::Euclidean);

inline constexpr const char* kMetricCsvHeader =
    "scan,family,H,W,m,dispersion,max_jump,mean_jump,jumps_gt1,boxdim_slope,boxdim_r2";

void write_metric_csv_row(std::ostream& out, const MetricReport& report);

/// `%.9g` formatting used by every CSV writer.
std::string format_real(double value);

}  // namespace sfcscan
