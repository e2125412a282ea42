#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sfcscan/field.hpp"
#include "sfcscan/metrics.hpp"
#include "sfcscan/scan_order.hpp"

namespace sfcscan {

/// A synthetic field together with its Hoelder exponent and a constant C_f
/// such that |f(x) - f(y)| <= C_f * |x - y|^alpha (Euclidean).
struct HolderField {
    ScalarField values;
    double alpha = 1.0;
    double holder_constant = 0.0;
    /// True when holder_constant was measured over every pair of cells,
    /// false when it comes from random pairs only (large grids).
    bool exact_constant = true;
    std::uint64_t seed = 0;

    const GridShape& shape() const noexcept { return values.shape(); }
};

/// Grids up to this many cells get an exact all-pairs Hoelder constant.
inline constexpr std::size_t kExactHolderCells = 128 * 128;
/// Random pairs examined on larger grids.
inline constexpr std::size_t kHolderSamplePairs = 100000;

/// max |f(x) - f(y)| / |x - y|^alpha over all pairs (or sampled pairs above
/// kExactHolderCells), nudged up by a few ulps so the inequality survives
/// rounding when re-evaluated.
double measure_holder_constant(const ScalarField& field, double alpha, std::uint64_t seed,
                               bool* exact = nullptr);

/// Wraps an existing field, measuring its constant.
HolderField holder_field_from(ScalarField values, double alpha, std::uint64_t seed = 0);

/// Midpoint-displacement (diamond-square) field whose displacement amplitude
/// shrinks by 2^-alpha per halving of the step, cropped to `shape` and
/// rescaled to [0, 1]. Requires 0 < alpha <= 1.
HolderField make_holder_field(GridShape shape, double alpha, std::uint64_t seed);

/// f_hat(x) = f(nearest sample), Euclidean; ties go to the sample listed
/// first (the lowest scan index for prefix sets).
ScalarField nearest_neighbor_interpolate(const SampleSet& samples, const ScalarField& field);

struct ErrorNorms {
    double max_abs = 0.0;
    double rms = 0.0;
};

ErrorNorms error_norms(const ScalarField& a, const ScalarField& b);

/// 10 log10(peak^2 / MSE); +infinity when the fields are identical.
double psnr(const ScalarField& a, const ScalarField& b, double peak = 1.0);

struct InterpolationResult {
    std::string scan;
    Family family = Family::Raster;
    std::int64_t height = 0;
    std::int64_t width = 0;
    double alpha = 0.0;
    double fraction = 0.0;
    std::int64_t trial = 0;
    std::size_t m = 0;
    double dispersion = 0.0;
    double max_err = 0.0;
    double rms_err = 0.0;
    /// C_f * dispersion^alpha.
    double bound = 0.0;
};

struct StudyConfig {
    std::vector<GridShape> shapes{GridShape(64, 64)};
    std::vector<Family> families{std::begin(kAllFamilies), std::end(kAllFamilies)};
    std::vector<double> fractions{0.25};
    std::vector<double> alphas{0.5};
    std::int64_t trials = 100;
    std::uint64_t seed = 7;
    std::int64_t window = kDefaultLocalWindow;
};

/// Keys: grid/grids, families, fractions, alphas, trials, seed, window.
/// `key = value` lines, lists comma separated, '#' comments.
StudyConfig parse_study_config(std::string_view text);

/// Prefix length for a fraction of the grid, rounded, at least 1.
std::size_t prefix_length(GridShape shape, double fraction);

/// For every (shape, alpha, trial) a fresh field seeded from (seed, trial);
/// for every (family, fraction) its prefix samples are interpolated and
/// scored. Rows come out in that nesting order.
std::vector<InterpolationResult> run_interp_study(const StudyConfig& config);

inline constexpr const char* kStudyCsvHeader =
    "family,H,W,alpha,fraction,trial,m,dispersion,max_err,rms_err,bound";

void write_study_csv(std::ostream& out, const std::vector<InterpolationResult>& rows);

/// Number of trials in which `family` has strictly smaller max_err than
/// `baseline`, restricted to rows matching shape, alpha and fraction.
std::int64_t count_max_error_wins(const std::vector<InterpolationResult>& rows, Family family,
                                  Family baseline, GridShape shape, double alpha, double fraction);

}  // namespace sfcscan
