#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sfcscan/scan_order.hpp"

namespace sfcscan {

struct BenchConfig {
    /// Square sides for order generation.
    std::vector<std::int64_t> sizes{64, 256, 1024};
    std::vector<Family> families{std::begin(kAllFamilies), std::end(kAllFamilies)};
    int reps = 5;
    /// Side of the grid used for the scan throughput cases.
    std::int64_t scan_size = 256;
    std::int64_t state_dim = 4;
    std::uint64_t seed = 7;
};

struct BenchRow {
    std::string name;  // "generate", "scan_reuse", "scan_regenerate"
    Family family = Family::Raster;
    std::int64_t height = 0;
    std::int64_t width = 0;
    int reps = 0;
    double min_ms = 0.0;
    double median_ms = 0.0;
    double max_ms = 0.0;
    /// Cells per second at the median time.
    double cells_per_s = 0.0;
    /// "ok" or the error message of a failed case.
    std::string status = "ok";
};

/// Timing summary of a set of wall-clock samples in milliseconds.
struct TimingSummary {
    double min_ms = 0.0;
    double median_ms = 0.0;
    double max_ms = 0.0;
};

TimingSummary summarize_timings(std::vector<double> samples_ms);

/// Runs every case; a failing case is recorded in its row and does not stop
/// the others. Requires reps >= 5.
std::vector<BenchRow> run_bench(const BenchConfig& config);

inline constexpr const char* kBenchCsvHeader =
    "case,family,H,W,reps,min_ms,median_ms,max_ms,cells_per_s,status";

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace sfcscan
