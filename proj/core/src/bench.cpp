#include "sfcscan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <ostream>

#include "sfcscan/experiments.hpp"
#include "sfcscan/metrics.hpp"
#include "sfcscan/ssm.hpp"

namespace sfcscan {

namespace {

using Clock = std::chrono::steady_clock;

double time_once(const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

BenchRow measure(std::string name, Family family, GridShape shape, int reps,
                 const std::function<void()>& fn) {
    BenchRow row;
    row.name = std::move(name);
    row.family = family;
    row.height = shape.height();
    row.width = shape.width();
    row.reps = reps;
    try {
        std::vector<double> samples;
        samples.reserve(static_cast<std::size_t>(reps));
        for (int i = 0; i < reps; ++i) samples.push_back(time_once(fn));
        const auto t = summarize_timings(std::move(samples));
        row.min_ms = t.min_ms;
        row.median_ms = t.median_ms;
        row.max_ms = t.max_ms;
        row.cells_per_s = t.median_ms > 0.0
                              ? static_cast<double>(shape.cells()) / (t.median_ms * 1e-3)
                              : 0.0;
    } catch (const std::exception& e) {
        row.status = e.what();
        std::replace(row.status.begin(), row.status.end(), ',', ';');
    }
    return row;
}

}  // namespace

TimingSummary summarize_timings(std::vector<double> samples_ms) {
    if (samples_ms.empty()) throw InvalidArgument("no timing samples");
    std::sort(samples_ms.begin(), samples_ms.end());
    const auto n = samples_ms.size();
    const double median =
        n % 2 ? samples_ms[n / 2] : 0.5 * (samples_ms[n / 2 - 1] + samples_ms[n / 2]);
    return {samples_ms.front(), median, samples_ms.back()};
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
    if (config.reps < 5) throw InvalidArgument("bench needs at least 5 repetitions");
    std::vector<BenchRow> rows;
    for (Family family : config.families) {
        for (auto side : config.sizes) {
            const GridShape shape(side, side);
            rows.push_back(measure("generate", family, shape, config.reps, [&] {
                const auto order = make_order(family, shape);
                if (order.size() != shape.cells()) throw Error("order size mismatch");
            }));
        }
    }

    const GridShape scan_shape(config.scan_size, config.scan_size);
    const auto base = ContinuousSSM::random_diagonal(config.state_dim, config.seed);
    const auto params = SelectiveParams::random(base, 1, config.seed + 1);
    const auto field = make_holder_field(scan_shape, 0.5, config.seed).values;
    for (Family family : config.families) {
        const auto order = make_order(family, scan_shape);
        rows.push_back(measure("scan_reuse", family, scan_shape, config.reps,
                               [&] { (void)scan_over_grid(order, field, params, base); }));
        rows.push_back(measure("scan_regenerate", family, scan_shape, config.reps, [&] {
            const auto fresh = make_order(family, scan_shape);
            (void)scan_over_grid(fresh, field, params, base);
        }));
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << kBenchCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.name << ',' << family_name(r.family) << ',' << r.height << ',' << r.width << ','
            << r.reps << ',' << format_real(r.min_ms) << ',' << format_real(r.median_ms) << ','
            << format_real(r.max_ms) << ',' << format_real(r.cells_per_s) << ',' << r.status
            << '\n';
    }
}

}  // namespace sfcscan
