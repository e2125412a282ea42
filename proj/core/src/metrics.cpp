#include "sfcscan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <ostream>
#include <set>

namespace sfcscan {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Lower envelope of parabolas f(v) + (q - v)^2, one row or column at a time.
void distance_transform_1d(std::span<const std::int64_t> f, std::span<std::int64_t> out,
                           std::vector<std::int64_t>& v, std::vector<double>& z) {
    const auto n = static_cast<std::int64_t>(f.size());
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    std::int64_t k = -1;
    for (std::int64_t q = 0; q < n; ++q) {
        if (f[q] >= kInf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -std::numeric_limits<double>::infinity();
            z[1] = std::numeric_limits<double>::infinity();
            continue;
        }
        double s = 0.0;
        for (;;) {
            const auto p = v[k];
            s = static_cast<double>((f[q] + q * q) - (f[p] + p * p)) / static_cast<double>(2 * (q - p));
            if (s <= z[k] && k > 0) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) {
        std::fill(out.begin(), out.end(), kInf);
        return;
    }
    std::int64_t j = 0;
    for (std::int64_t q = 0; q < n; ++q) {
        while (z[j + 1] < static_cast<double>(q)) ++j;
        const auto d = q - v[j];
        out[q] = d * d + f[v[j]];
    }
}

double lattice_dispersion(const SampleSet& samples, bool diagonal) {
    const auto& shape = samples.shape();
    const auto h = shape.height();
    const auto w = shape.width();
    std::vector<std::int64_t> dist(shape.cells(), -1);
    std::deque<std::size_t> queue;
    for (const Coord& p : samples.points()) {
        dist[shape.offset(p)] = 0;
        queue.push_back(shape.offset(p));
    }
    std::int64_t worst = 0;
    while (!queue.empty()) {
        const auto off = queue.front();
        queue.pop_front();
        const Coord c = shape.coord(off);
        const auto d = dist[off];
        worst = std::max(worst, d);
        for (std::int64_t dr = -1; dr <= 1; ++dr) {
            for (std::int64_t dc = -1; dc <= 1; ++dc) {
                if ((dr == 0 && dc == 0) || (!diagonal && dr != 0 && dc != 0)) continue;
                const Coord n{c.row + dr, c.col + dc};
                if (n.row < 0 || n.row >= h || n.col < 0 || n.col >= w) continue;
                auto& nd = dist[shape.offset(n)];
                if (nd < 0) {
                    nd = d + 1;
                    queue.push_back(shape.offset(n));
                }
            }
        }
    }
    return static_cast<double>(worst);
}

void require_nonempty(const SampleSet& samples) {
    if (samples.empty()) throw InvalidArgument("dispersion of an empty sample set is undefined");
}

}  // namespace

SampleSet::SampleSet(GridShape shape, std::vector<Coord> points, std::string source)
    : shape_(shape), points_(std::move(points)), source_(std::move(source)) {
    std::vector<bool> seen(shape_.cells(), false);
    for (const Coord& p : points_) {
        if (!shape_.contains(p)) {
            throw InvalidArgument("sample (" + std::to_string(p.row) + "," +
                                  std::to_string(p.col) + ") outside grid " + shape_.to_string());
        }
        const auto off = shape_.offset(p);
        if (seen[off]) {
            throw InvalidArgument("duplicate sample (" + std::to_string(p.row) + "," +
                                  std::to_string(p.col) + ")");
        }
        seen[off] = true;
    }
}

SampleSet prefix_samples(const ScanOrder& order, std::size_t m) {
    if (m < 1 || m > order.size()) {
        throw InvalidArgument("prefix length " + std::to_string(m) + " outside [1, " +
                              std::to_string(order.size()) + "]");
    }
    std::vector<Coord> pts;
    pts.reserve(m);
    for (std::size_t k = 0; k < m; ++k) pts.push_back(order.coord_at(k));
    return SampleSet(order.shape(), std::move(pts), order.label() + " prefix m=" + std::to_string(m));
}

SampleSet strided_samples(const ScanOrder& order, std::size_t stride) {
    if (stride < 1) throw InvalidArgument("stride must be >= 1");
    std::vector<Coord> pts;
    pts.reserve(order.size() / stride + 1);
    for (std::size_t k = 0; k < order.size(); k += stride) pts.push_back(order.coord_at(k));
    return SampleSet(order.shape(), std::move(pts),
                     order.label() + " stride=" + std::to_string(stride));
}

Norm parse_norm(std::string_view name) {
    if (name == "euclidean") return Norm::Euclidean;
    if (name == "manhattan") return Norm::Manhattan;
    if (name == "chebyshev") return Norm::Chebyshev;
    throw InvalidArgument("unknown norm '" + std::string(name) + "'");
}

std::vector<std::int64_t> squared_distance_transform(const SampleSet& samples) {
    require_nonempty(samples);
    const auto& shape = samples.shape();
    const auto h = static_cast<std::size_t>(shape.height());
    const auto w = static_cast<std::size_t>(shape.width());
    std::vector<std::int64_t> grid(shape.cells(), kInf);
    for (const Coord& p : samples.points()) grid[shape.offset(p)] = 0;

    std::vector<std::int64_t> v;
    std::vector<double> z;
    std::vector<std::int64_t> col_in(h), col_out(h);
    for (std::size_t c = 0; c < w; ++c) {
        for (std::size_t r = 0; r < h; ++r) col_in[r] = grid[r * w + c];
        distance_transform_1d(col_in, col_out, v, z);
        for (std::size_t r = 0; r < h; ++r) grid[r * w + c] = col_out[r];
    }
    std::vector<std::int64_t> row_out(w);
    for (std::size_t r = 0; r < h; ++r) {
        std::span<std::int64_t> row(grid.data() + r * w, w);
        distance_transform_1d(row, row_out, v, z);
        std::copy(row_out.begin(), row_out.end(), row.begin());
    }
    return grid;
}

double dispersion(const SampleSet& samples, Norm norm) {
    require_nonempty(samples);
    switch (norm) {
        case Norm::Euclidean: {
            const auto d2 = squared_distance_transform(samples);
            return std::sqrt(static_cast<double>(*std::max_element(d2.begin(), d2.end())));
        }
        case Norm::Manhattan: return lattice_dispersion(samples, false);
        case Norm::Chebyshev: return lattice_dispersion(samples, true);
    }
    throw InvalidArgument("unknown norm");
}

double dispersion_brute_force(const SampleSet& samples, Norm norm) {
    require_nonempty(samples);
    const auto& shape = samples.shape();
    const auto h = shape.height();
    const auto w = shape.width();
    std::vector<std::int64_t> best(shape.cells(), kInf);
    // Sample-major loop keeps the inner loop over contiguous cells.
    for (const Coord& p : samples.points()) {
        for (std::int64_t r = 0; r < h; ++r) {
            const auto dr = r - p.row;
            auto* row = best.data() + r * w;
            for (std::int64_t c = 0; c < w; ++c) {
                const auto dc = c - p.col;
                std::int64_t d = 0;
                switch (norm) {
                    case Norm::Euclidean: d = dr * dr + dc * dc; break;
                    case Norm::Manhattan: d = std::abs(dr) + std::abs(dc); break;
                    case Norm::Chebyshev: d = std::max(std::abs(dr), std::abs(dc)); break;
                }
                row[c] = std::min(row[c], d);
            }
        }
    }
    const auto worst = static_cast<double>(*std::max_element(best.begin(), best.end()));
    return norm == Norm::Euclidean ? std::sqrt(worst) : worst;
}

JumpStats jump_statistics(const ScanOrder& order) {
    if (order.size() < 2) throw InvalidArgument("jump statistics need at least two cells");
    JumpStats s;
    std::int64_t total = 0;
    Coord prev = order.coord_at(0);
    for (std::size_t k = 1; k < order.size(); ++k) {
        const Coord cur = order.coord_at(k);
        const auto d = manhattan(prev, cur);
        total += d;
        s.max_jump = std::max(s.max_jump, d);
        if (d > 1) ++s.jumps_gt1;
        prev = cur;
    }
    s.mean_jump = static_cast<double>(total) / static_cast<double>(order.size() - 1);
    return s;
}

std::vector<std::int64_t> default_box_scales(GridShape shape) {
    const auto side = std::min(shape.height(), shape.width());
    std::vector<std::int64_t> out;
    for (auto s : kDefaultBoxScales) {
        if (s <= side) out.push_back(s);
    }
    return out;
}

BoxDimension box_counting_dimension(const SampleSet& samples,
                                    const std::vector<std::int64_t>& scales) {
    if (samples.empty()) throw InvalidArgument("box counting needs at least one sample");
    const std::set<std::int64_t> distinct(scales.begin(), scales.end());
    if (distinct.size() < 3) throw InvalidArgument("box counting needs at least three distinct scales");
    if (*distinct.begin() < 1) throw InvalidArgument("box sizes must be positive");

    const auto& shape = samples.shape();
    BoxDimension out;
    std::vector<double> xs, ys;
    for (auto s : distinct) {
        const auto bw = (shape.width() + s - 1) / s;
        const auto bh = (shape.height() + s - 1) / s;
        std::vector<bool> occupied(static_cast<std::size_t>(bw * bh), false);
        std::int64_t count = 0;
        for (const Coord& p : samples.points()) {
            const auto b = static_cast<std::size_t>((p.row / s) * bw + p.col / s);
            if (!occupied[b]) {
                occupied[b] = true;
                ++count;
            }
        }
        out.scales.push_back(s);
        out.counts.push_back(count);
        xs.push_back(-std::log(static_cast<double>(s)));
        ys.push_back(std::log(static_cast<double>(count)));
    }
    if (std::all_of(out.counts.begin(), out.counts.end(),
                    [&](auto c) { return c == out.counts.front(); })) {
        throw InvalidArgument("box counting fit is degenerate: identical counts at every scale");
    }

    const auto n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    out.slope = sxy / sxx;
    const double intercept = my - out.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + out.slope * xs[i]);
        ss_res += e * e;
    }
    out.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return out;
}

MetricReport make_metric_report(const ScanOrder& order, std::size_t m,
                                const std::vector<std::int64_t>& scales) {
    return make_metric_report(order, prefix_samples(order, m), scales);
}

MetricReport make_metric_report(const ScanOrder& order, const SampleSet& samples,
                                const std::vector<std::int64_t>& scales, Norm norm) {
    if (!(samples.shape() == order.shape())) {
        throw ShapeMismatch("samples do not belong to order " + order.label());
    }
    MetricReport r;
    r.scan = order.label();
    r.family = order.family();
    r.height = order.shape().height();
    r.width = order.shape().width();
    r.m = samples.size();
    r.dispersion = dispersion(samples, norm);
    if (order.size() >= 2) {
        const auto js = jump_statistics(order);
        r.max_jump = js.max_jump;
        r.mean_jump = js.mean_jump;
        r.jumps_gt1 = js.jumps_gt1;
    }
    try {
        const auto bd = box_counting_dimension(samples, scales);
        r.boxdim_slope = bd.slope;
        r.boxdim_r2 = bd.r2;
    } catch (const InvalidArgument&) {
        r.boxdim_slope = std::numeric_limits<double>::quiet_NaN();
        r.boxdim_r2 = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

void write_metric_csv_row(std::ostream& out, const MetricReport& r) {
    out << r.scan << ',' << family_name(r.family) << ',' << r.height << ',' << r.width << ','
        << r.m << ',' << format_real(r.dispersion) << ',' << r.max_jump << ','
        << format_real(r.mean_jump) << ',' << r.jumps_gt1 << ',' << format_real(r.boxdim_slope)
        << ',' << format_real(r.boxdim_r2) << '\n';
}

}  // namespace sfcscan
