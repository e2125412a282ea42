#include "sfcscan/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "sfcscan/random.hpp"

namespace sfcscan {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("Hoelder exponent must lie in (0, 1], got " + format_real(alpha));
    }
}

void require_same_shape(const ScalarField& a, const ScalarField& b) {
    if (!(a.shape() == b.shape())) {
        throw ShapeMismatch("fields differ in shape: " + a.shape().to_string() + " vs " +
                            b.shape().to_string());
    }
}

// max over valid cell pairs separated by (dr, dc) of |f(x) - f(x + offset)|.
double max_diff_at_offset(const ScalarField& f, std::int64_t dr, std::int64_t dc) {
    const auto h = f.shape().height();
    const auto w = f.shape().width();
    const auto vals = f.values();
    const std::int64_t c0 = std::max<std::int64_t>(0, -dc);
    const std::int64_t c1 = std::min(w, w - dc);
    double best = 0.0;
    for (std::int64_t r = 0; r + dr < h; ++r) {
        const double* a = vals.data() + r * w;
        const double* b = vals.data() + (r + dr) * w + dc;
        for (std::int64_t c = c0; c < c1; ++c) best = std::max(best, std::abs(a[c] - b[c]));
    }
    return best;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

double measure_holder_constant(const ScalarField& field, double alpha, std::uint64_t seed,
                               bool* exact) {
    check_alpha(alpha);
    const auto& shape = field.shape();
    const auto h = shape.height();
    const auto w = shape.width();
    double best = 0.0;
    auto consider = [&](std::int64_t dr, std::int64_t dc, double diff) {
        if (diff == 0.0) return;
        const double dist = std::sqrt(static_cast<double>(dr * dr + dc * dc));
        best = std::max(best, diff / std::pow(dist, alpha));
    };

    const bool all_pairs = shape.cells() <= kExactHolderCells;
    if (all_pairs) {
        // Every unordered pair appears once: dr > 0 with any dc, or dr == 0, dc > 0.
        for (std::int64_t dr = 0; dr < h; ++dr) {
            for (std::int64_t dc = (dr == 0 ? 1 : -(w - 1)); dc < w; ++dc) {
                consider(dr, dc, max_diff_at_offset(field, dr, dc));
            }
        }
    } else {
        // Short offsets exhaustively, long ones by random pairs.
        constexpr std::int64_t kNear = 8;
        for (std::int64_t dr = 0; dr <= std::min(kNear, h - 1); ++dr) {
            for (std::int64_t dc = (dr == 0 ? 1 : -std::min(kNear, w - 1));
                 dc <= std::min(kNear, w - 1); ++dc) {
                consider(dr, dc, max_diff_at_offset(field, dr, dc));
            }
        }
        Rng rng(derive_seed(seed, 0x686f6c646572ULL));
        const auto n = shape.cells();
        for (std::size_t i = 0; i < kHolderSamplePairs; ++i) {
            const Coord a = shape.coord(rng.below(n));
            const Coord b = shape.coord(rng.below(n));
            if (a == b) continue;
            consider(b.row - a.row, b.col - a.col, std::abs(field.at(a) - field.at(b)));
        }
    }
    if (exact) *exact = all_pairs;
    return best * (1.0 + 8 * std::numeric_limits<double>::epsilon());
}

HolderField holder_field_from(ScalarField values, double alpha, std::uint64_t seed) {
    bool exact = false;
    const double c = measure_holder_constant(values, alpha, seed, &exact);
    return HolderField{std::move(values), alpha, c, exact, seed};
}

HolderField make_holder_field(GridShape shape, double alpha, std::uint64_t seed) {
    check_alpha(alpha);
    std::int64_t n = 2;
    while (n + 1 < std::max(shape.height(), shape.width())) n *= 2;
    const std::int64_t side = n + 1;

    Rng rng(seed);
    std::vector<double> g(static_cast<std::size_t>(side * side), 0.0);
    auto at = [&](std::int64_t r, std::int64_t c) -> double& {
        return g[static_cast<std::size_t>(r * side + c)];
    };
    for (auto [r, c] : {std::pair{0L, 0L}, {0L, n}, {n, 0L}, {n, n}}) at(r, c) = rng.uniform(-1, 1);

    const double decay = std::pow(2.0, -alpha);
    double amp = 1.0;
    for (std::int64_t step = n; step > 1; step /= 2) {
        const std::int64_t half = step / 2;
        for (std::int64_t r = half; r < side; r += step) {
            for (std::int64_t c = half; c < side; c += step) {
                const double avg =
                    (at(r - half, c - half) + at(r - half, c + half) + at(r + half, c - half) +
                     at(r + half, c + half)) / 4.0;
                at(r, c) = avg + amp * rng.uniform(-1, 1);
            }
        }
        for (std::int64_t r = 0; r < side; r += half) {
            for (std::int64_t c = ((r / half) % 2 == 0) ? half : 0; c < side; c += step) {
                double sum = 0.0;
                int count = 0;
                if (r >= half) sum += at(r - half, c), ++count;
                if (r + half < side) sum += at(r + half, c), ++count;
                if (c >= half) sum += at(r, c - half), ++count;
                if (c + half < side) sum += at(r, c + half), ++count;
                at(r, c) = sum / count + amp * rng.uniform(-1, 1);
            }
        }
        amp *= decay;
    }

    ScalarField field(shape);
    for (std::int64_t r = 0; r < shape.height(); ++r) {
        for (std::int64_t c = 0; c < shape.width(); ++c) field.at({r, c}) = at(r, c);
    }
    const auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
    const double lo_v = *lo;
    const double span = *hi - *lo;
    if (span > 0.0) {
        for (double& v : field.values()) v = (v - lo_v) / span;
    }
    return holder_field_from(std::move(field), alpha, seed);
}

ScalarField nearest_neighbor_interpolate(const SampleSet& samples, const ScalarField& field) {
    if (samples.empty()) throw InvalidArgument("interpolation needs at least one sample");
    if (!(samples.shape() == field.shape())) {
        throw ShapeMismatch("samples live on " + samples.shape().to_string() + ", field is " +
                            field.shape().to_string());
    }
    const auto& shape = field.shape();
    const auto h = shape.height();
    const auto w = shape.width();
    std::vector<std::int64_t> best(shape.cells(), std::numeric_limits<std::int64_t>::max());
    std::vector<std::uint32_t> owner(shape.cells(), 0);
    const auto& pts = samples.points();
    // Strict '<' keeps the earliest sample on ties.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Coord p = pts[i];
        for (std::int64_t r = 0; r < h; ++r) {
            const auto dr2 = (r - p.row) * (r - p.row);
            auto* brow = best.data() + r * w;
            auto* orow = owner.data() + r * w;
            for (std::int64_t c = 0; c < w; ++c) {
                const auto d = dr2 + (c - p.col) * (c - p.col);
                const bool closer = d < brow[c];
                brow[c] = closer ? d : brow[c];
                orow[c] = closer ? static_cast<std::uint32_t>(i) : orow[c];
            }
        }
    }
    ScalarField out(shape);
    for (std::size_t k = 0; k < shape.cells(); ++k) out[k] = field.at(pts[owner[k]]);
    return out;
}

ErrorNorms error_norms(const ScalarField& a, const ScalarField& b) {
    require_same_shape(a, b);
    ErrorNorms e;
    double sq = 0.0;
    for (std::size_t k = 0; k < a.shape().cells(); ++k) {
        const double d = std::abs(a[k] - b[k]);
        e.max_abs = std::max(e.max_abs, d);
        sq += d * d;
    }
    e.rms = std::sqrt(sq / static_cast<double>(a.shape().cells()));
    return e;
}

double psnr(const ScalarField& a, const ScalarField& b, double peak) {
    require_same_shape(a, b);
    if (!(peak > 0.0)) throw InvalidArgument("PSNR peak must be positive");
    double sq = 0.0;
    for (std::size_t k = 0; k < a.shape().cells(); ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
    const double mse = sq / static_cast<double>(a.shape().cells());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

StudyConfig parse_study_config(std::string_view text) {
    StudyConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("study config line " + std::to_string(lineno) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        try {
            if (key == "grid" || key == "grids") {
                cfg.shapes.clear();
                for (const auto& s : split_list(value)) cfg.shapes.push_back(parse_shape(s));
            } else if (key == "families") {
                cfg.families.clear();
                for (const auto& s : split_list(value)) cfg.families.push_back(parse_family(s));
            } else if (key == "fractions" || key == "fraction") {
                cfg.fractions.clear();
                for (const auto& s : split_list(value)) cfg.fractions.push_back(std::stod(s));
            } else if (key == "alphas" || key == "alpha") {
                cfg.alphas.clear();
                for (const auto& s : split_list(value)) cfg.alphas.push_back(std::stod(s));
            } else if (key == "trials") {
                cfg.trials = std::stoll(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "window") {
                cfg.window = std::stoll(value);
            } else {
                throw FormatError("study config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw FormatError("study config line " + std::to_string(lineno) + ": bad value '" +
                              value + "'");
        } catch (const InvalidArgument& e) {
            throw FormatError("study config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

std::size_t prefix_length(GridShape shape, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InvalidArgument("sample fraction must lie in (0, 1], got " + format_real(fraction));
    }
    const auto m = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(shape.cells())));
    return std::clamp<std::size_t>(m, 1, shape.cells());
}

std::vector<InterpolationResult> run_interp_study(const StudyConfig& config) {
    if (config.trials < 1) throw InvalidArgument("study needs at least one trial");
    if (config.shapes.empty() || config.families.empty() || config.fractions.empty() ||
        config.alphas.empty()) {
        throw InvalidArgument("study config has an empty axis");
    }
    for (double a : config.alphas) check_alpha(a);

    struct Prepared {
        Family family;
        double fraction;
        std::string scan;
        SampleSet samples;
        double dispersion;
    };

    std::vector<InterpolationResult> rows;
    for (const GridShape& shape : config.shapes) {
        std::vector<Prepared> prepared;
        for (Family family : config.families) {
            const auto order = make_order(family, shape, {.window = config.window});
            for (double fraction : config.fractions) {
                auto samples = prefix_samples(order, prefix_length(shape, fraction));
                const double eps = dispersion(samples);
                prepared.push_back({family, fraction, order.label(), std::move(samples), eps});
            }
        }
        for (double alpha : config.alphas) {
            for (std::int64_t trial = 0; trial < config.trials; ++trial) {
                const auto field = make_holder_field(
                    shape, alpha, derive_seed(config.seed, static_cast<std::uint64_t>(trial)));
                for (const Prepared& p : prepared) {
                    const auto approx = nearest_neighbor_interpolate(p.samples, field.values);
                    const auto err = error_norms(field.values, approx);
                    InterpolationResult row;
                    row.scan = p.scan;
                    row.family = p.family;
                    row.height = shape.height();
                    row.width = shape.width();
                    row.alpha = alpha;
                    row.fraction = p.fraction;
                    row.trial = trial;
                    row.m = p.samples.size();
                    row.dispersion = p.dispersion;
                    row.max_err = err.max_abs;
                    row.rms_err = err.rms;
                    row.bound = field.holder_constant * std::pow(p.dispersion, alpha);
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

void write_study_csv(std::ostream& out, const std::vector<InterpolationResult>& rows) {
    out << kStudyCsvHeader << '\n';
    for (const auto& r : rows) {
        out << family_name(r.family) << ',' << r.height << ',' << r.width << ','
            << format_real(r.alpha) << ',' << format_real(r.fraction) << ',' << r.trial << ','
            << r.m << ',' << format_real(r.dispersion) << ',' << format_real(r.max_err) << ','
            << format_real(r.rms_err) << ',' << format_real(r.bound) << '\n';
    }
}

std::int64_t count_max_error_wins(const std::vector<InterpolationResult>& rows, Family family,
                                  Family baseline, GridShape shape, double alpha, double fraction) {
    auto matches = [&](const InterpolationResult& r) {
        return r.height == shape.height() && r.width == shape.width() && r.alpha == alpha &&
               r.fraction == fraction;
    };
    std::vector<std::pair<std::int64_t, double>> ours, theirs;
    for (const auto& r : rows) {
        if (!matches(r)) continue;
        if (r.family == family) ours.emplace_back(r.trial, r.max_err);
        if (r.family == baseline) theirs.emplace_back(r.trial, r.max_err);
    }
    std::sort(ours.begin(), ours.end());
    std::sort(theirs.begin(), theirs.end());
    std::int64_t wins = 0;
    for (std::size_t i = 0, j = 0; i < ours.size() && j < theirs.size();) {
        if (ours[i].first < theirs[j].first) {
            ++i;
        } else if (theirs[j].first < ours[i].first) {
            ++j;
        } else {
            if (ours[i].second < theirs[j].second) ++wins;
            ++i;
            ++j;
        }
    }
    return wins;
}

}  // namespace sfcscan
