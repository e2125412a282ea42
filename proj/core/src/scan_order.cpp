#include "sfcscan/scan_order.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sfcscan/io.hpp"

namespace sfcscan {

namespace {

using Sequence = std::vector<std::uint32_t>;

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Classic index -> (x, y) conversion on an n x n grid, n a power of two.
// x runs along columns, y along rows, so the curve starts at (0,0) and
// leaves at x = n-1, y = 0.
Coord hilbert_d2xy(std::int64_t n, std::int64_t d) {
    std::int64_t x = 0;
    std::int64_t y = 0;
    for (std::int64_t s = 1; s < n; s *= 2) {
        const std::int64_t rx = 1 & (d / 2);
        const std::int64_t ry = 1 & (d ^ rx);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::swap(x, y);
        }
        x += s * rx;
        y += s * ry;
        d /= 4;
    }
    return {y, x};
}

int sign(std::int64_t v) { return (v > 0) - (v < 0); }

// Generalized Hilbert curve on an arbitrary rectangle: the region spanned by
// the major axis (ax, ay) and minor axis (bx, by) from (x, y) is split in half
// along the longer side, or into three pieces (a U shape) otherwise.
void gilbert(std::int64_t x, std::int64_t y, std::int64_t ax, std::int64_t ay, std::int64_t bx,
             std::int64_t by, std::int64_t width, Sequence& out) {
    const std::int64_t w = std::abs(ax + ay);
    const std::int64_t h = std::abs(bx + by);
    const std::int64_t dax = sign(ax), day = sign(ay);
    const std::int64_t dbx = sign(bx), dby = sign(by);

    auto emit = [&](std::int64_t px, std::int64_t py) {
        out.push_back(static_cast<std::uint32_t>(py * width + px));
    };

    if (h == 1) {
        for (std::int64_t i = 0; i < w; ++i, x += dax, y += day) emit(x, y);
        return;
    }
    if (w == 1) {
        for (std::int64_t i = 0; i < h; ++i, x += dbx, y += dby) emit(x, y);
        return;
    }

    std::int64_t ax2 = ax / 2, ay2 = ay / 2;
    std::int64_t bx2 = bx / 2, by2 = by / 2;
    const std::int64_t w2 = std::abs(ax2 + ay2);
    const std::int64_t h2 = std::abs(bx2 + by2);

    if (2 * w > 3 * h) {
        // Long and thin: two halves along the major axis. Keep the first
        // half even so both halves end on the correct side.
        if ((w2 % 2) && w > 2) {
            ax2 += dax;
            ay2 += day;
        }
        gilbert(x, y, ax2, ay2, bx, by, width, out);
        gilbert(x + ax2, y + ay2, ax - ax2, ay - ay2, bx, by, width, out);
    } else {
        if ((h2 % 2) && h > 2) {
            bx2 += dbx;
            by2 += dby;
        }
        gilbert(x, y, bx2, by2, ax2, ay2, width, out);
        gilbert(x + bx2, y + by2, ax, ay, bx - bx2, by - by2, width, out);
        gilbert(x + (ax - dax) + (bx2 - dbx), y + (ay - day) + (by2 - dby), -bx2, -by2,
                -(ax - ax2), -(ay - ay2), width, out);
    }
}

// Cell visited at position d of the order-k Peano curve on a 3^k square.
// Each base-9 digit picks one of nine blocks visited column by column in a
// serpentine; a block is mirrored top-to-bottom when its block column is odd
// and left-to-right when its block row is odd.
Coord peano_cell(std::int64_t d, int levels) {
    std::int64_t pow9 = 1;
    for (int i = 1; i < levels; ++i) pow9 *= 9;

    std::int64_t row = 0;
    std::int64_t col = 0;
    bool flip_rows = false;
    bool flip_cols = false;
    for (int level = 0; level < levels; ++level, pow9 /= 9) {
        const std::int64_t digit = (d / pow9) % 9;
        const std::int64_t c = digit / 3;
        const std::int64_t r = (c & 1) ? 2 - digit % 3 : digit % 3;
        row = row * 3 + (flip_rows ? 2 - r : r);
        col = col * 3 + (flip_cols ? 2 - c : c);
        flip_rows ^= (c & 1) != 0;
        flip_cols ^= (r & 1) != 0;
    }
    return {row, col};
}

ScanOrder finish(GridShape shape, Family family, ScanParams params, Sequence seq) {
    if (params.reversed) std::reverse(seq.begin(), seq.end());
    return ScanOrder::from_sequence(shape, family, params, std::move(seq));
}

}  // namespace

std::string_view family_name(Family family) noexcept {
    switch (family) {
        case Family::Raster: return "raster";
        case Family::Continuous: return "continuous";
        case Family::LocalWindow: return "local";
        case Family::Hilbert: return "hilbert";
        case Family::Peano: return "peano";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    for (Family f : kAllFamilies) {
        if (family_name(f) == name) return f;
    }
    throw InvalidArgument("unknown scan family '" + std::string(name) + "'");
}

ScanOrder ScanOrder::from_sequence(GridShape shape, Family family, ScanParams params,
                                   std::vector<std::uint32_t> sequence) {
    const std::size_t n = shape.cells();
    if (sequence.size() != n) {
        throw InvalidArgument("scan sequence has " + std::to_string(sequence.size()) +
                              " entries, grid " + shape.to_string() + " has " + std::to_string(n));
    }
    constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> forward(n, kUnset);
    for (std::size_t k = 0; k < n; ++k) {
        const auto off = sequence[k];
        if (off >= n || forward[off] != kUnset) {
            throw InvalidArgument("scan sequence is not a permutation (entry " + std::to_string(k) +
                                  ")");
        }
        forward[off] = static_cast<std::uint32_t>(k);
    }
    ScanOrder order(shape, family, params);
    order.forward_ = std::move(forward);
    order.inverse_ = std::move(sequence);
    return order;
}

std::string ScanOrder::label() const {
    std::string s = std::string(family_name(family_)) + "_" + shape_.to_string();
    if (family_ == Family::LocalWindow) s += "_w" + std::to_string(params_.window);
    if (params_.reversed) s += "_rev";
    return s;
}

ScanOrder raster_order(GridShape shape, bool reversed) {
    Sequence seq(shape.cells());
    for (std::size_t k = 0; k < seq.size(); ++k) seq[k] = static_cast<std::uint32_t>(k);
    return finish(shape, Family::Raster, {.reversed = reversed}, std::move(seq));
}

ScanOrder continuous_order(GridShape shape, bool reversed) {
    Sequence seq;
    seq.reserve(shape.cells());
    const auto w = shape.width();
    for (std::int64_t r = 0; r < shape.height(); ++r) {
        for (std::int64_t i = 0; i < w; ++i) {
            const auto c = (r % 2 == 0) ? i : w - 1 - i;
            seq.push_back(static_cast<std::uint32_t>(r * w + c));
        }
    }
    return finish(shape, Family::Continuous, {.reversed = reversed}, std::move(seq));
}

ScanOrder local_order(GridShape shape, std::int64_t window, bool reversed) {
    if (window < 1) throw InvalidArgument("local scan window must be >= 1");
    Sequence seq;
    seq.reserve(shape.cells());
    const auto h = shape.height();
    const auto w = shape.width();
    for (std::int64_t tr = 0; tr < h; tr += window) {
        for (std::int64_t tc = 0; tc < w; tc += window) {
            const auto r_end = std::min(tr + window, h);
            const auto c_end = std::min(tc + window, w);
            for (std::int64_t r = tr; r < r_end; ++r) {
                for (std::int64_t c = tc; c < c_end; ++c) {
                    seq.push_back(static_cast<std::uint32_t>(r * w + c));
                }
            }
        }
    }
    return finish(shape, Family::LocalWindow, {.window = window, .reversed = reversed},
                  std::move(seq));
}

ScanOrder hilbert_order(GridShape shape, bool reversed) {
    const auto h = shape.height();
    const auto w = shape.width();
    Sequence seq;
    seq.reserve(shape.cells());
    if (h == w && is_power_of_two(h)) {
        const auto n = static_cast<std::int64_t>(shape.cells());
        for (std::int64_t d = 0; d < n; ++d) {
            seq.push_back(static_cast<std::uint32_t>(shape.offset(hilbert_d2xy(h, d))));
        }
    } else if (w >= h) {
        gilbert(0, 0, w, 0, 0, h, w, seq);
    } else {
        gilbert(0, 0, 0, h, w, 0, w, seq);
    }
    return finish(shape, Family::Hilbert, {.reversed = reversed}, std::move(seq));
}

ScanOrder peano_order(GridShape shape, bool reversed) {
    int levels = 0;
    std::int64_t side = 1;
    while (side < shape.height() || side < shape.width()) {
        side *= 3;
        ++levels;
    }
    Sequence seq;
    seq.reserve(shape.cells());
    const auto total = side * side;
    for (std::int64_t d = 0; d < total; ++d) {
        const Coord c = peano_cell(d, levels);
        if (shape.contains(c)) seq.push_back(static_cast<std::uint32_t>(shape.offset(c)));
    }
    return finish(shape, Family::Peano, {.reversed = reversed}, std::move(seq));
}

ScanOrder make_order(Family family, GridShape shape, ScanParams params) {
    switch (family) {
        case Family::Raster: return raster_order(shape, params.reversed);
        case Family::Continuous: return continuous_order(shape, params.reversed);
        case Family::LocalWindow: return local_order(shape, params.window, params.reversed);
        case Family::Hilbert: return hilbert_order(shape, params.reversed);
        case Family::Peano: return peano_order(shape, params.reversed);
    }
    throw InvalidArgument("unknown scan family");
}

std::vector<double> apply_order(const ScanOrder& order, const ScalarField& field) {
    if (!(order.shape() == field.shape())) {
        throw ShapeMismatch("field " + field.shape().to_string() + " does not match order " +
                            order.shape().to_string());
    }
    const auto inv = order.inverse();
    std::vector<double> out(inv.size());
    for (std::size_t k = 0; k < inv.size(); ++k) out[k] = field[inv[k]];
    return out;
}

ScalarField invert_order(const ScanOrder& order, std::span<const double> sequence) {
    if (sequence.size() != order.size()) {
        throw ShapeMismatch("sequence length " + std::to_string(sequence.size()) +
                            " does not match " + std::to_string(order.size()) + " cells");
    }
    ScalarField field(order.shape());
    const auto inv = order.inverse();
    for (std::size_t k = 0; k < inv.size(); ++k) field[inv[k]] = sequence[k];
    return field;
}

void write_order(std::ostream& out, const ScanOrder& order) {
    out << family_name(order.family()) << ' ' << order.shape().height() << ' '
        << order.shape().width();
    if (order.family() == Family::LocalWindow) out << " window=" << order.params().window;
    if (order.params().reversed) out << " reversed=1";
    out << '\n';
    const auto inv = order.inverse();
    std::string line;
    for (std::size_t k = 0; k < inv.size(); ++k) {
        const Coord c = order.shape().coord(inv[k]);
        line.clear();
        line += std::to_string(k);
        line += ' ';
        line += std::to_string(c.row);
        line += ' ';
        line += std::to_string(c.col);
        line += '\n';
        out << line;
    }
}

ScanOrder read_order(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("scan order: missing header");
    std::istringstream hs(header);
    std::string family_text;
    std::int64_t h = 0, w = 0;
    if (!(hs >> family_text >> h >> w)) throw FormatError("scan order: malformed header");
    const Family family = parse_family(family_text);
    ScanParams params;
    std::string kv;
    while (hs >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw FormatError("scan order: bad parameter '" + kv + "'");
        const auto key = kv.substr(0, eq);
        const auto value = kv.substr(eq + 1);
        try {
            if (key == "window") {
                params.window = std::stoll(value);
            } else if (key == "reversed") {
                params.reversed = std::stoi(value) != 0;
            } else {
                throw FormatError("scan order: unknown parameter '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw FormatError("scan order: bad value in '" + kv + "'");
        }
    }
    const GridShape shape(h, w);
    Sequence seq(shape.cells());
    for (std::size_t k = 0; k < seq.size(); ++k) {
        std::int64_t idx = 0, r = 0, c = 0;
        if (!(in >> idx >> r >> c)) {
            throw TruncatedError("scan order: expected " + std::to_string(seq.size()) +
                                 " cell lines, got " + std::to_string(k));
        }
        if (idx != static_cast<std::int64_t>(k) || !shape.contains({r, c})) {
            throw FormatError("scan order: bad cell line at index " + std::to_string(k));
        }
        seq[k] = static_cast<std::uint32_t>(shape.offset({r, c}));
    }
    try {
        return ScanOrder::from_sequence(shape, family, params, std::move(seq));
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("scan order: ") + e.what());
    }
}

void save_order(const std::string& path, const ScanOrder& order) {
    std::ostringstream os;
    write_order(os, order);
    write_file_atomic(path, os.str());
}

ScanOrder load_order(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_order(in);
}

}  // namespace sfcscan
