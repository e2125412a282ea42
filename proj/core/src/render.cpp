#include "sfcscan/render.hpp"

#include <cstdio>
#include <cstdlib>

#include "sfcscan/io.hpp"

namespace sfcscan {

namespace {

void check_spec(const RenderSpec& spec) {
    if (spec.cell_size < 1 || spec.stroke < 1) {
        throw InvalidArgument("render sizes must be positive");
    }
}

std::uint32_t pick_color(const ScanOrder& order, const RenderSpec& spec) {
    return spec.color != 0 ? spec.color : default_color(order.family());
}

std::string hex_color(std::uint32_t rgb) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%06x", rgb & 0xffffffu);
    return buf;
}

// Bresenham with a square brush of side `thickness`.
void draw_line(RgbImage& img, std::int64_t x0, std::int64_t y0, std::int64_t x1, std::int64_t y1,
               int thickness, std::uint32_t rgb) {
    const std::int64_t dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const std::int64_t dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    std::int64_t err = dx + dy;
    const int lo = -(thickness - 1) / 2;
    const int hi = thickness / 2;
    for (;;) {
        for (int oy = lo; oy <= hi; ++oy) {
            for (int ox = lo; ox <= hi; ++ox) img.set(x0 + ox, y0 + oy, rgb);
        }
        if (x0 == x1 && y0 == y1) break;
        const std::int64_t e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

std::uint32_t default_color(Family family) noexcept {
    switch (family) {
        case Family::Raster: return 0x7f7f7f;
        case Family::Continuous: return 0x2ca02c;
        case Family::LocalWindow: return 0xff7f0e;
        case Family::Hilbert: return 0x1f77b4;
        case Family::Peano: return 0xd62728;
    }
    return 0x000000;
}

std::string render_svg(const ScanOrder& order, const RenderSpec& spec) {
    check_spec(spec);
    const auto cs = spec.cell_size;
    const auto w = order.shape().width() * cs;
    const auto h = order.shape().height() * cs;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " +
           std::to_string(w) + " " + std::to_string(h) + "\">\n";
    out += "<title>" + order.label() + "</title>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(w) + "\" height=\"" +
           std::to_string(h) + "\" fill=\"#ffffff\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    out += "<polyline fill=\"none\" stroke=\"" + hex_color(pick_color(order, spec)) +
           "\" stroke-width=\"" + std::to_string(spec.stroke) +
           "\" stroke-linejoin=\"round\" stroke-linecap=\"round\" points=\"";
    // Cell centres sit on half-cell offsets; doubling keeps everything integral.
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Coord c = order.coord_at(k);
        const auto x2 = (2 * c.col + 1) * cs;
        const auto y2 = (2 * c.row + 1) * cs;
        if (k) out += ' ';
        out += std::to_string(x2 / 2);
        if (x2 % 2) out += ".5";
        out += ',';
        out += std::to_string(y2 / 2);
        if (y2 % 2) out += ".5";
    }
    out += "\"/>\n</svg>\n";
    return out;
}

std::string render_ppm(const ScanOrder& order, const RenderSpec& spec) {
    check_spec(spec);
    const auto cs = spec.cell_size;
    RgbImage img(order.shape().width() * cs, order.shape().height() * cs);
    const auto rgb = pick_color(order, spec);
    auto centre = [&](Coord c) { return std::pair{c.col * cs + cs / 2, c.row * cs + cs / 2}; };
    auto [px, py] = centre(order.coord_at(0));
    draw_line(img, px, py, px, py, spec.stroke, rgb);
    for (std::size_t k = 1; k < order.size(); ++k) {
        auto [x, y] = centre(order.coord_at(k));
        draw_line(img, px, py, x, y, spec.stroke, rgb);
        px = x;
        py = y;
    }
    return encode_ppm(img);
}

void render_curve(const ScanOrder& order, const RenderSpec& spec, const std::string& path) {
    write_file_atomic(path, spec.format == RenderFormat::Svg ? render_svg(order, spec)
                                                             : render_ppm(order, spec));
}

}  // namespace sfcscan
