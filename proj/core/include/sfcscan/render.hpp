#pragma once

#include <cstdint>
#include <string>

#include "sfcscan/scan_order.hpp"

namespace sfcscan {

enum class RenderFormat { Svg, Ppm };

struct RenderSpec {
    RenderFormat format = RenderFormat::Svg;
    /// Pixels per grid cell.
    int cell_size = 16;
    /// Polyline stroke width in pixels (SVG) or line thickness (PPM).
    int stroke = 2;
    /// 0xRRGGBB; 0 picks the family default.
    std::uint32_t color = 0;
};

std::uint32_t default_color(Family family) noexcept;

/// Polyline through the cell centres in index order, on a white background
/// with the grid outline. Output bytes depend only on the inputs.
std::string render_svg(const ScanOrder& order, const RenderSpec& spec);
std::string render_ppm(const ScanOrder& order, const RenderSpec& spec);

void render_curve(const ScanOrder& order, const RenderSpec& spec, const std::string& path);

}  // namespace sfcscan
