#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sfcscan/field.hpp"

namespace sfcscan {

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so a failed write never leaves a partial file behind.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

/// Decodes a binary P5 image (maxval 1..65535) into values in [0, 1].
/// Throws FormatError for a malformed header or unsupported maxval and
/// TruncatedError when the pixel payload is short.
ScalarField decode_pgm(std::string_view bytes);

/// Encodes as 8-bit P5; values are clamped to [0, 1] and rounded.
std::string encode_pgm(const ScalarField& field);

ScalarField read_pgm(const std::string& path);
void write_pgm(const ScalarField& field, const std::string& path);

/// 8-bit RGB raster, row-major, for P6 output.
struct RgbImage {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<std::uint8_t> pixels;  // 3 bytes per pixel

    RgbImage(std::int64_t w, std::int64_t h, std::uint8_t fill = 255)
        : width(w), height(h), pixels(static_cast<std::size_t>(w * h * 3), fill) {}

    void set(std::int64_t x, std::int64_t y, std::uint32_t rgb) {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        auto* p = &pixels[static_cast<std::size_t>((y * width + x) * 3)];
        p[0] = static_cast<std::uint8_t>(rgb >> 16);
        p[1] = static_cast<std::uint8_t>(rgb >> 8);
        p[2] = static_cast<std::uint8_t>(rgb);
    }
};

std::string encode_ppm(const RgbImage& image);

}  // namespace sfcscan
