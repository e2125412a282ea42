#include "sfcscan/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sfcscan {

void write_file_atomic(const std::string& path, std::string_view contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

// Netpbm header tokenizer: whitespace-separated, '#' starts a comment line.
class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

    std::int64_t next_int(const char* what) {
        skip_space_and_comments();
        std::int64_t v = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > (1LL << 40)) throw FormatError(std::string("PGM: ") + what + " too large");
            ++pos_;
            ++digits;
        }
        if (digits == 0) throw FormatError(std::string("PGM: malformed header, expected ") + what);
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void end_of_header() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw FormatError("PGM: malformed header, missing separator before raster");
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char ch = bytes_[pos_];
            if (ch == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 2;
};

}  // namespace

ScalarField decode_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw FormatError("PGM: malformed header, expected magic 'P5'");
    }
    HeaderReader header(bytes);
    const auto width = header.next_int("width");
    const auto height = header.next_int("height");
    const auto maxval = header.next_int("maxval");
    header.end_of_header();
    if (width < 1 || height < 1) throw FormatError("PGM: malformed header, zero dimension");
    if (maxval < 1 || maxval > 65535) {
        throw FormatError("PGM: unsupported maxval " + std::to_string(maxval));
    }

    const GridShape shape(height, width);
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    const std::size_t need = shape.cells() * bytes_per;
    const std::size_t have = bytes.size() - header.pos();
    if (have < need) {
        throw TruncatedError("PGM: payload truncated, need " + std::to_string(need) +
                             " bytes, have " + std::to_string(have));
    }

    std::vector<double> values(shape.cells());
    const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + header.pos());
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint32_t v = bytes_per == 1 ? raster[i] : (raster[2 * i] << 8) | raster[2 * i + 1];
        if (v > static_cast<std::uint32_t>(maxval)) {
            throw FormatError("PGM: sample exceeds maxval at pixel " + std::to_string(i));
        }
        values[i] = v * scale;
    }
    return ScalarField(shape, std::move(values));
}

std::string encode_pgm(const ScalarField& field) {
    std::string out = "P5\n" + std::to_string(field.shape().width()) + " " +
                      std::to_string(field.shape().height()) + "\n255\n";
    out.reserve(out.size() + field.shape().cells());
    for (double v : field.values()) {
        const double clamped = std::clamp(v, 0.0, 1.0);
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(clamped * 255.0))));
    }
    return out;
}

ScalarField read_pgm(const std::string& path) { return decode_pgm(read_file(path)); }

void write_pgm(const ScalarField& field, const std::string& path) {
    write_file_atomic(path, encode_pgm(field));
}

std::string encode_ppm(const RgbImage& image) {
    std::string out =
        "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
    return out;
}

}  // namespace sfcscan
