#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sfcscan/io.hpp"
#include "sfcscan/render.hpp"

using namespace sfcscan;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sfcscan_test_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("pgm decode") {
    const std::string one = std::string("P5\n1 1\n255\n") + static_cast<char>(128);
    const auto f = decode_pgm(one);
    CHECK(f.shape() == GridShape(1, 1));
    CHECK(f[0] == 128.0 / 255.0);

    // Comments and 16-bit samples.
    const std::string wide = std::string("P5 # c\n2 1\n# more\n1000\n") + '\x01' + '\xF4' +
                             '\x03' + '\xE8';
    const auto g = decode_pgm(wide);
    CHECK(g.shape() == GridShape(1, 2));
    CHECK(g[0] == 0.5);
    CHECK(g[1] == 1.0);
}

TEST_CASE("pgm errors are classified") {
    CHECK_THROWS_AS(decode_pgm("P2\n1 1\n255\n0"), FormatError);
    CHECK_THROWS_AS(decode_pgm("P5\n1 x\n255\n0"), FormatError);
    CHECK_THROWS_AS(decode_pgm("P5\n1 1\n0\n0"), FormatError);
    CHECK_THROWS_AS(decode_pgm("P5\n1 1\n70000\n0"), FormatError);
    CHECK_THROWS_AS(decode_pgm("P5\n2 2\n255\n"), TruncatedError);
    CHECK_THROWS_AS(decode_pgm("P5\n2 2\n255\nabc"), TruncatedError);
    try {
        decode_pgm("P5\n2 2\n255\nab");
        FAIL("expected an exception");
    } catch (const TruncatedError&) {
    } catch (const FormatError&) {
        FAIL("truncation reported as a malformed header");
    }
}

TEST_CASE("pgm byte round trip") {
    std::string bytes = "P5\n7 3\n255\n";
    for (int i = 0; i < 21; ++i) bytes += static_cast<char>(i * 12);
    CHECK(encode_pgm(decode_pgm(bytes)) == bytes);

    const auto path = scratch("rt.pgm").string();
    write_pgm(decode_pgm(bytes), path);
    CHECK(read_file(path) == bytes);
    CHECK(read_pgm(path) == decode_pgm(bytes));
    CHECK_FALSE(fs::exists(path + ".tmp"));

    CHECK(encode_pgm(ScalarField({1, 2}, {-3.0, 7.0})) == std::string("P5\n2 1\n255\n") + '\0' + '\xFF');
    CHECK_THROWS_AS(read_pgm(scratch("missing.pgm").string()), IoError);
}

TEST_CASE("ppm encoding") {
    RgbImage img(2, 1);
    img.set(1, 0, 0x102030);
    img.set(5, 5, 0);  // ignored
    CHECK(encode_ppm(img) == std::string("P6\n2 1\n255\n") + "\xFF\xFF\xFF" + "\x10\x20\x30");
}

TEST_CASE("svg rendering") {
    const auto svg = render_svg(hilbert_order({2, 2}), {});
    CHECK(svg.find("points=\"8,8 8,24 24,24 24,8\"") != std::string::npos);
    CHECK(svg.find("<rect") != std::string::npos);
    CHECK(svg == render_svg(hilbert_order({2, 2}), {}));

    const auto line = render_svg(continuous_order({1, 4}), {.cell_size = 10});
    CHECK(line.find("points=\"5,5 15,5 25,5 35,5\"") != std::string::npos);

    const auto coloured = render_svg(raster_order({2, 2}), {.color = 0xABCDEF});
    CHECK(coloured.find("#abcdef") != std::string::npos);
}

TEST_CASE("ppm rendering and file output") {
    const RenderSpec spec{.format = RenderFormat::Ppm, .cell_size = 4, .stroke = 1};
    const auto ppm = render_ppm(peano_order({3, 3}), spec);
    CHECK(ppm.rfind("P6\n12 12\n255\n", 0) == 0);
    CHECK(ppm.size() == std::string("P6\n12 12\n255\n").size() + 12 * 12 * 3);
    CHECK(ppm == render_ppm(peano_order({3, 3}), spec));

    const auto path = scratch("curve.ppm").string();
    render_curve(peano_order({3, 3}), spec, path);
    CHECK(read_file(path) == ppm);
}
