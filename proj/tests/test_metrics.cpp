#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sfcscan/metrics.hpp"
#include "sfcscan/random.hpp"

using namespace sfcscan;

namespace {

SampleSet random_samples(GridShape shape, std::size_t count, Rng& rng) {
    std::vector<std::uint32_t> cells(shape.cells());
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<std::uint32_t>(i);
    // Partial Fisher-Yates.
    std::vector<Coord> pts;
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + rng.below(cells.size() - i);
        std::swap(cells[i], cells[j]);
        pts.push_back(shape.coord(cells[i]));
    }
    return SampleSet(shape, std::move(pts));
}

}  // namespace

TEST_CASE("sample set validation") {
    CHECK_THROWS_AS(SampleSet({3, 3}, {{0, 0}, {3, 0}}), InvalidArgument);
    CHECK_THROWS_AS(SampleSet({3, 3}, {{1, 1}, {1, 1}}), InvalidArgument);
    CHECK_THROWS_AS(prefix_samples(raster_order({2, 2}), 0), InvalidArgument);
    CHECK_THROWS_AS(prefix_samples(raster_order({2, 2}), 5), InvalidArgument);
    CHECK_THROWS_AS(strided_samples(raster_order({2, 2}), 0), InvalidArgument);
    CHECK(strided_samples(raster_order({4, 4}), 5).points() ==
          std::vector<Coord>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    CHECK(prefix_samples(hilbert_order({2, 2}), 2).points() == std::vector<Coord>{{0, 0}, {1, 0}});
    CHECK(prefix_samples(raster_order({4, 4}), 4).points() ==
          std::vector<Coord>{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
    CHECK(strided_samples(raster_order({4, 4}), 4).points() ==
          std::vector<Coord>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    CHECK(strided_samples(peano_order({3, 3}), 1).size() == 9);
    // First four cells of the 4x4 Hilbert curve fill one 2x2 quadrant.
    const auto quadrant = prefix_samples(hilbert_order({4, 4}), 4);
    for (const Coord& c : quadrant.points()) {
        CHECK(c.row < 2);
        CHECK(c.col < 2);
    }
}

TEST_CASE("dispersion small examples") {
    const SampleSet centre({3, 3}, {{1, 1}});
    CHECK(dispersion(centre) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(dispersion(centre, Norm::Manhattan) == 2.0);
    CHECK(dispersion(centre, Norm::Chebyshev) == 1.0);

    CHECK(dispersion(prefix_samples(raster_order({5, 7}), 35)) == 0.0);

    const SampleSet corner({4, 4}, {{0, 0}});
    CHECK(dispersion(corner) == doctest::Approx(std::sqrt(18.0)));

    CHECK_THROWS_AS(dispersion(SampleSet({2, 2}, {})), InvalidArgument);
}

TEST_CASE("accelerated dispersion agrees with brute force") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const GridShape shape(1 + static_cast<std::int64_t>(rng.below(30)),
                              1 + static_cast<std::int64_t>(rng.below(30)));
        const auto count = 1 + rng.below(std::min<std::size_t>(shape.cells(), 20));
        const auto s = random_samples(shape, count, rng);
        CAPTURE(shape.to_string());
        CHECK(std::abs(dispersion(s) - dispersion_brute_force(s)) <= 1e-9);
        CHECK(dispersion(s, Norm::Manhattan) == dispersion_brute_force(s, Norm::Manhattan));
        CHECK(dispersion(s, Norm::Chebyshev) == dispersion_brute_force(s, Norm::Chebyshev));
    }
}

TEST_CASE("squared distance transform") {
    const SampleSet s({2, 3}, {{0, 0}});
    CHECK(squared_distance_transform(s) == std::vector<std::int64_t>{0, 1, 4, 1, 2, 5});
}

TEST_CASE("prefix dispersion is non-increasing in m") {
    for (Family f : kAllFamilies) {
        const auto o = make_order(f, {16, 16});
        double prev = INFINITY;
        for (std::size_t m = 1; m <= o.size(); m += 7) {
            const double d = dispersion(prefix_samples(o, m));
            CHECK(d <= prev);
            prev = d;
        }
    }
}

TEST_CASE("known prefix dispersions") {
    const auto hil = hilbert_order({64, 64});
    const auto ras = raster_order({64, 64});
    CHECK(dispersion_brute_force(prefix_samples(hil, 1024)) ==
          doctest::Approx(std::sqrt(2048.0)));  // 45.2548...
    CHECK(dispersion_brute_force(prefix_samples(ras, 1024)) == 48.0);
    CHECK(dispersion_brute_force(prefix_samples(hil, 2048)) == 32.0);
    CHECK(dispersion(strided_samples(hil, 16)) == 4.0);
    CHECK(dispersion(strided_samples(ras, 16)) == 15.0);
}

TEST_CASE("jump statistics") {
    const auto r = jump_statistics(raster_order({4, 4}));
    CHECK(r.max_jump == 4);
    CHECK(r.jumps_gt1 == 3);
    CHECK(r.mean_jump == doctest::Approx((12.0 + 3 * 4.0) / 15.0));

    const auto h = jump_statistics(hilbert_order({8, 8}));
    CHECK(h.max_jump == 1);
    CHECK(h.jumps_gt1 == 0);
    CHECK(h.mean_jump == 1.0);

    CHECK_THROWS_AS(jump_statistics(raster_order({1, 1})), InvalidArgument);
}

TEST_CASE("box counting dimension") {
    const auto full = box_counting_dimension(prefix_samples(raster_order({256, 256}), 65536),
                                             kDefaultBoxScales);
    CHECK(std::abs(full.slope - 2.0) <= 1e-9);
    CHECK(full.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(full.counts == std::vector<std::int64_t>{16384, 4096, 1024, 256, 64});

    const auto row = box_counting_dimension(prefix_samples(raster_order({1, 256}), 256),
                                            kDefaultBoxScales);
    CHECK(std::abs(row.slope - 1.0) <= 1e-9);

    const auto quarter = box_counting_dimension(
        prefix_samples(hilbert_order({256, 256}), 65536 / 4), kDefaultBoxScales);
    CHECK(quarter.slope >= 1.9);
    CHECK(quarter.slope <= 2.0 + 1e-12);
    CHECK(quarter.r2 >= 0.99);

    const auto sixteenth = box_counting_dimension(prefix_samples(hilbert_order({256, 256}), 4096),
                                                  kDefaultBoxScales);
    CHECK(sixteenth.slope >= 1.9);
    CHECK(sixteenth.slope <= 2.0 + 1e-12);

    const SampleSet single({64, 64}, {{5, 5}});
    CHECK_THROWS_AS(box_counting_dimension(single, kDefaultBoxScales), InvalidArgument);
    CHECK_THROWS_AS(box_counting_dimension(single, {2, 4, 4}), InvalidArgument);
    CHECK_THROWS_AS(box_counting_dimension(single, {0, 2, 4}), InvalidArgument);

    CHECK(default_box_scales({9, 20}) == std::vector<std::int64_t>{2, 4, 8});
    CHECK(default_box_scales({100, 100}) == kDefaultBoxScales);
}

TEST_CASE("metric report and csv") {
    const auto o = hilbert_order({8, 8});
    const auto r = make_metric_report(o, 64, default_box_scales(o.shape()));
    CHECK(r.scan == o.label());
    CHECK(r.m == 64);
    CHECK(r.dispersion == 0.0);
    CHECK(r.max_jump == 1);
    CHECK(r.boxdim_slope == doctest::Approx(2.0));

    const auto tiny = make_metric_report(o, 1, default_box_scales(o.shape()));
    CHECK(std::isnan(tiny.boxdim_slope));

    std::ostringstream os;
    write_metric_csv_row(os, r);
    CHECK(os.str() == "hilbert_8x8,hilbert,8,8,64,0,1,1,0,2,1\n");

    CHECK_THROWS_AS(
        make_metric_report(o, SampleSet({4, 4}, {{0, 0}}), default_box_scales(o.shape())),
        ShapeMismatch);

    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(std::nan("")) == "nan");
    CHECK(parse_norm("manhattan") == Norm::Manhattan);
    CHECK_THROWS_AS(parse_norm("l7"), InvalidArgument);
}
