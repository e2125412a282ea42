#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sfcscan/random.hpp"
#include "sfcscan/ssm.hpp"

using namespace sfcscan;

namespace {

ContinuousSSM scalar(double a, double b, double c = 1.0, double d = 0.0) {
    return ContinuousSSM::diagonal(Eigen::VectorXd::Constant(1, a), Eigen::VectorXd::Constant(1, b),
                                   Eigen::RowVectorXd::Constant(1, c), d);
}

DiscreteSSM scalar_discrete(double abar, double bbar, double c, double d) {
    DiscreteSSM s;
    s.Abar = Eigen::MatrixXd::Constant(1, 1, abar);
    s.Bbar = Eigen::VectorXd::Constant(1, bbar);
    s.C = Eigen::RowVectorXd::Constant(1, c);
    s.D = d;
    s.delta = 1.0;
    return s;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("zoh scalar examples") {
    const auto d1 = discretize_zoh(scalar(1.0, 1.0), std::numbers::ln2);
    CHECK(d1.Abar(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d1.Bbar(0) == doctest::Approx(1.0).epsilon(1e-15));

    const auto d0 = discretize_zoh(scalar(0.0, 1.0), 0.5);
    CHECK(d0.Abar(0, 0) == 1.0);
    CHECK(d0.Bbar(0) == 0.5);

    const auto dd = discretize_zoh(
        ContinuousSSM::diagonal(Eigen::Vector2d(-1, -2), Eigen::Vector2d(1, 1),
                                Eigen::RowVector2d(1, 1), 0),
        0.1);
    CHECK(std::abs(dd.Abar(0, 0) - std::exp(-0.1)) <= 1e-15);
    CHECK(std::abs(dd.Abar(1, 1) - std::exp(-0.2)) <= 1e-15);
    CHECK(dd.Abar(0, 1) == 0.0);
    CHECK(std::abs(dd.Bbar(1) - (1 - std::exp(-0.2)) / 2) <= 1e-15);
}

TEST_CASE("zoh against closed-form scalar integral") {
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(-5, 5);
        const double delta = 1.0 - rng.uniform();  // (0, 1]
        const double b = rng.normal();
        const auto d = discretize_zoh(scalar(a, b), delta);
        CHECK(std::abs(d.Abar(0, 0) - std::exp(a * delta)) <= 1e-12);
        const double integral = std::expm1(a * delta) / a * b;
        CHECK(std::abs(d.Bbar(0) - integral) <= 1e-10);
    }
}

TEST_CASE("series fallback is continuous near zero") {
    for (double x : {1e-6, -1e-6, 9.99e-7, 1e-7, -3e-9}) {
        CHECK(std::abs(detail::input_gain_series(x) - detail::input_gain_closed(x)) <= 1e-8);
    }
    const double delta = 0.25;
    const double gain_at_zero = discretize_zoh(scalar(0.0, 1.0), delta).Bbar(0);
    CHECK(gain_at_zero == delta);
    // Either side of the switch, the gain tracks the exact integral.
    for (double x : {0.999e-6, 1.001e-6, -0.999e-6, -1.001e-6, 1e-9}) {
        const double a = x / delta;
        const double exact = std::expm1(x) / a;
        CHECK(std::abs(discretize_zoh(scalar(a, 1.0), delta).Bbar(0) - exact) <= 1e-15);
        CHECK(std::abs(discretize_zoh(scalar(a, 1.0), delta).Bbar(0) - gain_at_zero) <=
              std::abs(a) * delta * delta);
    }
}

TEST_CASE("dense zoh matches the diagonal path under a similarity transform") {
    // A = Q diag(a) Q^T with Q a rotation.
    const double t = 0.7;
    Eigen::Matrix2d q;
    q << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    const Eigen::Vector2d a(-0.5, -1.5);
    ContinuousSSM dense;
    dense.A = q * a.asDiagonal() * q.transpose();
    dense.B = Eigen::Vector2d(1.0, -2.0);
    dense.C = Eigen::RowVector2d(0.5, 0.25);
    const auto dd = discretize_zoh(dense, 0.3);

    const Eigen::Vector2d bq = q.transpose() * dense.B;
    const auto diag = discretize_zoh(
        ContinuousSSM::diagonal(a, bq, Eigen::RowVector2d(1, 1), 0), 0.3);
    const Eigen::MatrixXd abar = q * diag.Abar * q.transpose();
    const Eigen::VectorXd bbar = q * diag.Bbar;
    CHECK((dd.Abar - abar).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((dd.Bbar - bbar).cwiseAbs().maxCoeff() <= 1e-13);

    // Singular dense A (nilpotent): exp(dA) = I + dA, gain = d(I + dA/2).
    ContinuousSSM nil;
    nil.A = Eigen::Matrix2d{{0, 1}, {0, 0}};
    nil.B = Eigen::Vector2d(0, 1);
    nil.C = Eigen::RowVector2d(1, 0);
    const auto dn = discretize_zoh(nil, 0.5);
    CHECK(std::abs(dn.Abar(0, 1) - 0.5) <= 1e-15);
    CHECK(std::abs(dn.Bbar(0) - 0.125) <= 1e-14);
    CHECK(std::abs(dn.Bbar(1) - 0.5) <= 1e-14);

    nil.A *= 50.0;  // large but still singular
    const auto dl = discretize_zoh(nil, 0.5);
    CHECK(std::abs(dl.Bbar(0) - 6.25) <= 1e-12);  // 0.5 * (25 / 2)
}

TEST_CASE("zoh argument validation") {
    CHECK_THROWS_AS(discretize_zoh(scalar(-1, 1), 0.0), InvalidArgument);
    CHECK_THROWS_AS(discretize_zoh(scalar(-1, 1), -0.1), InvalidArgument);
    CHECK_THROWS_AS(discretize_zoh(scalar(-1, 1), NAN), InvalidArgument);
    ContinuousSSM bad = scalar(-1, 1);
    bad.B = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(discretize_zoh(bad, 0.1), InvalidArgument);
}

TEST_CASE("scan recurrence examples") {
    const auto s = scalar_discrete(0.5, 1.0, 1.0, 0.0);
    CHECK(scan_recurrence(s, std::vector<double>{1, 0, 0}) == std::vector<double>{1, 0.5, 0.25});
    CHECK(scan_recurrence(s, std::vector<double>(5, 0.0)) == std::vector<double>(5, 0.0));
    CHECK(scan_recurrence(scalar_discrete(0, 0, 1, 3), std::vector<double>{1, 2}) ==
          std::vector<double>{3, 6});
    CHECK(scan_recurrence(s, std::vector<double>{}).empty());
    CHECK_THROWS_AS(scan_recurrence(s, std::vector<double>{1, INFINITY}), InvalidArgument);
}

TEST_CASE("scan recurrence equals explicit convolution") {
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = static_cast<Eigen::Index>(1 + rng.below(8));
        const auto len = 1 + rng.below(64);
        auto base = ContinuousSSM::random_diagonal(m, derive_seed(123, trial));
        base.D = rng.normal();
        if (trial % 2) {
            // Dense, stable-ish: diagonal plus a small coupling.
            for (Eigen::Index i = 0; i < m; ++i)
                for (Eigen::Index j = 0; j < m; ++j)
                    if (i != j) base.A(i, j) = 0.1 * rng.normal();
        }
        const auto d = discretize_zoh(base, rng.uniform(0.01, 1.0));
        std::vector<double> x(len);
        for (double& v : x) v = rng.normal();
        CHECK(max_diff(scan_recurrence(d, x), oracle::convolution(d, x)) <= 1e-9);
    }
}

TEST_CASE("selective scan equals the naive loop") {
    Rng rng(321);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = static_cast<Eigen::Index>(1 + rng.below(8));
        const auto d = static_cast<Eigen::Index>(1 + rng.below(4));
        auto base = ContinuousSSM::random_diagonal(m, derive_seed(321, trial));
        base.D = rng.normal();
        auto p = SelectiveParams::random(base, d, derive_seed(999, trial));
        p.channel = static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(d)));
        const auto len = 1 + static_cast<Eigen::Index>(rng.below(64));
        Eigen::MatrixXd in(len, d);
        for (Eigen::Index i = 0; i < len; ++i)
            for (Eigen::Index j = 0; j < d; ++j) in(i, j) = rng.normal();
        CHECK(max_diff(selective_scan(p, base, in), oracle::selective_naive(p, base, in)) <= 1e-10);
    }
}

TEST_CASE("constant selective parameters collapse to the static system") {
    auto base = ContinuousSSM::random_diagonal(4, 5);
    base.D = 0.3;
    const auto p = SelectiveParams::constant(base, 0.2);
    CHECK(p.step(Eigen::VectorXd::Constant(1, 3.0)) == doctest::Approx(0.2).epsilon(1e-14));
    Rng rng(8);
    std::vector<double> x(40);
    for (double& v : x) v = rng.normal();
    const Eigen::MatrixXd in = Eigen::Map<const Eigen::MatrixXd>(x.data(), 40, 1);
    CHECK(max_diff(selective_scan(p, base, in), scan_recurrence(discretize_zoh(base, 0.2), x)) <=
          1e-12);

    base.D = 0.0;
    const auto pr = SelectiveParams::random(base, 3, 4);
    const auto zeros = selective_scan(pr, base, Eigen::MatrixXd::Zero(10, 3));
    CHECK(zeros == std::vector<double>(10, 0.0));
}

TEST_CASE("softplus") {
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
    CHECK(softplus(800.0) == 800.0);
    CHECK(softplus(-800.0) >= 0.0);
    for (double y : {1e-8, 0.1, 1.0, 30.0, 100.0}) {
        CHECK(softplus(softplus_inverse(y)) == doctest::Approx(y).epsilon(1e-12));
    }
    CHECK_THROWS_AS(softplus_inverse(0.0), InvalidArgument);
}

TEST_CASE("stable diagonal systems stay bounded over long sequences") {
    const auto base = ContinuousSSM::random_diagonal(8, 17);
    const auto d = discretize_zoh(base, kDefaultDelta);
    std::vector<double> x(10000, 1.0);
    const auto y = scan_recurrence(d, x);
    // Steady state of a unit step: C (I - Abar)^-1 Bbar.
    const Eigen::VectorXd steady = (Eigen::MatrixXd::Identity(8, 8) - d.Abar).lu().solve(d.Bbar);
    const double limit = d.C.dot(steady);
    CHECK(std::abs(y.back() - limit) <= 1e-9 * std::max(1.0, std::abs(limit)));
    for (double v : y) REQUIRE(std::isfinite(v));
}

TEST_CASE("scan_over_grid") {
    Rng rng(3);
    std::vector<double> vals(12 * 9);
    for (double& v : vals) v = rng.uniform();
    const ScalarField f({12, 9}, vals);

    // Pure feedthrough ignores the order.
    const auto pass = ContinuousSSM::diagonal(Eigen::VectorXd::Constant(2, -1.0),
                                              Eigen::VectorXd::Ones(2), Eigen::RowVectorXd::Zero(2),
                                              1.0);
    for (Family fam : kAllFamilies) {
        CHECK(scan_over_grid(make_order(fam, f.shape()), f, SelectiveParams::constant(pass, 0.1),
                             pass) == f);
    }

    // With state the result depends on the order.
    const auto base = ContinuousSSM::random_diagonal(4, 1);
    const auto p = SelectiveParams::random(base, 1, 2);
    const auto r = scan_over_grid(raster_order(f.shape()), f, p, base);
    const auto h = scan_over_grid(hilbert_order(f.shape()), f, p, base);
    CHECK(r.shape() == f.shape());
    CHECK_FALSE(r == h);

    // First visited cell only sees its own input.
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, f.at({0, 0}));
    const double dt = p.step(x0);
    double expect = base.D * x0(0);
    for (Eigen::Index i = 0; i < 4; ++i) {
        const double a = base.A(i, i);
        const double b = p.W_B(i, 0) * x0(0) + p.b_B(i);
        const double c = p.W_C(i, 0) * x0(0) + p.b_C(i);
        expect += c * std::expm1(a * dt) / a * b * x0(0);
    }
    CHECK(r.at({0, 0}) == doctest::Approx(expect).epsilon(1e-12));

    const auto p2 = SelectiveParams::random(base, 2, 2);
    CHECK_THROWS_AS(scan_over_grid(raster_order(f.shape()), f, p2, base), InvalidArgument);
}

TEST_CASE("ssm config round trip") {
    SsmConfig cfg;
    cfg.base = ContinuousSSM::random_diagonal(3, 11);
    cfg.base.D = 0.25;
    cfg.delta = 0.05;
    cfg.selective = SelectiveParams::random(cfg.base, 1, 12);
    const auto text = dump_ssm_config(cfg);
    const auto back = parse_ssm_config(text);
    CHECK(back.base.A == cfg.base.A);
    CHECK(back.base.B == cfg.base.B);
    CHECK(back.base.C == cfg.base.C);
    CHECK(back.base.D == cfg.base.D);
    CHECK(back.delta == cfg.delta);
    CHECK(back.selective.W_B == cfg.selective.W_B);
    CHECK(back.selective.P == cfg.selective.P);
    CHECK(dump_ssm_config(back) == text);

    const auto minimal = parse_ssm_config(R"({"m": 2, "A_diag": [-1, -2], "B": [1, 1], "C": [1, 0]})");
    CHECK(minimal.base.A(1, 1) == -2.0);
    CHECK(minimal.delta == kDefaultDelta);
    CHECK(minimal.selective.step(Eigen::VectorXd::Zero(1)) ==
          doctest::Approx(kDefaultDelta).epsilon(1e-14));

    CHECK_THROWS_AS(parse_ssm_config("{"), FormatError);
    CHECK_THROWS_AS(parse_ssm_config(R"({"m": 2, "A_diag": [-1], "B": [1, 1], "C": [1, 0]})"),
                    FormatError);
    CHECK_THROWS_AS(parse_ssm_config(R"({"m": 1, "A_diag": [-1], "B": [1], "C": [1], "delta": -1})"),
                    FormatError);
}
