#include "sfcscan/ssm.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "sfcscan/error.hpp"
#include "sfcscan/random.hpp"

namespace sfcscan {

namespace {

bool is_diagonal(const Eigen::MatrixXd& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j && a(i, j) != 0.0) return false;
        }
    }
    return true;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

// One discretization for the current step. `diag` caches is_diagonal(A).
void discretize_into(const Eigen::MatrixXd& A, bool diag, const Eigen::VectorXd& B, double delta,
                     Eigen::MatrixXd& abar, Eigen::VectorXd& bbar) {
    const auto m = A.rows();
    if (diag) {
        abar.setZero(m, m);
        bbar.resize(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double x = delta * A(i, i);
            abar(i, i) = std::exp(x);
            const double gain = std::abs(x) < kSeriesThreshold ? detail::input_gain_series(x)
                                                                : detail::input_gain_closed(x);
            bbar(i) = gain * delta * B(i);
        }
        return;
    }

    const Eigen::MatrixXd dA = delta * A;
    abar = dA.exp();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(dA);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    Eigen::MatrixXd gain;
    if (smallest >= kSeriesThreshold) {
        gain = dA.partialPivLu().solve(abar - Eigen::MatrixXd::Identity(m, m));
    } else if (sv(0) <= 1.0) {
        gain = detail::input_gain_series(dA);
    } else {
        // Large but singular: the series cancels badly, so read the gain off
        // the exponential of the block matrix [[dA, I], [0, 0]].
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        block.topLeftCorner(m, m) = dA;
        block.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
        gain = block.exp().topRightCorner(m, m);
    }
    bbar = gain * (delta * B);
}

}  // namespace

namespace detail {

double input_gain_closed(double x) { return std::expm1(x) / x; }

double input_gain_series(double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= x / static_cast<double>(k + 1);
        sum += term;
        if (std::abs(term) <= std::numeric_limits<double>::epsilon() * 0.25 * std::abs(sum)) break;
    }
    return sum;
}

Eigen::MatrixXd input_gain_series(const Eigen::MatrixXd& x) {
    const auto m = x.rows();
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd sum = term;
    for (int k = 1; k < 200; ++k) {
        term = term * x / static_cast<double>(k + 1);
        sum += term;
        if (term.norm() <= std::numeric_limits<double>::epsilon() * 0.25 * sum.norm()) break;
    }
    return sum;
}

}  // namespace detail

void ContinuousSSM::validate() const {
    const auto m = A.rows();
    if (m < 1) throw InvalidArgument("SSM hidden dimension must be >= 1");
    if (A.cols() != m || B.size() != m || C.size() != m) {
        throw ShapeMismatch("SSM matrices disagree on hidden dimension " + std::to_string(m));
    }
    if (!A.allFinite() || !B.allFinite() || !C.allFinite() || !std::isfinite(D)) {
        throw InvalidArgument("SSM parameters must be finite");
    }
}

ContinuousSSM ContinuousSSM::diagonal(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                      const Eigen::RowVectorXd& c, double d) {
    ContinuousSSM s{a.asDiagonal().toDenseMatrix(), b, c, d};
    s.validate();
    return s;
}

ContinuousSSM ContinuousSSM::random_diagonal(Eigen::Index m, std::uint64_t seed) {
    if (m < 1) throw InvalidArgument("SSM hidden dimension must be >= 1");
    Rng rng(seed);
    Eigen::VectorXd a(m), b(m);
    Eigen::RowVectorXd c(m);
    for (Eigen::Index i = 0; i < m; ++i) a(i) = -rng.uniform(0.1, 2.0);
    for (Eigen::Index i = 0; i < m; ++i) b(i) = rng.normal();
    for (Eigen::Index i = 0; i < m; ++i) c(i) = rng.normal();
    return diagonal(a, b, c, 0.0);
}

DiscreteSSM discretize_zoh(const ContinuousSSM& ssm, double delta) {
    ssm.validate();
    require_finite(delta, "step size");
    if (delta <= 0.0) throw InvalidArgument("step size must be positive");
    DiscreteSSM d;
    discretize_into(ssm.A, is_diagonal(ssm.A), ssm.B, delta, d.Abar, d.Bbar);
    d.C = ssm.C;
    d.D = ssm.D;
    d.delta = delta;
    return d;
}

std::vector<double> scan_recurrence(const DiscreteSSM& dssm, std::span<const double> inputs) {
    const auto m = dssm.dim();
    if (dssm.Abar.cols() != m || dssm.Bbar.size() != m || dssm.C.size() != m) {
        throw ShapeMismatch("discrete SSM matrices disagree on hidden dimension");
    }
    std::vector<double> out(inputs.size());
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        const double x = inputs[t];
        require_finite(x, "scan input");
        h = dssm.Abar * h + dssm.Bbar * x;
        out[t] = dssm.C.dot(h) + dssm.D * x;
    }
    return out;
}

double softplus(double z) noexcept {
    // log(1 + e^z) without overflow for large z.
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double softplus_inverse(double y) {
    if (!(y > 0.0)) throw InvalidArgument("softplus inverse needs a positive argument");
    // log(e^y - 1), rearranged to stay accurate for large y.
    return y + std::log(-std::expm1(-y));
}

void SelectiveParams::validate(Eigen::Index m) const {
    const auto d = input_dim();
    if (d < 1) throw InvalidArgument("selective input dimension must be >= 1");
    if (W_B.rows() != m || W_B.cols() != d || b_B.size() != m || W_C.rows() != m ||
        W_C.cols() != d || b_C.size() != m) {
        throw ShapeMismatch("selective weights disagree with hidden dimension " +
                            std::to_string(m) + " and input dimension " + std::to_string(d));
    }
    if (channel < 0 || channel >= d) throw InvalidArgument("selective channel out of range");
    if (!W_B.allFinite() || !b_B.allFinite() || !W_C.allFinite() || !b_C.allFinite() ||
        !w_delta.allFinite() || !std::isfinite(P)) {
        throw InvalidArgument("selective parameters must be finite");
    }
}

double SelectiveParams::step(const Eigen::VectorXd& x) const { return softplus(P + w_delta.dot(x)); }

SelectiveParams SelectiveParams::constant(const ContinuousSSM& base, double delta,
                                          Eigen::Index input_dim) {
    base.validate();
    const auto m = base.dim();
    SelectiveParams p;
    p.W_B = Eigen::MatrixXd::Zero(m, input_dim);
    p.b_B = base.B;
    p.W_C = Eigen::MatrixXd::Zero(m, input_dim);
    p.b_C = base.C.transpose();
    p.w_delta = Eigen::VectorXd::Zero(input_dim);
    p.P = softplus_inverse(delta);
    return p;
}

SelectiveParams SelectiveParams::random(const ContinuousSSM& base, Eigen::Index input_dim,
                                        std::uint64_t seed) {
    SelectiveParams p = constant(base, kDefaultDelta, input_dim);
    Rng rng(seed);
    const auto m = base.dim();
    for (Eigen::Index j = 0; j < input_dim; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) p.W_B(i, j) = 0.5 * rng.normal();
    }
    for (Eigen::Index j = 0; j < input_dim; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) p.W_C(i, j) = 0.5 * rng.normal();
    }
    for (Eigen::Index j = 0; j < input_dim; ++j) p.w_delta(j) = 0.5 * rng.normal();
    return p;
}

std::vector<double> selective_scan(const SelectiveParams& params, const ContinuousSSM& base,
                                   const Eigen::MatrixXd& inputs) {
    base.validate();
    const auto m = base.dim();
    params.validate(m);
    if (inputs.cols() != params.input_dim()) {
        throw ShapeMismatch("input vectors have dimension " + std::to_string(inputs.cols()) +
                            ", expected " + std::to_string(params.input_dim()));
    }
    if (!inputs.allFinite()) throw InvalidArgument("scan inputs must be finite");

    const bool diag = is_diagonal(base.A);
    std::vector<double> out(static_cast<std::size_t>(inputs.rows()));
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd x(inputs.cols());
    Eigen::VectorXd b(m), bbar(m);
    Eigen::RowVectorXd c(m);
    Eigen::MatrixXd abar(m, m);
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        x = inputs.row(t).transpose();
        const double delta = params.step(x);
        if (!(delta > 0.0)) throw InvalidArgument("selective step size must be positive");
        b.noalias() = params.W_B * x;
        b += params.b_B;
        c.noalias() = (params.W_C * x).transpose();
        c += params.b_C.transpose();
        discretize_into(base.A, diag, b, delta, abar, bbar);
        const double u = x(params.channel);
        if (diag) {
            h = abar.diagonal().cwiseProduct(h) + bbar * u;
        } else {
            h = abar * h + bbar * u;
        }
        out[static_cast<std::size_t>(t)] = c.dot(h) + base.D * u;
    }
    return out;
}

ScalarField scan_over_grid(const ScanOrder& order, const ScalarField& field,
                           const SelectiveParams& params, const ContinuousSSM& base) {
    if (params.input_dim() != 1) {
        throw ShapeMismatch("scan_over_grid drives a single-channel field; input dimension must be 1");
    }
    const auto seq = apply_order(order, field);
    const Eigen::MatrixXd inputs =
        Eigen::Map<const Eigen::MatrixXd>(seq.data(), static_cast<Eigen::Index>(seq.size()), 1);
    const auto out = selective_scan(params, base, inputs);
    return invert_order(order, out);
}

}  // namespace sfcscan
