#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sfcscan/field.hpp"
#include "sfcscan/scan_order.hpp"

namespace sfcscan {

/// Continuous linear time-invariant system h' = A h + B x, y = C h + D x
/// with hidden dimension m and scalar input/output.
struct ContinuousSSM {
    Eigen::MatrixXd A;     // m x m
    Eigen::VectorXd B;     // m
    Eigen::RowVectorXd C;  // m
    double D = 0.0;

    Eigen::Index dim() const noexcept { return A.rows(); }

    /// Throws InvalidArgument on inconsistent sizes, m < 1 or non-finite entries.
    void validate() const;

    /// A = diag(a) with the given B, C, D.
    static ContinuousSSM diagonal(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                  const Eigen::RowVectorXd& c, double d);

    /// Diagonal A with entries in [-2, -0.1], B and C standard normal, D = 0.
    static ContinuousSSM random_diagonal(Eigen::Index m, std::uint64_t seed);
};

/// Zero-order-hold discretization of a ContinuousSSM at step `delta`.
struct DiscreteSSM {
    Eigen::MatrixXd Abar;
    Eigen::VectorXd Bbar;
    Eigen::RowVectorXd C;
    double D = 0.0;
    double delta = 0.0;

    Eigen::Index dim() const noexcept { return Abar.rows(); }
};

/// Threshold on the smallest singular value of delta*A below which the
/// input gain switches from the inverse formula to its power series.
inline constexpr double kSeriesThreshold = 1e-6;

/// Abar = exp(delta A), Bbar = (delta A)^-1 (exp(delta A) - I) delta B.
/// Diagonal A is handled element-wise; dense A goes through a Pade
/// scaling-and-squaring matrix exponential.
DiscreteSSM discretize_zoh(const ContinuousSSM& ssm, double delta);

/// y_t = C h_t + D x_t with h_t = Abar h_{t-1} + Bbar x_t and h_0 = 0.
std::vector<double> scan_recurrence(const DiscreteSSM& dssm, std::span<const double> inputs);

/// Input-dependent parameters: for an input vector x (dimension d)
///   B(x) = W_B x + b_B,  C(x) = W_C x + b_C,
///   delta(x) = softplus(P + w_delta . x).
/// The recurrence is driven by the scalar x[channel].
struct SelectiveParams {
    Eigen::MatrixXd W_B;       // m x d
    Eigen::VectorXd b_B;       // m
    Eigen::MatrixXd W_C;       // m x d
    Eigen::VectorXd b_C;       // m
    Eigen::VectorXd w_delta;   // d
    double P = 0.0;
    Eigen::Index channel = 0;

    Eigen::Index input_dim() const noexcept { return w_delta.size(); }
    Eigen::Index state_dim() const noexcept { return b_B.size(); }

    void validate(Eigen::Index m) const;

    /// Step size at input x; strictly positive.
    double step(const Eigen::VectorXd& x) const;

    /// Zero weight maps; offsets b_B = base.B, b_C = base.C and P chosen so
    /// that the step equals `delta`. Reproduces the LTI system exactly.
    static SelectiveParams constant(const ContinuousSSM& base, double delta,
                                    Eigen::Index input_dim = 1);

    /// Weights ~ N(0, 0.5^2), offsets from `base`, P giving a 0.1 step at x = 0.
    static SelectiveParams random(const ContinuousSSM& base, Eigen::Index input_dim,
                                  std::uint64_t seed);
};

double softplus(double z) noexcept;
/// Inverse of softplus for y > 0.
double softplus_inverse(double y);

/// Default step at zero input.
inline constexpr double kDefaultDelta = 0.1;

/// Per-step discretize-and-update over a sequence of input vectors, one per
/// row of `inputs` (T x d).
std::vector<double> selective_scan(const SelectiveParams& params, const ContinuousSSM& base,
                                   const Eigen::MatrixXd& inputs);

/// Reorders `field` with `order`, runs a single-channel selective scan over
/// the sequence and scatters the outputs back onto the grid.
ScalarField scan_over_grid(const ScanOrder& order, const ScalarField& field,
                           const SelectiveParams& params, const ContinuousSSM& base);

/// Parameter file: JSON object with `m`, `A_diag` (or dense `A`), `B`, `C`,
/// `D`, `delta`, and an optional `selective` block with `W_B`, `b_B`, `W_C`,
/// `b_C`, `w_delta`, `P`.
struct SsmConfig {
    ContinuousSSM base;
    double delta = kDefaultDelta;
    SelectiveParams selective;
};

SsmConfig parse_ssm_config(std::string_view text);
std::string dump_ssm_config(const SsmConfig& config);
SsmConfig load_ssm_config(const std::string& path);

namespace detail {

/// (e^x - 1) / x by the closed form; x must be nonzero.
double input_gain_closed(double x);
/// Same quantity from sum x^k / (k+1)!.
double input_gain_series(double x);
/// Series for the matrix case, sum X^k / (k+1)!.
Eigen::MatrixXd input_gain_series(const Eigen::MatrixXd& x);

}  // namespace detail

}  // namespace sfcscan
