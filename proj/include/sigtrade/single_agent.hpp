#pragma once

// Single agent trading on a mean-reverting signal with temporary and
// permanent impact. The value function is H = x + qS + h(t, q, V) with
// h = c1 + c2 q + c3 V + c4 q^2 + c5 V^2 + c6 qV.

#include "sigtrade/coefficients.hpp"

namespace sigtrade {

struct SingleCoefficients : CoefficientPath {};

/// Integrates the six coupled coefficient ODEs backward from
/// c4(T) = -alpha, c6(T) = 1, all others zero.
SingleCoefficients solve_single(const ModelParams& params, const TimeGrid& grid);

/// Right-hand side of the coefficient system, exposed for oracle checks.
ode::VectorField<double> single_vector_field(const ModelParams& params);

/// Optimal trading rate nu*(t, q, V) in shares per unit time.
double feedback_rate(const SingleCoefficients& coeffs, double t, double q, double V);

struct SingleLoadings {
    Eigen::VectorXd intercept;  ///< (c2 - gamma c3) / 2k
    Eigen::VectorXd nu_q;       ///< (b + 2 c4 - gamma c6) / 2k
    Eigen::VectorXd nu_V;       ///< (c6 - 2 gamma c5) / 2k
};

SingleLoadings loadings(const SingleCoefficients& coeffs);

/// H(t, x, q, S, V) with coefficients interpolated linearly in t.
double value_function(const SingleCoefficients& coeffs, double t, double x, double q, double S,
                      double V);

/// Left-hand side of the HJB equation evaluated at one point.
struct HjbCheck {
    double residual;               ///< d_t H + sup_nu A^nu H
    double maximizer;              ///< argmax of the quadratic in nu
    double quadratic_coefficient;  ///< coefficient of nu^2 in A^nu H (always -k)
};

/// d_t H by central differences of step `fd_step` on the Hermite interpolant
/// of the coefficients; (x, q, S, V) derivatives are exact.
HjbCheck hjb_residual(const SingleCoefficients& coeffs, double t, double x, double q, double S,
                      double V, double fd_step);

}  // namespace sigtrade
