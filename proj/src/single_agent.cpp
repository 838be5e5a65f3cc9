#include "sigtrade/single_agent.hpp"

#include "sigtrade/errors.hpp"

namespace sigtrade {

ode::VectorField<double> single_vector_field(const ModelParams& p) {
    return {6, [p](double, const Eigen::VectorXd& c, Eigen::VectorXd& dc) {
                const double c2 = c[1], c3 = c[2], c4 = c[3], c5 = c[4], c6 = c[5];
                const double lin = c2 - p.gamma * c3;            // intercept numerator
                const double on_q = p.b + 2 * c4 - p.gamma * c6;  // q loading numerator
                const double on_v = c6 - 2 * p.gamma * c5;        // V loading numerator
                const double k = p.k;
                dc[0] = -(p.eta * p.eta * c5 + lin * lin / (4 * k));
                dc[1] = -(p.mu + lin * on_q / (2 * k));
                dc[2] = -(-p.beta * c3 + lin * on_v / (2 * k));
                dc[3] = -(on_q * on_q / (4 * k));
                dc[4] = -(-2 * p.beta * c5 + on_v * on_v / (4 * k));
                dc[5] = -(-p.beta * c6 + on_v * on_q / (2 * k));
            }};
}

SingleCoefficients solve_single(const ModelParams& params, const TimeGrid& grid) {
    require_valid(params);
    Eigen::VectorXd terminal = Eigen::VectorXd::Zero(6);
    terminal[3] = -params.alpha;
    terminal[5] = 1.0;
    return {{params, ode::integrate_backward(single_vector_field(params), terminal, grid)}};
}

namespace {

double rate_from(const ModelParams& p, const Eigen::VectorXd& c, double q, double V) {
    const double c2 = c[1], c3 = c[2], c4 = c[3], c5 = c[4], c6 = c[5];
    return (c2 - p.gamma * c3 + (p.b + 2 * c4 - p.gamma * c6) * q + (c6 - 2 * p.gamma * c5) * V) /
           (2 * p.k);
}

double h_from(const Eigen::VectorXd& c, double q, double V) {
    return c[0] + c[1] * q + c[2] * V + c[3] * q * q + c[4] * V * V + c[5] * q * V;
}

}  // namespace

double feedback_rate(const SingleCoefficients& coeffs, double t, double q, double V) {
    return rate_from(coeffs.params, coeffs.at(t), q, V);
}

SingleLoadings loadings(const SingleCoefficients& coeffs) {
    const auto& p = coeffs.params;
    const auto c = [&](int i) { return coeffs.trajectory.values.col(i - 1).array(); };
    const double two_k = 2 * p.k;
    return {(c(2) - p.gamma * c(3)) / two_k, (p.b + 2 * c(4) - p.gamma * c(6)) / two_k,
            (c(6) - 2 * p.gamma * c(5)) / two_k};
}

double value_function(const SingleCoefficients& coeffs, double t, double x, double q, double S,
                      double V) {
    return x + q * S + h_from(coeffs.at(t), q, V);
}

HjbCheck hjb_residual(const SingleCoefficients& coeffs, double t, double x, double q, double S,
                      double V, double fd_step) {
    if (!(fd_step > 0.0)) throw ParameterError("fd_step must be positive");
    const auto& p = coeffs.params;
    (void)x;

    const Eigen::VectorXd c = coeffs.smooth_at(t);
    const double dh_dt = (h_from(coeffs.smooth_at(t + fd_step), q, V) -
                          h_from(coeffs.smooth_at(t - fd_step), q, V)) /
                         (2 * fd_step);

    // Partial derivatives of H = x + qS + h(t, q, V).
    const double H_x = 1.0;
    const double H_q = S + c[1] + 2 * c[3] * q + c[5] * V;
    const double H_S = q;
    const double H_V = c[2] + 2 * c[4] * V + c[5] * q;
    const double H_SS = 0.0, H_SV = 0.0;
    const double H_VV = 2 * c[4];

    // A^nu H = a2 nu^2 + a1 nu + a0
    const double a2 = -p.k * H_x;
    const double a1 = -S * H_x + H_q + p.b * H_S - p.gamma * H_V;
    const double a0 = p.mu * H_S - p.beta * V * H_V + 0.5 * p.sigma * p.sigma * H_SS +
                      0.5 * p.eta * p.eta * H_VV + p.rho * p.sigma * p.eta * H_SV;

    const double nu_max = -a1 / (2 * a2);
    const double sup = a0 + a1 * nu_max + a2 * nu_max * nu_max;
    return {dh_dt + sup, nu_max, a2};
}

}  // namespace sigtrade
