#include "sigtrade/mfg_shared.hpp"

#include "sigtrade/errors.hpp"

#include <cmath>

namespace sigtrade {

Eigen::Vector3d shared_mean_field_law(const ModelParams& p, const Eigen::VectorXd& c) {
    const double kappa = 2 * p.k + p.k_bar;
    return {c[1] / kappa, (2 * c[4] + c[7]) / kappa, c[8] / kappa};
}

ode::VectorField<double> shared_vector_field(const ModelParams& p) {
    return {10, [p](double, const Eigen::VectorXd& c, Eigen::VectorXd& dc) {
                const double c2 = c[1], c3 = c[2], c4 = c[3], c5 = c[4], c6 = c[5];
                const double c7 = c[6], c8 = c[7], c9 = c[8], c10 = c[9];
                const Eigen::Vector3d f = shared_mean_field_law(p, c);
                const double f1 = f[0], f2 = f[1], f3 = f[2];
                const double k = p.k, kb = p.k_bar, gb = p.gamma_bar, beta = p.beta;

                const double r0 = c2 - kb * f1;  // intercept of 2k * nu
                const double rq = c8 - kb * f2;  // q_bar loading of 2k * nu
                const double rv = c9 - kb * f3;  // V_bar loading of 2k * nu
                const double m3 = c3 - gb * c4;
                const double m6 = 2 * c6 - gb * c10;
                const double m7 = c10 - 2 * gb * c7;
                const double m8 = p.b + c8 - gb * c9;

                dc[0] = -(f1 * m3 + p.eta * p.eta * c7 + r0 * r0 / (4 * k));
                dc[1] = -(p.mu + f1 * m8 + r0 * c5 / k);
                dc[2] = -(f1 * m6 + f2 * m3 + r0 * rq / (2 * k));
                dc[3] = -(f1 * m7 + f3 * m3 - beta * c4 + r0 * rv / (2 * k));
                dc[4] = -(c5 * c5 / k);
                dc[5] = -(f2 * m6 + rq * rq / (4 * k));
                dc[6] = -(f3 * m7 - 2 * beta * c7 + rv * rv / (4 * k));
                dc[7] = -(f2 * m8 + c5 * rq / k);
                dc[8] = -(f3 * m8 - beta * c9 + c5 * rv / k);
                dc[9] = -(f2 * m7 + f3 * m6 - beta * c10 + rq * rv / (2 * k));
            }};
}

SharedCoefficients solve_shared(const ModelParams& params, const TimeGrid& grid) {
    require_valid(params);
    Eigen::VectorXd terminal = Eigen::VectorXd::Zero(10);
    terminal[4] = -params.alpha;
    terminal[8] = 1.0;

    SharedCoefficients out{{params, ode::integrate_backward(shared_vector_field(params), terminal, grid)}, {}};
    out.f.resize(out.nodes(), 3);
    for (Eigen::Index i = 0; i < out.nodes(); ++i)
        out.f.row(i) = shared_mean_field_law(params, out.trajectory.values.row(i).transpose())
                           .transpose();
    return out;
}

SharedClosedForm closed_form_shared(const ModelParams& p, double t, int quadrature_intervals) {
    if (p.alpha != 0.0 || p.mu != 0.0)
        throw ParameterError("shared closed form requires alpha = 0 and mu = 0");
    if (!(p.b > 0.0)) throw ParameterError("shared closed form requires b > 0");
    const auto d = derived_constants(p);
    const double T = p.horizon_T;
    if (t < 0.0 || t > T) throw DomainError("closed_form_shared: t outside [0, T]");

    const auto c9 = [&](double s) {
        return 2 * d.z / ((1 + 2 * d.z) * std::exp(d.omega * (T - s)) - 1);
    };
    const auto c7 = [&](double s) {
        const double v = c9(s);
        return p.k / (2 * p.b * d.kappa) * v * v * (1 - std::exp(-2 * p.b / d.kappa * (T - s)));
    };
    const double c1 =
        p.eta * p.eta * ode::simpson(c7, t, T, static_cast<Eigen::Index>(quadrature_intervals));
    return {c1, c7(t), c9(t), c9(t) / d.kappa};
}

double feedback_rate_shared(const SharedCoefficients& coeffs, double t, double q, double q_bar,
                            double V_bar) {
    const auto& p = coeffs.params;
    const Eigen::VectorXd c = coeffs.at(t);
    const Eigen::Vector3d f = shared_mean_field_law(p, c);
    return (c[1] - p.k_bar * f[0]) / (2 * p.k) + c[4] / p.k * q +
           (c[7] - p.k_bar * f[1]) / (2 * p.k) * q_bar + (c[8] - p.k_bar * f[2]) / (2 * p.k) * V_bar;
}

double mean_field_rate(const SharedCoefficients& coeffs, double t, double q_bar, double V_bar) {
    const Eigen::Vector3d f = shared_mean_field_law(coeffs.params, coeffs.at(t));
    return f[0] + f[1] * q_bar + f[2] * V_bar;
}

SharedLoadings loadings_shared(const SharedCoefficients& coeffs) {
    const auto& p = coeffs.params;
    const double kappa = 2 * p.k + p.k_bar;
    const auto c = [&](int i) { return coeffs.trajectory.values.col(i - 1).array(); };
    return {c(2) / kappa, c(5) / p.k, (2 * p.k * c(8) - 2 * p.k_bar * c(5)) / (2 * p.k * kappa),
            c(9) / kappa};
}

}  // namespace sigtrade
