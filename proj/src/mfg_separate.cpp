#include "sigtrade/mfg_separate.hpp"

#include "sigtrade/errors.hpp"

#include <cmath>

namespace sigtrade {

Eigen::Vector3d separate_mean_field_law(const ModelParams& p, const Eigen::VectorXd& c) {
    const double kappa = 2 * p.k + p.k_bar;
    const double g = p.gamma;
    return {(c[1] - g * c[3]) / kappa,
            (2 * c[5] + c[9] - g * (c[10] + c[12])) / kappa,
            (c[10] + c[11] - g * (2 * c[7] + c[14])) / kappa};
}

ode::VectorField<double> separate_vector_field(const ModelParams& p) {
    return {15, [p](double, const Eigen::VectorXd& c, Eigen::VectorXd& dc) {
                const double c2 = c[1], c3 = c[2], c4 = c[3], c5 = c[4], c6 = c[5];
                const double c7 = c[6], c8 = c[7], c9 = c[8], c10 = c[9], c11 = c[10];
                const double c12 = c[11], c13 = c[12], c14 = c[13], c15 = c[14];
                const Eigen::Vector3d f = separate_mean_field_law(p, c);
                const double f1 = f[0], f2 = f[1], f3 = f[2];
                const double k = p.k, kb = p.k_bar, g = p.gamma, gb = p.gamma_bar;
                const double gg = g + gb, beta = p.beta;
                const double eta2 = p.eta * p.eta, rho2eta2 = p.rho * p.rho * eta2;

                // 2k times the agent's loadings on 1, q, q_bar, V, V_bar.
                const double r0 = c2 - g * c4 - kb * f1;
                const double rq = 2 * c6 - g * c11;
                const double rqb = c10 - g * c13 - kb * f2;
                const double rv = c11 - 2 * g * c8;
                const double rvb = c12 - g * c15 - kb * f3;

                // Drift contributions through d/dq_bar and d/dV, d/dV_bar.
                const double m1 = c3 - gb * c4 - gg * c5;
                const double m2 = p.b + c10 - gb * c11 - gg * c12;
                const double m3 = 2 * c7 - gb * c13 - gg * c14;
                const double m4 = c13 - 2 * gb * c8 - gg * c15;
                const double m5 = c14 - gb * c15 - 2 * gg * c9;

                dc[0] = -(f1 * m1 + eta2 * c8 + rho2eta2 * (c9 + c15) + r0 * r0 / (4 * k));
                dc[1] = -(p.mu + f1 * m2 + rq * r0 / (2 * k));
                dc[2] = -(f1 * m3 + f2 * m1 + r0 * rqb / (2 * k));
                dc[3] = -(-beta * c4 + f1 * m4 + r0 * rv / (2 * k));
                dc[4] = -(-beta * c5 + f1 * m5 + f3 * m1 + r0 * rvb / (2 * k));
                dc[5] = -(rq * rq / (4 * k));
                dc[6] = -(f2 * m3 + rqb * rqb / (4 * k));
                dc[7] = -(-2 * beta * c8 + rv * rv / (4 * k));
                dc[8] = -(-2 * beta * c9 + f3 * m5 + rvb * rvb / (4 * k));
                dc[9] = -(f2 * m2 + rq * rqb / (2 * k));
                dc[10] = -(-beta * c11 + rq * rv / (2 * k));
                dc[11] = -(-beta * c12 + f3 * m2 + rq * rvb / (2 * k));
                dc[12] = -(-beta * c13 + f2 * m4 + rv * rqb / (2 * k));
                dc[13] = -(-beta * c14 + f2 * m5 + f3 * m3 + rqb * rvb / (2 * k));
                dc[14] = -(-2 * beta * c15 + f3 * m4 + rv * rvb / (2 * k));
            }};
}

SeparateCoefficients solve_separate(const ModelParams& params, const TimeGrid& grid) {
    require_valid(params);
    Eigen::VectorXd terminal = Eigen::VectorXd::Zero(15);
    terminal[5] = -params.alpha;
    terminal[10] = 1.0;

    SeparateCoefficients out{{params, ode::integrate_backward(separate_vector_field(params), terminal, grid)}, {}};
    out.f.resize(out.nodes(), 3);
    for (Eigen::Index i = 0; i < out.nodes(); ++i)
        out.f.row(i) = separate_mean_field_law(params, out.trajectory.values.row(i).transpose())
                           .transpose();
    return out;
}

namespace {

struct SeparateClosedFormKernel {
    ModelParams p;
    DerivedConstants d;

    double denom(double tau) const { return (1 + 2 * d.z) * std::exp(d.omega * tau) - 1; }
    double c8(double tau) const { return tau / (4 * p.k) * std::exp(-2 * p.beta * tau); }
    double c11(double tau) const { return std::exp(-p.beta * tau); }
    double c12(double tau) const { return 2 * d.z / denom(tau) - std::exp(-p.beta * tau); }
    double c15(double tau) const {
        return -tau / (2 * p.k) * std::exp(-2 * p.beta * tau) +
               (2 * d.z / denom(tau)) * ((1 - std::exp(-p.b / d.kappa * tau)) / p.b) *
                   std::exp(-p.beta * tau);
    }
    double d9(double tau) const {
        const double k = p.k, b = p.b, z = d.z, w = d.omega, kappa = d.kappa, beta = p.beta;
        const double z2 = z * z, one2z = 1 + 2 * z;
        const double e1 = std::exp(-w * tau), e2 = std::exp(-2 * w * tau);
        return 1 / (16 * k * z2) * ((1 - e2) / (2 * w) - tau * e2) -
               one2z / (8 * k * z2) * ((1 - e1) / w - tau * e1) +
               1 / (2 * b * z) * (1 - std::exp((2 * b / kappa - beta) * tau)) +
               k / (2 * b * kappa) * (1 - std::exp(2 * b / kappa * tau)) -
               one2z / (2 * b * z) * (1 - std::exp(b / kappa * tau)) -
               1 / (32 * k * z2 * w) * (1 - e2) +
               (one2z * b - 4 * k * z * w) / (8 * b * k * z2 * w) * (1 - e1) -
               one2z * one2z / (16 * k * z2) * tau;
    }
    double c9(double tau) const {
        const double den = denom(tau);
        return -4 * d.z * d.z * std::exp(-2 * p.b / d.kappa * tau) / (den * den) * d9(tau);
    }
    double c1_integrand(double tau) const {
        const double eta2 = p.eta * p.eta;
        return eta2 * c8(tau) + p.rho * p.rho * eta2 * (c9(tau) + c15(tau));
    }
};

}  // namespace

SeparateClosedForm closed_form_separate(const ModelParams& p, double t, int quadrature_intervals) {
    if (p.alpha != 0.0 || p.gamma != 0.0 || p.mu != 0.0)
        throw ParameterError("separate closed form requires alpha = gamma = mu = 0");
    if (!(p.b > 0.0)) throw ParameterError("separate closed form requires b > 0");
    const auto d = derived_constants(p);
    if (d.omega == 0.0) throw ParameterError("separate closed form singular: omega = 0");
    const double T = p.horizon_T;
    if (t < 0.0 || t > T) throw DomainError("closed_form_separate: t outside [0, T]");

    const SeparateClosedFormKernel kern{p, d};
    const double tau = T - t;
    const double c1 = ode::simpson([&](double s) { return kern.c1_integrand(T - s); }, t, T,
                                   static_cast<Eigen::Index>(quadrature_intervals));
    return {c1, kern.c8(tau), kern.c9(tau), kern.c11(tau), kern.c12(tau), kern.c15(tau),
            kern.d9(tau)};
}

LoadingPoint separate_loadings_at(const ModelParams& p, const Eigen::VectorXd& c) {
    const double k = p.k, kb = p.k_bar, g = p.gamma;
    const double kappa = 2 * k + kb;
    const double on_q = 2 * c[5] - g * c[10];
    const double on_v = c[10] - 2 * g * c[7];
    return {(c[1] - g * c[3]) / kappa, on_q / (2 * k),
            (2 * k * (c[9] - g * c[12]) - kb * on_q) / (2 * k * kappa), on_v / (2 * k),
            (2 * k * (c[11] - g * c[14]) - kb * on_v) / (2 * k * kappa)};
}

double feedback_rate_separate(const SeparateCoefficients& coeffs, double t, double q,
                              double q_bar, double V, double V_bar) {
    const auto& p = coeffs.params;
    const Eigen::VectorXd c = coeffs.at(t);
    const Eigen::Vector3d f = separate_mean_field_law(p, c);
    const double g = p.gamma, kb = p.k_bar, two_k = 2 * p.k;
    return (c[1] - g * c[3] - kb * f[0]) / two_k + (2 * c[5] - g * c[10]) / two_k * q +
           (c[9] - g * c[12] - kb * f[1]) / two_k * q_bar + (c[10] - 2 * g * c[7]) / two_k * V +
           (c[11] - g * c[14] - kb * f[2]) / two_k * V_bar;
}

double mean_field_rate_separate(const SeparateCoefficients& coeffs, double t, double q_bar,
                                double V_bar) {
    const Eigen::Vector3d f = separate_mean_field_law(coeffs.params, coeffs.at(t));
    return f[0] + f[1] * q_bar + f[2] * V_bar;
}

SeparateLoadings loadings_separate(const SeparateCoefficients& coeffs) {
    const Eigen::Index n = coeffs.nodes();
    SeparateLoadings out{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n),
                         Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto l =
            separate_loadings_at(coeffs.params, coeffs.trajectory.values.row(i).transpose());
        out.intercept[i] = l.intercept;
        out.nu_q[i] = l.nu_q;
        out.nu_qbar[i] = l.nu_qbar;
        out.nu_V[i] = l.nu_V;
        out.nu_Vbar[i] = l.nu_Vbar;
    }
    return out;
}

}  // namespace sigtrade
