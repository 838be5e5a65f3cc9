#pragma once

// Mean-field equilibrium when each agent observes an individual signal V^n
// correlated with the price noise; V_bar is the population average.
// h = c1 + c2 q + c3 q_bar + c4 V + c5 V_bar + c6 q^2 + c7 q_bar^2 + c8 V^2
//     + c9 V_bar^2 + c10 q q_bar + c11 qV + c12 q V_bar + c13 q_bar V
//     + c14 q_bar V_bar + c15 V V_bar.

#include "sigtrade/coefficients.hpp"

namespace sigtrade {

struct SeparateCoefficients : CoefficientPath {
    Eigen::MatrixXd f;  ///< nodes x 3: (f1, f2, f3)

    Eigen::VectorXd f_path(int index) const { return f.col(index - 1); }
};

Eigen::Vector3d separate_mean_field_law(const ModelParams& params, const Eigen::VectorXd& c);

ode::VectorField<double> separate_vector_field(const ModelParams& params);

SeparateCoefficients solve_separate(const ModelParams& params, const TimeGrid& grid);

struct SeparateClosedForm {
    double c1, c8, c9, c11, c12, c15;
    double d9;  ///< auxiliary D9(t) entering c9
};

/// Closed-form equilibrium coefficients for alpha = gamma = mu = 0. Requires
/// gamma_bar > 0, b > 0 and omega != 0. c1 is evaluated by Simpson
/// quadrature of eta^2 c8 + rho^2 eta^2 (c9 + c15) over [t, T].
SeparateClosedForm closed_form_separate(const ModelParams& params, double t,
                                        int quadrature_intervals = 4000);

double feedback_rate_separate(const SeparateCoefficients& coeffs, double t, double q,
                              double q_bar, double V, double V_bar);

double mean_field_rate_separate(const SeparateCoefficients& coeffs, double t, double q_bar,
                                double V_bar);

struct SeparateLoadings {
    Eigen::VectorXd intercept;  ///< (c2 - gamma c4) / kappa
    Eigen::VectorXd nu_q;
    Eigen::VectorXd nu_qbar;
    Eigen::VectorXd nu_V;
    Eigen::VectorXd nu_Vbar;
};

SeparateLoadings loadings_separate(const SeparateCoefficients& coeffs);

/// Loadings at a single coefficient state (used for sub-grid evaluation).
struct LoadingPoint {
    double intercept, nu_q, nu_qbar, nu_V, nu_Vbar;
};
LoadingPoint separate_loadings_at(const ModelParams& params, const Eigen::VectorXd& c);

}  // namespace sigtrade
