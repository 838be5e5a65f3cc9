#pragma once

// Mean-field equilibrium when every agent observes the same signal V_bar.
// Agent value function: x + qS + h(t, q, q_bar, V_bar) with
// h = c1 + c2 q + c3 q_bar + c4 V_bar + c5 q^2 + c6 q_bar^2 + c7 V_bar^2
//     + c8 q q_bar + c9 q V_bar + c10 q_bar V_bar,
// and aggregate rate nu_bar = f1 + f2 q_bar + f3 V_bar.

#include "sigtrade/coefficients.hpp"

namespace sigtrade {

struct SharedCoefficients : CoefficientPath {
    Eigen::MatrixXd f;  ///< nodes x 3: (f1, f2, f3)

    Eigen::VectorXd f_path(int index) const { return f.col(index - 1); }
};

/// (f1, f2, f3) implied by the consistency condition for a coefficient state.
Eigen::Vector3d shared_mean_field_law(const ModelParams& params, const Eigen::VectorXd& c);

/// Ten coefficient ODEs with the consistency condition substituted.
ode::VectorField<double> shared_vector_field(const ModelParams& params);

/// Solves the equilibrium system; `params.gamma` is ignored.
SharedCoefficients solve_shared(const ModelParams& params, const TimeGrid& grid);

struct SharedClosedForm {
    double c1, c7, c9, f3;
};

/// Closed-form equilibrium coefficients for alpha = mu = 0. Requires
/// gamma_bar > 0 and b > 0. c1 is the integral of eta^2 c7 over [t, T],
/// evaluated with `quadrature_intervals` Simpson panels.
SharedClosedForm closed_form_shared(const ModelParams& params, double t,
                                    int quadrature_intervals = 4000);

/// Agent rate nu^{n*}(t, q, q_bar, V_bar).
double feedback_rate_shared(const SharedCoefficients& coeffs, double t, double q, double q_bar,
                            double V_bar);

/// Aggregate rate nu_bar(t, q_bar, V_bar) = f1 + f2 q_bar + f3 V_bar.
double mean_field_rate(const SharedCoefficients& coeffs, double t, double q_bar, double V_bar);

struct SharedLoadings {
    Eigen::VectorXd intercept;  ///< c2 / kappa
    Eigen::VectorXd nu_q;       ///< c5 / k
    Eigen::VectorXd nu_qbar;    ///< (2k c8 - 2 k_bar c5) / (2k kappa)
    Eigen::VectorXd nu_Vbar;    ///< c9 / kappa
};

SharedLoadings loadings_shared(const SharedCoefficients& coeffs);

}  // namespace sigtrade
