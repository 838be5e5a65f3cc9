#include "sigtrade/model.hpp"

#include "sigtrade/errors.hpp"

#include <cmath>
#include <sstream>

namespace sigtrade {

TimeGrid::TimeGrid(int n_steps, double horizon) : n_steps_(n_steps), horizon_(horizon) {
    if (n_steps < 1) throw ParameterError("time grid needs at least one step");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ParameterError("time grid horizon must be positive and finite");
}

Eigen::VectorXd TimeGrid::t_values() const {
    Eigen::VectorXd out(size());
    for (Eigen::Index i = 0; i < size(); ++i) out[i] = t(i);
    return out;
}

Eigen::Index TimeGrid::node_of(double time) const {
    const double x = time / step();
    const auto i = static_cast<Eigen::Index>(std::llround(x));
    if (i < 0 || i > n_steps_ || std::abs(x - static_cast<double>(i)) > 1e-9 * n_steps_) {
        std::ostringstream os;
        os << "time " << time << " is not a node of the grid on [0, " << horizon_ << "]";
        throw DomainError(os.str());
    }
    return i;
}

std::vector<std::string> validate(const ModelParams& p) {
    std::vector<std::string> report;
    auto check = [&report](bool ok, const char* message) {
        if (!ok) report.emplace_back(message);
    };
    const double all[] = {p.mu, p.sigma, p.eta, p.beta, p.gamma, p.gamma_bar,
                          p.rho, p.b, p.k, p.k_bar, p.alpha, p.horizon_T};
    for (double v : all) {
        if (!std::isfinite(v)) {
            report.emplace_back("all parameters must be finite");
            break;
        }
    }
    check(p.sigma >= 0.0, "sigma must be non-negative");
    check(p.eta >= 0.0, "eta must be non-negative");
    check(p.beta >= 0.0, "beta must be non-negative");
    check(p.k > 0.0, "k must be positive");
    check(p.k_bar >= 0.0, "k_bar must be non-negative");
    check(p.alpha >= 0.0, "alpha must be non-negative");
    check(p.rho >= -1.0 && p.rho <= 1.0, "rho must lie in [-1, 1]");
    check(p.horizon_T > 0.0, "horizon_T must be positive");
    return report;
}

std::vector<std::string> validate(const InitialDistribution& init) {
    std::vector<std::string> report;
    if (!(init.var_Q0 >= 0.0)) report.emplace_back("var_Q0 must be non-negative");
    if (!(init.var_V0 >= 0.0)) report.emplace_back("var_V0 must be non-negative");
    // 2x2 PSD: both variances non-negative and determinant non-negative.
    if (init.cov_Q0V0 * init.cov_Q0V0 > init.var_Q0 * init.var_V0 * (1.0 + 1e-12))
        report.emplace_back("initial covariance matrix must be positive semidefinite");
    return report;
}

void require_valid(const ModelParams& params) {
    const auto report = validate(params);
    if (report.empty()) return;
    std::string msg;
    for (const auto& line : report) {
        if (!msg.empty()) msg += "; ";
        msg += line;
    }
    throw ParameterError(msg);
}

DerivedConstants derived_constants(const ModelParams& p) {
    if (!(p.k > 0.0)) throw ParameterError("k must be positive");
    if (p.gamma_bar == 0.0) throw ParameterError("z undefined: gamma_bar is zero");
    const double kappa = 2.0 * p.k + p.k_bar;
    const double excess = kappa * p.beta - p.b;
    return {kappa, excess / (2.0 * p.gamma_bar), excess / kappa};
}

}  // namespace sigtrade
