#include "sigtrade/cross_section.hpp"

#include "sigtrade/errors.hpp"

#include <cmath>

namespace sigtrade {

namespace {

struct MomentMatrices {
    Vec2 a;
    Mat2 B, C;
};

MomentMatrices matrices_from(const ModelParams& p, const Eigen::VectorXd& c) {
    const auto l = separate_loadings_at(p, c);
    const double gg = p.gamma + p.gamma_bar;
    const double own_q = l.nu_q + l.nu_qbar, own_v = l.nu_V + l.nu_Vbar;
    MomentMatrices m;
    m.a << l.intercept, -gg * l.intercept;
    m.B << l.nu_q, l.nu_V, -p.gamma * l.nu_q, -(p.beta + p.gamma * l.nu_V);
    m.C << own_q, own_v, -gg * own_q, -(p.beta + gg * own_v);
    return m;
}

}  // namespace

Vec2 MomentSystem::a_at(double t) const { return matrices_from(params(), coeffs.smooth_at(t)).a; }
Mat2 MomentSystem::B_at(double t) const { return matrices_from(params(), coeffs.smooth_at(t)).B; }
Mat2 MomentSystem::C_at(double t) const { return matrices_from(params(), coeffs.smooth_at(t)).C; }

MomentSystem build_moment_system(const SeparateCoefficients& coeffs) {
    MomentSystem sys{coeffs, {}, {}, {}, Vec2(0.0, coeffs.params.eta)};
    const Eigen::Index n = coeffs.nodes();
    sys.a.reserve(n);
    sys.B.reserve(n);
    sys.C.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto m = matrices_from(coeffs.params, coeffs.trajectory.values.row(i).transpose());
        sys.a.push_back(m.a);
        sys.B.push_back(m.B);
        sys.C.push_back(m.C);
    }
    return sys;
}

FundamentalPair fundamental_pair(const MomentSystem& system) {
    const auto& grid = system.grid();
    return {ode::fundamental_matrix<double>([&](double t) { return system.C_at(t); }, grid),
            ode::fundamental_matrix<double>([&](double t) { return system.B_at(t); }, grid)};
}

std::vector<Vec2> mean_path(const MomentSystem& system, const MatrixPath& phi,
                            std::span<const double> dW, const Vec2& y0_bar) {
    const auto& grid = system.grid();
    if (static_cast<Eigen::Index>(dW.size()) != grid.n_steps())
        throw ParameterError("mean_path needs one Brownian increment per grid step");
    const double h = grid.step();
    const double rho = system.params().rho;

    std::vector<Vec2> out;
    out.reserve(grid.size());
    Vec2 acc = y0_bar;
    out.push_back(phi.values[0] * acc);
    for (Eigen::Index j = 0; j < grid.n_steps(); ++j) {
        acc += phi.inverses[j] * (system.a[j] * h + rho * system.theta * dW[j]);
        out.push_back(phi.values[j + 1] * acc);
    }
    return out;
}

std::vector<Mat2> covariance_path(const MomentSystem& system, const MatrixPath& psi,
                                  const Mat2& sigma0) {
    const double rho = system.params().rho;
    const Eigen::Index n = psi.size();
    std::vector<Mat2> integrand(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 g = psi.inverses[i] * system.theta;
        integrand[i] = g * g.transpose();
    }
    const auto running =
        ode::cumulative_simpson<Mat2>(std::span<const Mat2>(integrand), system.grid().step());

    std::vector<Mat2> out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Mat2 inner = sigma0 + (1.0 - rho * rho) * running[i];
        const Mat2 s = psi.values[i] * inner * psi.values[i].transpose();
        out[i] = 0.5 * (s + s.transpose());
    }
    out[0] = sigma0;
    return out;
}

CovarianceElements closed_form_covariance(const ModelParams& p, const Mat2& s0, double t) {
    if (p.mu != 0.0 || p.alpha != 0.0 || p.gamma != 0.0)
        throw ParameterError("closed-form covariance requires mu = alpha = gamma = 0");
    if (!(p.beta > 0.0)) throw ParameterError("closed-form covariance requires beta > 0");
    const double beta = p.beta, k = p.k, T = p.horizon_T;
    const double eta2 = p.eta * p.eta, diffuse = 1.0 - p.rho * p.rho;
    const double sq = s0(0, 0), sv = s0(1, 1), sqv = s0(0, 1);
    const double ebT = std::exp(-beta * T), ebt = std::exp(-beta * t);

    const double q = sq + ebT / k * t * sqv + ebT * ebT / (4 * k * k) * t * t * sv +
                     diffuse * eta2 * ebT * ebT / (16 * beta * beta * beta * k * k) *
                         (std::exp(2 * beta * t) - 1 - 2 * beta * t - 2 * beta * beta * t * t);
    const double v = ebt * ebt * sv + diffuse * eta2 / (2 * beta) * (1 - ebt * ebt);
    const double qv = ebt * sqv + ebT / (2 * k) * t * ebt * sv +
                      diffuse * eta2 * ebT / (4 * beta * beta * k) *
                          (std::sinh(beta * t) - beta * t * ebt);
    return {q, v, qv};
}

namespace {

// Var(S_t) integrand: (rho eta b [Phi_t Phi_u^{-1}]_{01} + sigma)^2
double variance_integrand(const ModelParams& p, const Mat2& phi_t, const Mat2& phi_u_inv) {
    const double transfer = phi_t.row(0).dot(phi_u_inv.col(1));
    const double v = p.rho * p.eta * p.b * transfer + p.sigma;
    return v * v;
}

}  // namespace

double price_variance(const MomentSystem& system, const MatrixPath& phi, double t) {
    const Eigen::Index i = system.grid().node_of(t);
    if (i == 0) return 0.0;
    const auto& p = system.params();
    if (p.rho * p.eta * p.b == 0.0) return p.sigma * p.sigma * system.grid().t(i);
    std::vector<double> samples(i + 1);
    for (Eigen::Index j = 0; j <= i; ++j)
        samples[j] = variance_integrand(p, phi.values[i], phi.inverses[j]);
    return ode::simpson_samples<double>(samples, system.grid().step());
}

Eigen::VectorXd price_variance_path(const MomentSystem& system, const MatrixPath& phi) {
    // With r_t = row 0 of Phi_t and g_u = column 1 of Phi_u^{-1}, the integrand
    // expands to (rho eta b)^2 r^T (g g^T) r + 2 rho eta b sigma r.g + sigma^2.
    const auto& p = system.params();
    const Eigen::Index n = phi.size();
    std::vector<Mat2> outer(n);
    std::vector<Vec2> linear(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Vec2 g = phi.inverses[j].col(1);
        outer[j] = g * g.transpose();
        linear[j] = g;
    }
    const double h = system.grid().step();
    const auto int_outer = ode::cumulative_simpson<Mat2>(std::span<const Mat2>(outer), h);
    const auto int_linear = ode::cumulative_simpson<Vec2>(std::span<const Vec2>(linear), h);

    const double s = p.rho * p.eta * p.b;
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 r = phi.values[i].row(0).transpose();
        out[i] = s * s * r.dot(int_outer[i] * r) + 2 * s * p.sigma * r.dot(int_linear[i]) +
                 p.sigma * p.sigma * system.grid().t(i);
    }
    return out;
}

double price_variance_closed(const ModelParams& p, double t, int quadrature_intervals) {
    if (p.mu != 0.0 || p.alpha != 0.0 || p.gamma != 0.0)
        throw ParameterError("closed-form price variance requires mu = alpha = gamma = 0");
    if (!(p.b > 0.0)) throw ParameterError("closed-form price variance requires b > 0");
    const auto d = derived_constants(p);
    const double T = p.horizon_T;
    if (p.rho * p.eta == 0.0) return p.sigma * p.sigma * t;
    const auto integrand = [&](double u) {
        const double v = 2 * p.rho * p.eta * d.z * (1 - std::exp(-p.b / d.kappa * (t - u))) /
                             ((1 + 2 * d.z) * std::exp(d.omega * (T - u)) - 1) +
                         p.sigma;
        return v * v;
    };
    return ode::simpson(integrand, 0.0, t, static_cast<Eigen::Index>(quadrature_intervals));
}

double correlation(const Mat2& cov) {
    const double denom = std::sqrt(cov(0, 0) * cov(1, 1));
    return denom > 0.0 ? cov(0, 1) / denom : 0.0;
}

}  // namespace sigtrade
