#include "sigtrade/simulator.hpp"

#include "sigtrade/errors.hpp"
#include "sigtrade/rng.hpp"

#include <cmath>
#include <sstream>
#include <thread>

namespace sigtrade {

namespace {

enum class Kind { single, shared, separate };

/// nu^n = l0 + lq q + lqb q_bar + lv V^n + lvb V_bar; nu_bar law = f1 + f2 q_bar + f3 V_bar.
struct Affine {
    double l0 = 0, lq = 0, lqb = 0, lv = 0, lvb = 0;
    double f1 = 0, f2 = 0, f3 = 0;
};

int step_count(const SimConfig& cfg, double horizon) {
    const double ratio = horizon / cfg.dt;
    const auto n = static_cast<long long>(std::llround(ratio));
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
        std::ostringstream os;
        os << "dt = " << cfg.dt << " does not divide the horizon " << horizon;
        throw ParameterError(os.str());
    }
    return static_cast<int>(n);
}

Affine affine_at(Kind kind, const ModelParams& p, const CoefficientPath& coeffs, double t,
                 double scale) {
    const Eigen::VectorXd c = coeffs.at(t);
    const double two_k = 2 * p.k, kb = p.k_bar, g = p.gamma;
    Affine a;
    switch (kind) {
        case Kind::single:
            a.l0 = scale * (c[1] - g * c[2]) / two_k;
            a.lq = scale * (p.b + 2 * c[3] - g * c[5]) / two_k;
            a.lv = scale * (c[5] - 2 * g * c[4]) / two_k;
            break;
        case Kind::shared: {
            const Eigen::Vector3d f = shared_mean_field_law(p, c);
            a.f1 = f[0], a.f2 = f[1], a.f3 = f[2];
            a.l0 = (c[1] - kb * f[0]) / two_k;
            a.lq = c[4] / p.k;
            a.lqb = (c[7] - kb * f[1]) / two_k;
            a.lvb = (c[8] - kb * f[2]) / two_k;
            break;
        }
        case Kind::separate: {
            const Eigen::Vector3d f = separate_mean_field_law(p, c);
            a.f1 = f[0], a.f2 = f[1], a.f3 = f[2];
            a.l0 = (c[1] - g * c[3] - kb * f[0]) / two_k;
            a.lq = (2 * c[5] - g * c[10]) / two_k;
            a.lqb = (c[9] - g * c[12] - kb * f[1]) / two_k;
            a.lv = (c[10] - 2 * g * c[7]) / two_k;
            a.lvb = (c[11] - g * c[14] - kb * f[2]) / two_k;
            break;
        }
    }
    return a;
}

struct Engine {
    Kind kind;
    ModelParams p;
    InitialDistribution init;
    SimConfig cfg;
    int n_steps;
    std::vector<Affine> table;  // one entry per step node
    std::vector<int> record_steps;
    CounterNormal rng;

    PathRecord run(std::uint64_t path) const;
};

PathRecord Engine::run(std::uint64_t path) const {
    using Stream = CounterNormal::Stream;
    const Eigen::Index N = cfg.n_agents;
    const auto cols = static_cast<Eigen::Index>(record_steps.size());
    const double dt = p.horizon_T / n_steps;
    const double sqdt = std::sqrt(dt);
    const double perp = std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho));
    const bool empirical = cfg.use_empirical_averages;

    PathRecord rec;
    auto& m = rec.market;
    auto& ag = rec.agents;
    for (auto* v : {&m.S, &m.Q_bar, &m.V_bar, &m.nu_bar, &m.W}) v->reserve(cols);
    for (auto* mat : {&ag.Q, &ag.V, &ag.X, &ag.nu, &ag.Z}) mat->resize(N, cols);

    // Initial cross-section: (Q0, V0) Gaussian via a PSD square root.
    const double lqq = std::sqrt(std::max(0.0, init.var_Q0));
    const double lvq = lqq > 0.0 ? init.cov_Q0V0 / lqq : 0.0;
    const double lvv = std::sqrt(std::max(0.0, init.var_V0 - lvq * lvq));

    Eigen::VectorXd Q(N), V(N), X = Eigen::VectorXd::Zero(N), Zc = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd nu(N), dZ(N);
    double common_v = 0.0;
    for (Eigen::Index n = 0; n < N; ++n) {
        const double z1 = rng(Stream::initial_q, path, n, 0);
        const double z2 = rng(Stream::initial_v, path, n, 0);
        Q[n] = init.mean_Q0 + lqq * z1;
        V[n] = init.mean_V0 + (kind == Kind::shared ? 0.0 : lvq * z1 + lvv * z2);
    }
    if (kind == Kind::shared) {
        common_v = init.mean_V0 +
                   std::sqrt(std::max(0.0, init.var_V0)) * rng(Stream::initial_v, path, N, 0);
        V.setConstant(common_v);
    }

    double S = init.S0, W = 0.0;
    double law_q = init.mean_Q0, law_v = kind == Kind::shared ? common_v : init.mean_V0;

    std::size_t next_record = 0;
    for (int i = 0;; ++i) {
        const Affine& a = table[i];
        const double q_bar = empirical ? Q.mean() : law_q;
        double v_bar = 0.0;
        if (kind == Kind::shared)
            v_bar = common_v;
        else if (kind == Kind::separate)
            v_bar = empirical ? V.mean() : law_v;

        nu = (a.l0 + a.lqb * q_bar + a.lvb * v_bar) + a.lq * Q.array() + a.lv * V.array();
        double nu_bar;
        if (kind == Kind::single)
            nu_bar = nu[0];
        else
            nu_bar = empirical ? nu.mean() : a.f1 + a.f2 * q_bar + a.f3 * v_bar;

        if (next_record < record_steps.size() && record_steps[next_record] == i) {
            const auto c = static_cast<Eigen::Index>(next_record++);
            m.S.push_back(S);
            m.Q_bar.push_back(q_bar);
            m.V_bar.push_back(kind == Kind::single ? V[0] : v_bar);
            m.nu_bar.push_back(nu_bar);
            m.W.push_back(W);
            ag.Q.col(c) = Q;
            ag.V.col(c) = V;
            ag.X.col(c) = X;
            ag.nu.col(c) = nu;
            ag.Z.col(c) = Zc;
        }
        if (i == n_steps) break;

        const auto step = static_cast<std::uint64_t>(i);
        const double dW = sqdt * rng(Stream::price, path, 0, step);
        switch (kind) {
            case Kind::shared:
                dZ.setConstant(p.rho * dW + perp * sqdt * rng(Stream::signal_common, path, 0, step));
                break;
            case Kind::single:
            case Kind::separate:
                for (Eigen::Index n = 0; n < N; ++n)
                    dZ[n] = p.rho * dW +
                            perp * sqdt * rng(Stream::signal_idiosyncratic, path, n, step);
                break;
        }

        const double kb = kind == Kind::single ? 0.0 : p.k_bar;
        X.array() -= (S + p.k * nu.array() + kb * nu_bar) * nu.array() * dt;
        Q += nu * dt;
        switch (kind) {
            case Kind::single:
                V.array() += -(p.beta * V.array() + p.gamma * nu.array()) * dt + p.eta * dZ.array();
                break;
            case Kind::shared:
                common_v += -(p.beta * common_v + p.gamma_bar * nu_bar) * dt + p.eta * dZ[0];
                V.setConstant(common_v);
                break;
            case Kind::separate:
                V.array() += -(p.beta * V.array() + p.gamma * nu.array() + p.gamma_bar * nu_bar) * dt +
                             p.eta * dZ.array();
                break;
        }
        if (!empirical) {
            law_q += nu_bar * dt;
            if (kind == Kind::separate)
                law_v += -(p.beta * law_v + (p.gamma + p.gamma_bar) * nu_bar) * dt +
                         p.rho * p.eta * dW;
        }
        S += (p.mu + p.b * nu_bar) * dt + p.sigma * dW;
        W += dW;
        Zc += dZ;
    }
    return rec;
}

Simulation run_engine(Kind kind, const ModelParams& params, const CoefficientPath& coeffs,
                      const InitialDistribution& init, const SimConfig& cfg, double scale) {
    require_valid(params);
    if (const auto r = validate(init); !r.empty()) throw ParameterError(r.front());
    if (const auto r = validate(cfg, params.horizon_T); !r.empty()) throw ParameterError(r.front());
    if (kind == Kind::single && cfg.n_agents != 1)
        throw ParameterError("single-agent simulation requires n_agents = 1");

    Engine eng{kind, params, init, cfg, step_count(cfg, params.horizon_T), {}, {},
               CounterNormal(cfg.seed)};
    if (std::abs(coeffs.grid().horizon() - params.horizon_T) > 1e-12 * params.horizon_T)
        throw ParameterError("coefficient grid horizon differs from horizon_T");

    eng.table.reserve(eng.n_steps + 1);
    for (int i = 0; i <= eng.n_steps; ++i) {
        const double t = i == eng.n_steps ? params.horizon_T
                                          : params.horizon_T * i / static_cast<double>(eng.n_steps);
        eng.table.push_back(affine_at(kind, params, coeffs, t, scale));
    }
    for (int i = 0; i < eng.n_steps; i += cfg.record_stride) eng.record_steps.push_back(i);
    eng.record_steps.push_back(eng.n_steps);

    Simulation sim;
    for (int s : eng.record_steps)
        sim.t.push_back(s == eng.n_steps ? params.horizon_T
                                         : params.horizon_T * s / static_cast<double>(eng.n_steps));
    sim.paths.resize(cfg.n_paths);

    const int workers = std::max(1, std::min(cfg.threads, cfg.n_paths));
    if (workers == 1) {
        for (int j = 0; j < cfg.n_paths; ++j) sim.paths[j] = eng.run(j);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int j = w; j < cfg.n_paths; j += workers) sim.paths[j] = eng.run(j);
            });
        for (auto& th : pool) th.join();
    }
    return sim;
}

}  // namespace

std::vector<std::string> validate(const SimConfig& cfg, double horizon) {
    std::vector<std::string> report;
    if (cfg.n_agents < 1) report.emplace_back("n_agents must be at least 1");
    if (cfg.n_paths < 1) report.emplace_back("n_paths must be at least 1");
    if (cfg.threads < 1) report.emplace_back("threads must be at least 1");
    if (cfg.record_stride < 1) report.emplace_back("record_stride must be at least 1");
    if (!(cfg.dt > 0.0)) {
        report.emplace_back("dt must be positive");
    } else {
        const double ratio = horizon / cfg.dt;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1)
            report.emplace_back("dt must divide horizon_T");
    }
    return report;
}

Eigen::Index Simulation::record_index(double time) const {
    for (std::size_t j = 0; j < t.size(); ++j)
        if (std::abs(t[j] - time) <= 1e-9 * std::max(1.0, std::abs(time)))
            return static_cast<Eigen::Index>(j);
    std::ostringstream os;
    os << "time " << time << " was not recorded";
    throw DomainError(os.str());
}

Simulation simulate_single(const ModelParams& params, const SingleCoefficients& coeffs,
                           const InitialDistribution& init, const SimConfig& cfg,
                           double control_scale) {
    return run_engine(Kind::single, params, coeffs, init, cfg, control_scale);
}

Simulation simulate_shared(const ModelParams& params, const SharedCoefficients& coeffs,
                           const InitialDistribution& init, const SimConfig& cfg) {
    return run_engine(Kind::shared, params, coeffs, init, cfg, 1.0);
}

Simulation simulate_separate(const ModelParams& params, const SeparateCoefficients& coeffs,
                             const InitialDistribution& init, const SimConfig& cfg) {
    return run_engine(Kind::separate, params, coeffs, init, cfg, 1.0);
}

CrossMoments empirical_cross_moments(const AgentPaths& agents, Eigen::Index column) {
    const Eigen::Index N = agents.n_agents();
    if (N < 2) throw ParameterError("cross-sectional covariance needs at least two agents");
    if (column < 0 || column >= agents.Q.cols()) throw DomainError("record column out of range");
    Eigen::MatrixXd Y(N, 2);
    Y.col(0) = agents.Q.col(column);
    Y.col(1) = agents.V.col(column);
    CrossMoments out;
    out.mean = Y.colwise().mean().transpose();
    const Eigen::MatrixXd centered = Y.rowwise() - out.mean.transpose();
    out.cov = centered.transpose() * centered / static_cast<double>(N - 1);
    return out;
}

CrossMoments empirical_cross_moments(const Simulation& sim, std::size_t path, double t) {
    if (path >= sim.paths.size()) throw DomainError("path index out of range");
    return empirical_cross_moments(sim.paths[path].agents, sim.record_index(t));
}

double objective_sample(const PathRecord& path, Eigen::Index agent, const ModelParams& params) {
    const Eigen::Index last = path.agents.Q.cols() - 1;
    const double q = path.agents.Q(agent, last);
    return path.agents.X(agent, last) + q * (path.market.S.back() + path.agents.V(agent, last)) -
           params.alpha * q * q;
}

}  // namespace sigtrade
