#include "sigtrade/figures.hpp"

#include "sigtrade/csv.hpp"
#include "sigtrade/errors.hpp"

#include <string>
#include <type_traits>

namespace sigtrade {

ModelParams single_base_params() {
    ModelParams p;
    p.mu = 0.0;
    p.sigma = 1.0;
    p.eta = 0.5;
    p.beta = 1.0;
    p.gamma = 0.1;
    p.rho = 0.3;
    p.b = 1e-2;
    p.k = 5e-3;
    p.alpha = 0.1;
    p.horizon_T = 1.0;
    return p;
}

ModelParams shared_base_params() {
    ModelParams p = single_base_params();
    p.gamma = 0.0;
    p.gamma_bar = 0.1;
    p.k_bar = 1e-3;
    return p;
}

ModelParams separate_base_params() {
    ModelParams p = shared_base_params();
    p.gamma = 0.05;
    return p;
}

ModelParams moments_base_params() {
    ModelParams p = separate_base_params();
    p.eta = 1.0;
    p.b = 5e-2;
    return p;
}

InitialDistribution moments_base_initial() {
    InitialDistribution init;
    init.var_Q0 = 0.25;
    init.var_V0 = 0.0004;
    return init;
}

namespace {

std::vector<std::string> coefficient_header(int count) {
    std::vector<std::string> h{"t"};
    for (int i = 1; i <= count; ++i) h.push_back("c" + std::to_string(i));
    return h;
}

std::vector<Eigen::VectorXd> coefficient_columns(const CoefficientPath& coeffs) {
    std::vector<Eigen::VectorXd> cols{coeffs.grid().t_values()};
    for (int i = 1; i <= coeffs.components(); ++i) cols.push_back(coeffs.c(i));
    return cols;
}

/// Every node when the grid is coarse, otherwise about a thousand rows.
int output_stride(int n_steps) { return std::max(1, n_steps / 1000); }

bool closed_forms_apply(const ModelParams& p) {
    return p.alpha == 0.0 && p.mu == 0.0 && p.gamma == 0.0 && p.beta > 0.0 && p.b > 0.0 &&
           p.gamma_bar > 0.0;
}

struct MomentCurves {
    std::vector<Mat2> cov;
    Eigen::VectorXd price_var;
};

MomentCurves moment_curves(const ModelParams& params, const Mat2& sigma0, const TimeGrid& grid) {
    const MomentSystem system = build_moment_system(solve_separate(params, grid));
    const FundamentalPair pair = fundamental_pair(system);
    return {covariance_path(system, pair.psi, sigma0), price_variance_path(system, pair.phi)};
}

template <class Loadings>
void write_sweep(const fs::path& file, const std::vector<double>& values, double ModelParams::*field,
                 ModelParams base, int n_steps, bool with_vbar) {
    std::vector<std::string> header{"value", "t", "nu_qbar"};
    if (with_vbar) header.emplace_back("nu_Vbar");
    CsvWriter w(file, header);
    const TimeGrid grid(n_steps, base.horizon_T);
    const int stride = output_stride(n_steps);
    for (double v : values) {
        base.*field = v;
        Loadings l;
        if constexpr (std::is_same_v<Loadings, SharedLoadings>)
            l = loadings_shared(solve_shared(base, grid));
        else
            l = loadings_separate(solve_separate(base, grid));
        for (Eigen::Index i = 0;; i = std::min(i + stride, grid.size() - 1)) {
            if (with_vbar)
                w.row({v, grid.t(i), l.nu_qbar[i], l.nu_Vbar[i]});
            else
                w.row({v, grid.t(i), l.nu_qbar[i]});
            if (i == grid.size() - 1) break;
        }
    }
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
    return out;
}

/// Per-agent rate split into the pieces carried by each state variable.
/// `loading(node)` returns (intercept, q, q_bar, V, V_bar) loadings.
template <class LoadingAt>
fs::path write_contributions(const Simulation& sim, const TimeGrid& grid, LoadingAt loading,
                             const fs::path& file) {
    CsvWriter w(file, {"path_id", "agent_id", "t", "from_intercept", "from_Q", "from_Qbar", "from_V",
                       "from_Vbar", "nu"});
    for (std::size_t p = 0; p < sim.paths.size(); ++p) {
        const auto& rec = sim.paths[p];
        for (Eigen::Index n = 0; n < rec.agents.n_agents(); ++n)
            for (std::size_t j = 0; j < sim.t.size(); ++j) {
                const LoadingPoint l = loading(grid.node_of(sim.t[j]));
                const auto c = static_cast<Eigen::Index>(j);
                w.row({double(p), double(n), sim.t[j], l.intercept, l.nu_q * rec.agents.Q(n, c),
                       l.nu_qbar * rec.market.Q_bar[j], l.nu_V * rec.agents.V(n, c),
                       l.nu_Vbar * rec.market.V_bar[j], rec.agents.nu(n, c)});
            }
    }
    return file;
}

SimConfig figure_sim(int n_agents, const FigureOptions& o) {
    SimConfig cfg;
    cfg.n_agents = n_agents;
    cfg.n_paths = 1;
    cfg.seed = o.seed;
    cfg.dt = 1e-3;
    cfg.threads = o.threads;
    return cfg;
}

}  // namespace

fs::path write_single_coefficients(const SingleCoefficients& coeffs, const fs::path& file) {
    const SingleLoadings l = loadings(coeffs);
    auto header = coefficient_header(6);
    header.insert(header.end(), {"nu_q", "nu_V"});
    auto cols = coefficient_columns(coeffs);
    cols.insert(cols.end(), {l.nu_q, l.nu_V});
    write_columns(file, header, cols);
    return file;
}

fs::path write_shared_coefficients(const SharedCoefficients& coeffs, const fs::path& file) {
    const SharedLoadings l = loadings_shared(coeffs);
    auto header = coefficient_header(10);
    header.insert(header.end(), {"f1", "f2", "f3", "nu_q", "nu_qbar", "nu_Vbar"});
    auto cols = coefficient_columns(coeffs);
    cols.insert(cols.end(), {coeffs.f_path(1), coeffs.f_path(2), coeffs.f_path(3), l.nu_q,
                             l.nu_qbar, l.nu_Vbar});
    write_columns(file, header, cols);
    return file;
}

fs::path write_separate_coefficients(const SeparateCoefficients& coeffs, const fs::path& file) {
    const SeparateLoadings l = loadings_separate(coeffs);
    auto header = coefficient_header(15);
    header.insert(header.end(), {"f1", "f2", "f3", "nu_q", "nu_qbar", "nu_V", "nu_Vbar"});
    auto cols = coefficient_columns(coeffs);
    cols.insert(cols.end(), {coeffs.f_path(1), coeffs.f_path(2), coeffs.f_path(3), l.nu_q,
                             l.nu_qbar, l.nu_V, l.nu_Vbar});
    write_columns(file, header, cols);
    return file;
}

std::vector<fs::path> write_simulation(const Simulation& sim, const fs::path& dir,
                                       const std::string& prefix) {
    const fs::path agents_file = dir / (prefix + "_agents.csv");
    const fs::path market_file = dir / (prefix + "_market.csv");
    const fs::path summary_file = dir / (prefix + "_summary.csv");

    CsvWriter agents(agents_file, {"path_id", "agent_id", "t", "Q", "V", "X", "nu"});
    CsvWriter market(market_file, {"path_id", "t", "S", "Q_bar", "V_bar", "nu_bar"});
    for (std::size_t p = 0; p < sim.paths.size(); ++p) {
        const auto& rec = sim.paths[p];
        for (Eigen::Index n = 0; n < rec.agents.n_agents(); ++n)
            for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(sim.t.size()); ++j)
                agents.row({double(p), double(n), sim.t[j], rec.agents.Q(n, j), rec.agents.V(n, j),
                            rec.agents.X(n, j), rec.agents.nu(n, j)});
        for (std::size_t j = 0; j < sim.t.size(); ++j)
            market.row({double(p), sim.t[j], rec.market.S[j], rec.market.Q_bar[j],
                        rec.market.V_bar[j], rec.market.nu_bar[j]});
    }

    CsvWriter summary(summary_file,
                      {"t", "mean_Q", "mean_V", "var_Q", "var_V", "cov_QV", "mean_S", "var_S"});
    for (std::size_t j = 0; j < sim.t.size(); ++j) {
        const auto c = static_cast<Eigen::Index>(j);
        double sq = 0, sv = 0, sqq = 0, svv = 0, sqv = 0, ss = 0, sss = 0, count = 0;
        for (const auto& rec : sim.paths) {
            ss += rec.market.S[j];
            for (Eigen::Index n = 0; n < rec.agents.n_agents(); ++n) {
                sq += rec.agents.Q(n, c);
                sv += rec.agents.V(n, c);
                count += 1;
            }
        }
        const double mq = sq / count, mv = sv / count;
        const double ms = ss / static_cast<double>(sim.paths.size());
        for (const auto& rec : sim.paths) {
            sss += (rec.market.S[j] - ms) * (rec.market.S[j] - ms);
            for (Eigen::Index n = 0; n < rec.agents.n_agents(); ++n) {
                const double dq = rec.agents.Q(n, c) - mq, dv = rec.agents.V(n, c) - mv;
                sqq += dq * dq;
                svv += dv * dv;
                sqv += dq * dv;
            }
        }
        const double div = std::max(1.0, count - 1);
        const double div_s = std::max(1.0, static_cast<double>(sim.paths.size()) - 1);
        summary.row({sim.t[j], mq, mv, sqq / div, svv / div, sqv / div, ms, sss / div_s});
    }
    return {agents_file, market_file, summary_file};
}

fs::path write_moments(const ModelParams& params, const Mat2& sigma0,
                       const std::vector<double>& rho_values, int n_steps, const fs::path& file) {
    const TimeGrid grid(n_steps, params.horizon_T);
    const bool closed = closed_forms_apply(params);
    std::vector<std::string> header{"rho",     "t",       "Sigma_Q",  "Sigma_V",
                                    "Sigma_QV", "corr_QV", "price_var"};
    if (closed)
        header.insert(header.end(),
                      {"Sigma_Q_closed", "Sigma_V_closed", "Sigma_QV_closed", "price_var_closed"});
    CsvWriter w(file, header);
    const int stride = output_stride(n_steps);
    std::vector<double> row;
    for (double rho : rho_values) {
        ModelParams p = params;
        p.rho = rho;
        const MomentCurves m = moment_curves(p, sigma0, grid);
        for (Eigen::Index i = 0;; i = std::min(i + stride, grid.size() - 1)) {
            const Mat2& s = m.cov[i];
            row = {rho, grid.t(i), s(0, 0), s(1, 1), s(0, 1), correlation(s), m.price_var[i]};
            if (closed) {
                const CovarianceElements e = closed_form_covariance(p, sigma0, grid.t(i));
                row.insert(row.end(), {e.q, e.v, e.qv, price_variance_closed(p, grid.t(i))});
            }
            w.row(row);
            if (i == grid.size() - 1) break;
        }
    }
    return file;
}

fs::path write_price_variance(const ModelParams& params, const std::vector<double>& rho_values,
                              int n_steps, const fs::path& file) {
    const TimeGrid grid(n_steps, params.horizon_T);
    CsvWriter w(file, {"rho", "t", "price_var"});
    const int stride = output_stride(n_steps);
    for (double rho : rho_values) {
        ModelParams p = params;
        p.rho = rho;
        const MomentSystem system = build_moment_system(solve_separate(p, grid));
        const Eigen::VectorXd var = price_variance_path(system, fundamental_pair(system).phi);
        for (Eigen::Index i = 0;; i = std::min(i + stride, grid.size() - 1)) {
            w.row({rho, grid.t(i), var[i]});
            if (i == grid.size() - 1) break;
        }
    }
    return file;
}

std::vector<fs::path> write_figure(int id, const fs::path& dir, const FigureOptions& o) {
    const int n = o.n_steps;
    switch (id) {
        case 1: {
            const ModelParams p = single_base_params();
            const SingleLoadings l = loadings(solve_single(p, TimeGrid(n, p.horizon_T)));
            const fs::path f = dir / "fig1_single_loadings.csv";
            write_columns(f, {"t", "nu_q", "nu_V"}, {TimeGrid(n, p.horizon_T).t_values(), l.nu_q, l.nu_V});
            return {f};
        }
        case 2: {
            const ModelParams p = single_base_params();
            const TimeGrid grid(n, p.horizon_T);
            const SingleCoefficients coeffs = solve_single(p, grid);
            const SingleLoadings l = loadings(coeffs);
            const Simulation sim = simulate_single(p, coeffs, InitialDistribution{}, figure_sim(1, o));
            auto files = write_simulation(sim, dir, "fig2_single");
            files.push_back(write_contributions(
                sim, grid,
                [&](Eigen::Index i) { return LoadingPoint{l.intercept[i], l.nu_q[i], 0.0, l.nu_V[i], 0.0}; },
                dir / "fig2_single_contributions.csv"));
            return files;
        }
        case 3: {
            const ModelParams p = shared_base_params();
            const TimeGrid grid(n, p.horizon_T);
            const SharedLoadings l = loadings_shared(solve_shared(p, grid));
            const fs::path f = dir / "fig3_shared_loadings.csv";
            write_columns(f, {"t", "nu_q", "nu_qbar", "nu_Vbar"},
                          {grid.t_values(), l.nu_q, l.nu_qbar, l.nu_Vbar});
            return {f};
        }
        case 4: {
            const ModelParams p = shared_base_params();
            const fs::path fb = dir / "fig4_shared_sweep_b.csv";
            const fs::path fg = dir / "fig4_shared_sweep_gamma_bar.csv";
            write_sweep<SharedLoadings>(fb, linspace(0.0, 0.05, 6), &ModelParams::b, p, n, false);
            write_sweep<SharedLoadings>(fg, linspace(0.0, 0.5, 6), &ModelParams::gamma_bar, p, n, false);
            return {fb, fg};
        }
        case 5: {
            const ModelParams p = shared_base_params();
            const TimeGrid grid(n, p.horizon_T);
            const SharedCoefficients coeffs = solve_shared(p, grid);
            const SharedLoadings l = loadings_shared(coeffs);
            InitialDistribution init;
            init.var_Q0 = 0.25;
            const Simulation sim = simulate_shared(p, coeffs, init, figure_sim(50, o));
            auto files = write_simulation(sim, dir, "fig5_shared");
            files.push_back(write_contributions(
                sim, grid,
                [&](Eigen::Index i) {
                    return LoadingPoint{l.intercept[i], l.nu_q[i], l.nu_qbar[i], 0.0, l.nu_Vbar[i]};
                },
                dir / "fig5_shared_contributions.csv"));

            const ModelParams ps = separate_base_params();
            const SeparateLoadings ls = loadings_separate(solve_separate(ps, grid));
            const fs::path f = dir / "fig5_separate_loadings.csv";
            write_columns(f, {"t", "nu_q", "nu_qbar", "nu_V", "nu_Vbar"},
                          {grid.t_values(), ls.nu_q, ls.nu_qbar, ls.nu_V, ls.nu_Vbar});
            files.push_back(f);
            return files;
        }
        case 6: {
            const ModelParams p = separate_base_params();
            const fs::path fb = dir / "fig6_separate_sweep_b.csv";
            const fs::path fg = dir / "fig6_separate_sweep_gamma.csv";
            const fs::path fgb = dir / "fig6_separate_sweep_gamma_bar.csv";
            write_sweep<SeparateLoadings>(fb, linspace(0.0, 0.05, 6), &ModelParams::b, p, n, true);
            write_sweep<SeparateLoadings>(fg, linspace(0.0, 0.1, 6), &ModelParams::gamma, p, n, true);
            write_sweep<SeparateLoadings>(fgb, linspace(0.0, 0.5, 6), &ModelParams::gamma_bar, p, n, true);
            return {fb, fg, fgb};
        }
        case 7: {
            const ModelParams p = separate_base_params();
            const TimeGrid grid(n, p.horizon_T);
            const SeparateCoefficients coeffs = solve_separate(p, grid);
            const SeparateLoadings l = loadings_separate(coeffs);
            InitialDistribution init;
            init.var_Q0 = 0.25;
            init.var_V0 = 0.0004;
            const Simulation sim = simulate_separate(p, coeffs, init, figure_sim(50, o));
            auto files = write_simulation(sim, dir, "fig7_separate");
            files.push_back(write_contributions(
                sim, grid,
                [&](Eigen::Index i) {
                    return LoadingPoint{l.intercept[i], l.nu_q[i], l.nu_qbar[i], l.nu_V[i], l.nu_Vbar[i]};
                },
                dir / "fig7_separate_contributions.csv"));
            return files;
        }
        case 8:
            return {write_moments(moments_base_params(), moments_base_initial().covariance(),
                                  {0.0, 0.25, 0.5, 0.75, 1.0}, n, dir / "fig8_moments.csv")};
        case 9:
            return {write_price_variance(moments_base_params(), {-1.0, -0.5, 0.0, 0.5, 1.0}, n,
                                         dir / "fig9_price_variance.csv")};
        default:
            throw ParameterError("figure id must be 1-9, got " + std::to_string(id));
    }
}

}  // namespace sigtrade
