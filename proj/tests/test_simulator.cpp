#include "test_support.hpp"

#include "sigtrade/cross_section.hpp"
#include "sigtrade/errors.hpp"
#include "sigtrade/simulator.hpp"

#include <doctest.h>

using namespace sigtrade;

namespace {
const TimeGrid kGrid(kDefaultSteps, 1.0);

SimConfig config(int agents, int paths, std::uint64_t seed, int stride = 1) {
    SimConfig c;
    c.n_agents = agents;
    c.n_paths = paths;
    c.seed = seed;
    c.record_stride = stride;
    return c;
}

InitialDistribution spread_initial() {
    InitialDistribution init;
    init.mean_Q0 = 1.0;
    init.var_Q0 = 0.25;
    init.var_V0 = 0.0004;
    return init;
}

bool same(const Simulation& a, const Simulation& b) {
    if (a.t != b.t || a.paths.size() != b.paths.size()) return false;
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        const auto &x = a.paths[i], &y = b.paths[i];
        if (x.market.S != y.market.S || x.market.Q_bar != y.market.Q_bar ||
            x.market.V_bar != y.market.V_bar || x.market.nu_bar != y.market.nu_bar)
            return false;
        if (x.agents.Q != y.agents.Q || x.agents.V != y.agents.V || x.agents.X != y.agents.X ||
            x.agents.nu != y.agents.nu)
            return false;
    }
    return true;
}
}  // namespace

TEST_CASE("results do not depend on the thread count") {
    const auto p = separate_base_params();
    const auto coeffs = solve_separate(p, kGrid);
    auto serial = config(20, 5, 11, 10);
    auto threaded = serial;
    threaded.threads = 3;
    const auto a = simulate_separate(p, coeffs, spread_initial(), serial);
    CHECK(same(a, simulate_separate(p, coeffs, spread_initial(), threaded)));
    CHECK(same(a, simulate_separate(p, coeffs, spread_initial(), serial)));
    auto reseeded = serial;
    reseeded.seed = 12;
    CHECK_FALSE(same(a, simulate_separate(p, coeffs, spread_initial(), reseeded)));
}

TEST_CASE("recorded times and aggregates") {
    const auto p = shared_base_params();
    const auto coeffs = solve_shared(p, kGrid);
    const auto sim = simulate_shared(p, coeffs, spread_initial(), config(8, 2, 3, 300));
    REQUIRE(sim.t.size() == 5);
    CHECK(sim.t.front() == 0.0);
    CHECK(sim.t[3] == doctest::Approx(0.9));
    CHECK(sim.t.back() == 1.0);
    CHECK(sim.record_index(1.0) == 4);
    CHECK_THROWS_AS(sim.record_index(0.5), DomainError);

    for (const auto& path : sim.paths)
        for (Eigen::Index c = 0; c < path.agents.Q.cols(); ++c) {
            CHECK(std::abs(path.agents.nu.col(c).mean() - path.market.nu_bar[c]) < 1e-12);
            CHECK(std::abs(path.agents.Q.col(c).mean() - path.market.Q_bar[c]) < 1e-12);
            // Everyone reads the same signal.
            CHECK((path.agents.V.col(c).array() == path.market.V_bar[c]).all());
        }
    CHECK(sim.paths[0].market.S[0] == 100.0);
    CHECK((sim.paths[0].agents.X.col(0).array() == 0.0).all());
}

TEST_CASE("without noise or inventory nothing moves") {
    auto p = separate_base_params();
    p.sigma = 0.0;
    p.eta = 0.0;
    const auto coeffs = solve_separate(p, kGrid);
    const auto sim = simulate_separate(p, coeffs, InitialDistribution{}, config(4, 2, 5));
    for (const auto& path : sim.paths) {
        CHECK(support::max_abs(Eigen::Map<const Eigen::VectorXd>(path.market.S.data(), path.market.S.size()).array() - 100.0) == 0.0);
        CHECK(path.agents.Q.cwiseAbs().maxCoeff() == 0.0);
        CHECK(path.agents.V.cwiseAbs().maxCoeff() == 0.0);
        CHECK(path.agents.nu.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("perfectly correlated signals without own impact coincide") {
    auto p = separate_base_params();
    p.rho = 1.0;
    p.gamma = 0.0;
    auto init = spread_initial();
    init.var_V0 = 0.0;
    const auto sim = simulate_separate(p, solve_separate(p, kGrid), init, config(10, 2, 9));
    double gap = 0;
    for (const auto& path : sim.paths)
        for (Eigen::Index c = 0; c < path.agents.V.cols(); ++c)
            gap = std::max(gap, (path.agents.V.col(c).array() - path.market.V_bar[c]).abs().maxCoeff());
    CHECK(gap < 1e-12);
}

TEST_CASE("empirical cross moments") {
    AgentPaths a;
    a.Q.resize(2, 1);
    a.V.resize(2, 1);
    a.Q << 1.0, -1.0;
    a.V << 0.5, 0.5;
    const auto m = empirical_cross_moments(a, 0);
    CHECK(m.mean == Eigen::Vector2d(0.0, 0.5));
    CHECK(m.cov(0, 0) == 2.0);
    CHECK(m.cov(1, 1) == 0.0);
    CHECK(m.cov(0, 1) == 0.0);
    CHECK_THROWS_AS(empirical_cross_moments(a, 1), DomainError);
    AgentPaths lone;
    lone.Q.resize(1, 1);
    lone.V.resize(1, 1);
    CHECK_THROWS_AS(empirical_cross_moments(lone, 0), ParameterError);
}

TEST_CASE("idle agent keeps its inventory") {
    const auto p = single_base_params();
    InitialDistribution init;
    init.mean_Q0 = 2.0;
    init.mean_V0 = 0.1;
    const auto sim = simulate_single(p, solve_single(p, kGrid), init, config(1, 3, 4), 0.0);
    for (const auto& path : sim.paths) {
        const Eigen::Index last = path.agents.Q.cols() - 1;
        CHECK(path.agents.Q(0, last) == 2.0);
        CHECK(path.agents.X(0, last) == 0.0);
        const double expected = 2.0 * (path.market.S.back() + path.agents.V(0, last)) - p.alpha * 4.0;
        CHECK(objective_sample(path, 0, p) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("shared-signal inventories concentrate at the feedback rate") {
    const auto p = shared_base_params();
    const auto coeffs = solve_shared(p, kGrid);
    const auto sim = simulate_shared(p, coeffs, spread_initial(), config(400, 1, 21, 100));
    const double ratio = empirical_cross_moments(sim, 0, 1.0).cov(0, 0) /
                         empirical_cross_moments(sim, 0, 0.0).cov(0, 0);
    // Q^n - Q_bar decays like exp(int c5 / k): all agents share the signal.
    const auto nu_q = loadings_shared(coeffs).nu_q;
    std::vector<double> rate(nu_q.data(), nu_q.data() + nu_q.size());
    const double expected = std::exp(2 * ode::simpson_samples<double>(rate, kGrid.step()));
    CHECK(ratio < 0.5);
    CHECK(std::abs(ratio / expected - 1.0) < 0.02);
}

TEST_CASE("large population matches the mean-field covariance") {
    auto p = moments_base_params();
    p.rho = 0.5;
    const auto init = moments_base_initial();
    const auto coeffs = solve_separate(p, kGrid);
    const auto sim = simulate_separate(p, coeffs, init, config(10000, 1, 2024, 500));
    const auto sys = build_moment_system(coeffs);
    const auto cov = covariance_path(sys, fundamental_pair(sys).psi, init.covariance());
    for (double t : {0.5, 1.0}) {
        const Mat2 mf = cov[kGrid.node_of(t)];
        const Mat2 emp = empirical_cross_moments(sim, 0, t).cov;
        CHECK(std::abs(emp(0, 0) / mf(0, 0) - 1.0) < 0.05);
        CHECK(std::abs(emp(1, 1) / mf(1, 1) - 1.0) < 0.05);
        CHECK(std::abs(emp(0, 1) / mf(0, 1) - 1.0) < 0.05);
    }
}

TEST_CASE("deterministic run attains the value function") {
    auto p = single_base_params();
    p.sigma = 0.0;
    p.eta = 0.0;
    InitialDistribution init;
    init.mean_Q0 = 1.5;
    init.mean_V0 = 0.2;
    auto cfg = config(1, 1, 1);
    cfg.dt = 1e-4;
    const auto coeffs = solve_single(p, kGrid);
    const auto sim = simulate_single(p, coeffs, init, cfg);
    const double achieved = objective_sample(sim.paths[0], 0, p);
    CHECK(std::abs(achieved - value_function(coeffs, 0.0, 0.0, 1.5, init.S0, 0.2)) < 1e-3);
    // Any other scaling of the optimal rate does worse.
    for (double scale : {0.8, 1.2})
        CHECK(objective_sample(simulate_single(p, coeffs, init, cfg, scale).paths[0], 0, p) < achieved);
}

TEST_CASE("invalid configurations are rejected") {
    const auto p = single_base_params();
    const auto coeffs = solve_single(p, kGrid);
    auto cfg = config(2, 1, 0);
    CHECK_THROWS_AS(simulate_single(p, coeffs, {}, cfg), ParameterError);
    cfg = config(1, 1, 0);
    cfg.dt = 0.3;
    CHECK_THROWS_AS(simulate_single(p, coeffs, {}, cfg), ParameterError);
    cfg = config(1, 0, 0);
    CHECK_THROWS_AS(simulate_single(p, coeffs, {}, cfg), ParameterError);
    CHECK_FALSE(validate(config(1, 1, 0), 1.0).size());
}
