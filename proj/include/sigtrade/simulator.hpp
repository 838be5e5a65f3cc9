#pragma once

// Finite-N Euler-Maruyama simulation of agents following equilibrium
// feedback strategies.
//
//   dS   = (mu + b nu_bar) dt + sigma dW
//   dQ^n = nu^n dt
//   dX^n = -(S + k nu^n + k_bar nu_bar) nu^n dt
//   dV^n = -(beta V^n + gamma nu^n + gamma_bar nu_bar) dt + eta dZ^n
//   Z^n  = rho W + sqrt(1 - rho^2) W^{n,perp}
//
// In the shared model all agents see one signal driven by a single Z.

#include "sigtrade/mfg_separate.hpp"
#include "sigtrade/mfg_shared.hpp"
#include "sigtrade/model.hpp"
#include "sigtrade/single_agent.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace sigtrade {

struct SimConfig {
    int n_agents = 1;
    int n_paths = 1;
    std::uint64_t seed = 0;
    double dt = 1e-3;
    /// true: agents react to the empirical Q_bar, V_bar, nu_bar of the N
    /// simulated agents. false: aggregates follow the mean-field law.
    bool use_empirical_averages = true;
    int threads = 1;
    /// Record every `record_stride`-th step; the terminal step is always kept.
    int record_stride = 1;
};

std::vector<std::string> validate(const SimConfig& cfg, double horizon);

/// Market-level series at the recorded nodes. `W` is the cumulative price
/// Brownian motion, so increments between records are differences.
struct MarketPath {
    std::vector<double> S, Q_bar, V_bar, nu_bar, W;
};

/// Agent-level series: rows are agents, columns recorded nodes. `Z` is the
/// cumulative signal noise each agent observes.
struct AgentPaths {
    Eigen::MatrixXd Q, V, X, nu, Z;
    Eigen::Index n_agents() const { return Q.rows(); }
};

struct PathRecord {
    MarketPath market;
    AgentPaths agents;
};

struct Simulation {
    std::vector<double> t;  ///< recorded times
    std::vector<PathRecord> paths;

    /// Column index of recorded time `time`; throws DomainError if absent.
    Eigen::Index record_index(double time) const;
};

/// One agent trading alone: its own rate is the aggregate rate, so it moves
/// the price through b and its signal through gamma. `control_scale`
/// multiplies the optimal rate (1 = optimal). Requires n_agents == 1.
Simulation simulate_single(const ModelParams& params, const SingleCoefficients& coeffs,
                           const InitialDistribution& init, const SimConfig& cfg,
                           double control_scale = 1.0);

Simulation simulate_shared(const ModelParams& params, const SharedCoefficients& coeffs,
                           const InitialDistribution& init, const SimConfig& cfg);

Simulation simulate_separate(const ModelParams& params, const SeparateCoefficients& coeffs,
                             const InitialDistribution& init, const SimConfig& cfg);

struct CrossMoments {
    Eigen::Vector2d mean;  ///< (Q, V)
    Eigen::Matrix2d cov;   ///< unbiased, divisor N - 1
};

/// Sample moments of (Q^n, V^n) across agents at recorded column `column`.
CrossMoments empirical_cross_moments(const AgentPaths& agents, Eigen::Index column);

/// Same, looking up the recorded time `t`.
CrossMoments empirical_cross_moments(const Simulation& sim, std::size_t path, double t);

/// X_T + Q_T (S_T + V_T) - alpha Q_T^2 for one agent on one path.
double objective_sample(const PathRecord& path, Eigen::Index agent, const ModelParams& params);

}  // namespace sigtrade
