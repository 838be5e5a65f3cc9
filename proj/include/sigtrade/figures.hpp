#pragma once

// CSV emitters shared by the CLI subcommands, plus the parameter sets and
// drivers that regenerate each figure's data series.
//
//   id  content
//   1   single-agent loadings on Q and V
//   2   single-agent simulated path and rate contributions
//   3   shared-signal loadings
//   4   shared Q_bar loading swept over b and gamma_bar
//   5   shared-signal N = 50 simulation; separate-signal loadings
//   6   separate Q_bar and V_bar loadings swept over b, gamma, gamma_bar
//   7   separate-signal N = 50 simulation
//   8   mean-field cross-sectional moments for several rho
//   9   price variance through time for several rho

#include "sigtrade/cross_section.hpp"
#include "sigtrade/mfg_separate.hpp"
#include "sigtrade/mfg_shared.hpp"
#include "sigtrade/model.hpp"
#include "sigtrade/simulator.hpp"
#include "sigtrade/single_agent.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace sigtrade {

namespace fs = std::filesystem;

/// Single-agent base case: mu 0, sigma 1, eta 0.5, beta 1, gamma 0.1,
/// rho 0.3, b 1e-2, k 5e-3, alpha 0.1, T 1.
ModelParams single_base_params();
/// Base case with gamma_bar 0.1, k_bar 1e-3 and gamma 0.
ModelParams shared_base_params();
/// Shared base case with gamma 0.05.
ModelParams separate_base_params();
/// Separate base case with eta 1 and b 5e-2 (moments and price variance).
ModelParams moments_base_params();
/// Q0 ~ N(0, 0.5^2), V0 ~ N(0, 0.02^2), independent.
InitialDistribution moments_base_initial();

fs::path write_single_coefficients(const SingleCoefficients& coeffs, const fs::path& file);
fs::path write_shared_coefficients(const SharedCoefficients& coeffs, const fs::path& file);
fs::path write_separate_coefficients(const SeparateCoefficients& coeffs, const fs::path& file);

/// `<prefix>_agents.csv`, `<prefix>_market.csv` and `<prefix>_summary.csv`.
/// The summary pools every (path, agent) pair at each recorded time.
std::vector<fs::path> write_simulation(const Simulation& sim, const fs::path& dir,
                                       const std::string& prefix);

/// Rows (rho, t, Sigma_Q, Sigma_V, Sigma_QV, corr_QV, price_var) per rho, from
/// the separate-signal equilibrium. Closed-form columns are appended when
/// alpha = mu = gamma = 0 and beta, b, gamma_bar > 0.
fs::path write_moments(const ModelParams& params, const Mat2& sigma0,
                       const std::vector<double>& rho_values, int n_steps, const fs::path& file);

/// Rows (rho, t, price_var) per rho.
fs::path write_price_variance(const ModelParams& params, const std::vector<double>& rho_values,
                              int n_steps, const fs::path& file);

struct FigureOptions {
    int n_steps = kDefaultSteps;
    std::uint64_t seed = 20240101;
    int threads = 1;
};

/// Writes the data behind figure `id` (1-9) into `dir`; returns the files.
/// Throws ParameterError for an unknown id.
std::vector<fs::path> write_figure(int id, const fs::path& dir, const FigureOptions& options = {});

}  // namespace sigtrade
