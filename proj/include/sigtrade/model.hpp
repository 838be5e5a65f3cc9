#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace sigtrade {

/// Market and preference constants shared by every model variant.
///
/// Units: prices in currency per share, rates in shares per unit time.
/// `gamma` acts on an agent's own signal and `gamma_bar` on the aggregate
/// order flow; the shared-signal model ignores `gamma`.
struct ModelParams {
    double mu = 0.0;         ///< price drift
    double sigma = 0.0;      ///< price volatility
    double eta = 0.0;        ///< signal volatility
    double beta = 0.0;       ///< signal mean-reversion rate
    double gamma = 0.0;      ///< own-trade signal impact
    double gamma_bar = 0.0;  ///< aggregate-trade signal impact
    double rho = 0.0;        ///< signal/price noise correlation
    double b = 0.0;          ///< permanent price impact
    double k = 0.0;          ///< temporary own impact
    double k_bar = 0.0;      ///< temporary aggregate impact
    double alpha = 0.0;      ///< terminal inventory penalty
    double horizon_T = 1.0;
};

struct DerivedConstants {
    double kappa;  ///< 2k + k_bar
    double z;      ///< (kappa*beta - b) / (2*gamma_bar)
    double omega;  ///< (kappa*beta - b) / kappa
};

/// Law of the initial cross-section: (Q0, V0) jointly Gaussian, S0 fixed.
struct InitialDistribution {
    double mean_Q0 = 0.0;
    double var_Q0 = 0.0;
    double mean_V0 = 0.0;
    double var_V0 = 0.0;
    double cov_Q0V0 = 0.0;
    double S0 = 100.0;

    Eigen::Vector2d mean() const { return {mean_Q0, mean_V0}; }
    Eigen::Matrix2d covariance() const {
        Eigen::Matrix2d m;
        m << var_Q0, cov_Q0V0, cov_Q0V0, var_V0;
        return m;
    }
};

/// Uniform grid on [0, T]; t(0) == 0 and t(n_steps) == T exactly.
class TimeGrid {
public:
    TimeGrid(int n_steps, double horizon);

    int n_steps() const noexcept { return n_steps_; }
    Eigen::Index size() const noexcept { return n_steps_ + 1; }
    double horizon() const noexcept { return horizon_; }
    double step() const noexcept { return horizon_ / n_steps_; }
    double t(Eigen::Index i) const noexcept {
        return i == n_steps_ ? horizon_ : horizon_ * static_cast<double>(i) / n_steps_;
    }
    Eigen::VectorXd t_values() const;

    /// Index of the node equal to `time` up to a relative 1e-9 slack.
    /// Throws DomainError if `time` is not a node.
    Eigen::Index node_of(double time) const;

private:
    int n_steps_;
    double horizon_;
};

constexpr int kDefaultSteps = 10000;

/// Empty when the parameters are admissible; otherwise one message per violation.
std::vector<std::string> validate(const ModelParams& params);
std::vector<std::string> validate(const InitialDistribution& init);

/// Throws ParameterError listing every violation.
void require_valid(const ModelParams& params);

/// Throws ParameterError when gamma_bar == 0 (z undefined) or kappa <= 0.
DerivedConstants derived_constants(const ModelParams& params);

}  // namespace sigtrade
