#pragma once

// Cross-sectional law of (Q^n, V^n) when every agent follows the
// separate-signal equilibrium strategy, and the induced price variance.
// The shared-signal case is the special case gamma = 0, rho = +-1 with a
// degenerate initial signal distribution.

#include "sigtrade/mfg_separate.hpp"
#include "sigtrade/ode.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace sigtrade {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using MatrixPath = ode::MatrixPath<double>;

/// dY^n = (a + B Y^n + (C - B) Y_bar) dt + Theta dZ^n
/// dY_bar = (a + C Y_bar) dt + rho Theta dW
struct MomentSystem {
    SeparateCoefficients coeffs;
    std::vector<Vec2> a;  ///< node values
    std::vector<Mat2> B;
    std::vector<Mat2> C;
    Vec2 theta;  ///< (0, eta)

    const TimeGrid& grid() const { return coeffs.grid(); }
    const ModelParams& params() const { return coeffs.params; }

    /// Sub-grid evaluation from Hermite-interpolated coefficients.
    Vec2 a_at(double t) const;
    Mat2 B_at(double t) const;
    Mat2 C_at(double t) const;
};

MomentSystem build_moment_system(const SeparateCoefficients& coeffs);

struct FundamentalPair {
    MatrixPath phi;  ///< Phi' = C Phi, Phi_0 = I
    MatrixPath psi;  ///< Psi' = B Psi, Psi_0 = I
};

FundamentalPair fundamental_pair(const MomentSystem& system);

/// Population mean Y_bar at every node for one common-noise path.
/// `dW` holds one increment per grid step; both integrals use left-point sums.
std::vector<Vec2> mean_path(const MomentSystem& system, const MatrixPath& phi,
                            std::span<const double> dW, const Vec2& y0_bar);

/// Cross-sectional covariance at every node.
std::vector<Mat2> covariance_path(const MomentSystem& system, const MatrixPath& psi,
                                  const Mat2& sigma0);

struct CovarianceElements {
    double q, v, qv;
};

/// Closed-form covariance for mu = alpha = gamma = 0; requires beta > 0.
CovarianceElements closed_form_covariance(const ModelParams& params, const Mat2& sigma0,
                                          double t);

/// Var(S_t) by Simpson quadrature over grid nodes; t must be a grid node.
double price_variance(const MomentSystem& system, const MatrixPath& phi, double t);

/// Var(S_t) at every node from running integrals of the same integrand.
Eigen::VectorXd price_variance_path(const MomentSystem& system, const MatrixPath& phi);

/// Var(S_t) from the closed-form integrand for mu = alpha = gamma = 0.
double price_variance_closed(const ModelParams& params, double t, int quadrature_intervals = 4000);

/// Correlation of a 2x2 covariance; zero when either variance vanishes.
double correlation(const Mat2& cov);

}  // namespace sigtrade
