#pragma once

#include "sigtrade/model.hpp"
#include "sigtrade/ode.hpp"

#include <Eigen/Dense>

namespace sigtrade {

/// Time-gridded solution of a Riccati coefficient system. Components are
/// addressed 1-based, matching the conventional c_1, c_2, ... labels.
struct CoefficientPath {
    ModelParams params;
    ode::Trajectory<double> trajectory;

    const TimeGrid& grid() const { return trajectory.grid; }
    Eigen::Index nodes() const { return trajectory.values.rows(); }
    Eigen::Index components() const { return trajectory.values.cols(); }

    double operator()(int index, Eigen::Index node) const {
        return trajectory.values(node, index - 1);
    }
    Eigen::VectorXd c(int index) const { return trajectory.values.col(index - 1); }

    /// All components at time t, linearly interpolated between nodes.
    /// Throws DomainError outside [0, T].
    Eigen::VectorXd at(double t) const { return trajectory.at_linear(t); }

    /// All components at time t by cubic Hermite interpolation.
    Eigen::VectorXd smooth_at(double t) const { return trajectory.at_hermite(t); }
};

/// Shorthand for reading c_i out of a 0-based state vector.
inline double comp(const Eigen::VectorXd& c, int index) { return c[index - 1]; }

}  // namespace sigtrade
