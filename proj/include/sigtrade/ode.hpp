#pragma once

// Numerical kernels shared by the solvers: fixed-step RK4 for terminal-value
// problems, fundamental matrices of 2x2 linear time-varying systems, and
// composite Simpson quadrature. Everything here is header-only and templated
// on the state scalar; time is always double.

#include "sigtrade/errors.hpp"
#include "sigtrade/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <vector>

namespace sigtrade::ode {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Components larger than this abort the integration.
inline constexpr double kBlowupThreshold = 1e12;

/// Determinants smaller than this abort a fundamental-matrix solve.
inline constexpr double kSingularDeterminant = 1e-12;

/// dy/dt = rhs(t, y), writing into `dy`.
template <typename Scalar>
struct VectorField {
    Eigen::Index dimension;
    std::function<void(double, const Vector<Scalar>&, Vector<Scalar>&)> rhs;

    Vector<Scalar> operator()(double t, const Vector<Scalar>& y) const {
        Vector<Scalar> dy(dimension);
        rhs(t, y, dy);
        return dy;
    }
};

namespace detail {

template <typename Derived>
bool within_bounds(const Eigen::MatrixBase<Derived>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double v = static_cast<double>(m(i, j));
            if (!std::isfinite(v) || std::abs(v) > kBlowupThreshold) return false;
        }
    return true;
}

[[noreturn]] inline void throw_blowup(double t) {
    std::ostringstream os;
    os.precision(17);
    os << "integration blow-up: non-finite or exploding state at t = " << t;
    throw IntegrationBlowup(t, os.str());
}

/// Segment index i with t in [t_i, t_{i+1}] and the local coordinate s in [0, 1].
inline std::pair<Eigen::Index, double> locate(const TimeGrid& grid, double t) {
    const double slack = 1e-12 * grid.horizon();
    if (!(t >= -slack && t <= grid.horizon() + slack)) {
        std::ostringstream os;
        os << "time " << t << " outside [0, " << grid.horizon() << "]";
        throw DomainError(os.str());
    }
    const double x = std::clamp(t / grid.step(), 0.0, static_cast<double>(grid.n_steps()));
    const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(x), grid.n_steps() - 1);
    return {i, x - static_cast<double>(i)};
}

}  // namespace detail

/// States on a time grid. Row i of `values` is the state at node i and row i
/// of `derivatives` the vector field evaluated there.
template <typename Scalar>
struct Trajectory {
    using Rows = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    TimeGrid grid;
    Rows values;
    Rows derivatives;

    Eigen::Index dimension() const { return values.cols(); }

    /// Piecewise-linear interpolation between nodes.
    Vector<Scalar> at_linear(double t) const {
        const auto [i, s] = detail::locate(grid, t);
        if (s == 0.0) return values.row(i).transpose();
        return ((1.0 - s) * values.row(i) + s * values.row(i + 1)).transpose();
    }

    /// Cubic Hermite interpolation using the stored node derivatives; matches
    /// the O(h^4) accuracy of the RK4 nodes.
    Vector<Scalar> at_hermite(double t) const {
        const auto [i, s] = detail::locate(grid, t);
        if (s == 0.0) return values.row(i).transpose();
        const double h = grid.step();
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        return (h00 * values.row(i) + (h10 * h) * derivatives.row(i) + h01 * values.row(i + 1) +
                (h11 * h) * derivatives.row(i + 1))
            .transpose();
    }

    /// Time derivative of the Hermite interpolant.
    Vector<Scalar> slope_hermite(double t) const {
        const auto [i, s] = detail::locate(grid, t);
        const double h = grid.step();
        const double s2 = s * s;
        const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
        const double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
        return (d00 * values.row(i) + d10 * derivatives.row(i) + d01 * values.row(i + 1) +
                d11 * derivatives.row(i + 1))
            .transpose();
    }
};

/// Solves y' = f(t, y), y(T) = terminal_value, on `grid` with classical RK4
/// stepping from T down to 0. The returned trajectory is indexed forward in
/// time and its last row equals `terminal_value` bit for bit.
template <typename Scalar>
Trajectory<Scalar> integrate_backward(const VectorField<Scalar>& field,
                                      const Vector<Scalar>& terminal_value,
                                      const TimeGrid& grid) {
    if (terminal_value.size() != field.dimension)
        throw ParameterError("terminal value dimension does not match the vector field");

    const Eigen::Index n = grid.n_steps();
    const Eigen::Index dim = field.dimension;
    Trajectory<Scalar> out{grid, typename Trajectory<Scalar>::Rows(n + 1, dim),
                           typename Trajectory<Scalar>::Rows(n + 1, dim)};

    Vector<Scalar> y = terminal_value;
    Vector<Scalar> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    out.values.row(n) = y.transpose();

    for (Eigen::Index i = n; i > 0; --i) {
        const double t1 = grid.t(i), t0 = grid.t(i - 1);
        const double h = t1 - t0;
        const double tm = t1 - 0.5 * h;
        field.rhs(t1, y, k1);
        out.derivatives.row(i) = k1.transpose();
        tmp = y - (0.5 * h) * k1;
        field.rhs(tm, tmp, k2);
        tmp = y - (0.5 * h) * k2;
        field.rhs(tm, tmp, k3);
        tmp = y - h * k3;
        field.rhs(t0, tmp, k4);
        y -= (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!detail::within_bounds(y)) detail::throw_blowup(t0);
        out.values.row(i - 1) = y.transpose();
    }
    field.rhs(grid.t(0), y, k1);
    out.derivatives.row(0) = k1.transpose();
    return out;
}

/// Forward counterpart of integrate_backward with y(0) given.
template <typename Scalar>
Trajectory<Scalar> integrate_forward(const VectorField<Scalar>& field,
                                     const Vector<Scalar>& initial_value, const TimeGrid& grid) {
    if (initial_value.size() != field.dimension)
        throw ParameterError("initial value dimension does not match the vector field");

    const Eigen::Index n = grid.n_steps();
    const Eigen::Index dim = field.dimension;
    Trajectory<Scalar> out{grid, typename Trajectory<Scalar>::Rows(n + 1, dim),
                           typename Trajectory<Scalar>::Rows(n + 1, dim)};

    Vector<Scalar> y = initial_value;
    Vector<Scalar> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    out.values.row(0) = y.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t0 = grid.t(i), t1 = grid.t(i + 1);
        const double h = t1 - t0;
        const double tm = t0 + 0.5 * h;
        field.rhs(t0, y, k1);
        out.derivatives.row(i) = k1.transpose();
        tmp = y + (0.5 * h) * k1;
        field.rhs(tm, tmp, k2);
        tmp = y + (0.5 * h) * k2;
        field.rhs(tm, tmp, k3);
        tmp = y + h * k3;
        field.rhs(t1, tmp, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!detail::within_bounds(y)) detail::throw_blowup(t1);
        out.values.row(i + 1) = y.transpose();
    }
    field.rhs(grid.t(n), y, k1);
    out.derivatives.row(n) = k1.transpose();
    return out;
}

/// Inverse of a 2x2 matrix by the adjugate formula.
template <typename Scalar>
Matrix2<Scalar> inverse2(const Matrix2<Scalar>& m) {
    const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (!(std::abs(static_cast<double>(det)) >= kSingularDeterminant))
        throw SingularMatrix("2x2 matrix is singular (|det| < 1e-12)");
    Matrix2<Scalar> adj;
    adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return adj / det;
}

/// Node values of a 2x2 matrix function together with their inverses.
template <typename Scalar>
struct MatrixPath {
    TimeGrid grid;
    std::vector<Matrix2<Scalar>> values;
    std::vector<Matrix2<Scalar>> inverses;

    const Matrix2<Scalar>& operator[](Eigen::Index i) const { return values[i]; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(values.size()); }
};

/// Solves F' = A(t) F, F(0) = I with RK4 on `grid`; also inverts every node.
template <typename Scalar>
MatrixPath<Scalar> fundamental_matrix(const std::function<Matrix2<Scalar>(double)>& coeff,
                                      const TimeGrid& grid) {
    const Eigen::Index n = grid.n_steps();
    MatrixPath<Scalar> out{grid, {}, {}};
    out.values.reserve(n + 1);
    out.inverses.reserve(n + 1);

    Matrix2<Scalar> f = Matrix2<Scalar>::Identity();
    out.values.push_back(f);
    out.inverses.push_back(f);

    Matrix2<Scalar> a0 = coeff(grid.t(0));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t0 = grid.t(i), t1 = grid.t(i + 1);
        const double h = t1 - t0;
        const Matrix2<Scalar> am = coeff(t0 + 0.5 * h);
        const Matrix2<Scalar> a1 = coeff(t1);
        const Matrix2<Scalar> k1 = a0 * f;
        const Matrix2<Scalar> k2 = am * (f + (0.5 * h) * k1);
        const Matrix2<Scalar> k3 = am * (f + (0.5 * h) * k2);
        const Matrix2<Scalar> k4 = a1 * (f + h * k3);
        f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!detail::within_bounds(f)) detail::throw_blowup(t1);
        out.values.push_back(f);
        try {
            out.inverses.push_back(inverse2(f));
        } catch (const SingularMatrix&) {
            std::ostringstream os;
            os << "fundamental matrix singular at t = " << t1;
            throw SingularMatrix(os.str());
        }
        a0 = a1;
    }
    return out;
}

/// Composite Simpson on `intervals` (rounded up to even) equal sub-intervals of [a, b].
template <typename F>
double simpson(const F& integrand, double a, double b, Eigen::Index intervals) {
    if (a == b) return 0.0;
    Eigen::Index m = std::max<Eigen::Index>(2, intervals);
    if (m % 2) ++m;
    const double h = (b - a) / static_cast<double>(m);
    double odd = 0.0, even = 0.0;
    for (Eigen::Index j = 1; j < m; ++j) {
        (j % 2 ? odd : even) += integrand(a + h * static_cast<double>(j));
    }
    return h / 3.0 * (integrand(a) + 4.0 * odd + 2.0 * even + integrand(b));
}

/// Simpson's rule on [a, b] at (at least) the resolution of `grid`.
/// Exact for cubic polynomials.
template <typename F>
double quadrature(const F& integrand, double a, double b, const TimeGrid& grid) {
    if (a > b) throw DomainError("quadrature requires a <= b");
    const double slack = 1e-12 * grid.horizon();
    if (a < -slack || b > grid.horizon() + slack)
        throw DomainError("quadrature interval outside the grid");
    const auto intervals = static_cast<Eigen::Index>(std::ceil((b - a) / grid.step() - 1e-9));
    return simpson(integrand, a, b, intervals);
}

/// Integral of equally spaced samples with spacing h: composite Simpson, with
/// a 3/8 panel at the end when the interval count is odd.
template <typename T>
T simpson_samples(std::span<const T> f, double h) {
    const auto n = static_cast<Eigen::Index>(f.size()) - 1;
    if (n < 1) throw ParameterError("simpson_samples needs at least two samples");
    if (n == 1) return T(0.5 * h * (f[0] + f[1]));
    const Eigen::Index even_end = (n % 2 == 0) ? n : n - 3;
    T acc = T(0.0 * f[0]);
    for (Eigen::Index i = 0; i + 2 <= even_end; i += 2)
        acc = T(acc + (h / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2]));
    if (n % 2) {
        const auto j = even_end;
        acc = T(acc + (3.0 * h / 8.0) * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]));
    }
    return acc;
}

/// Running integrals I_i = int_{t_0}^{t_i} of equally spaced samples. Even
/// nodes use composite Simpson; odd nodes add a single-interval quadratic
/// panel to the preceding even node.
template <typename T>
std::vector<T> cumulative_simpson(std::span<const T> f, double h) {
    const auto n = static_cast<Eigen::Index>(f.size());
    if (n < 2) throw ParameterError("cumulative_simpson needs at least two samples");
    std::vector<T> out(f.size(), T(0.0 * f[0]));
    if (n == 2) {
        out[1] = T(0.5 * h * (f[0] + f[1]));
        return out;
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        if (i % 2 == 0) {
            out[i] = T(out[i - 2] + (h / 3.0) * (f[i - 2] + 4.0 * f[i - 1] + f[i]));
        } else if (i + 1 < n) {
            out[i] = T(out[i - 1] + (h / 12.0) * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]));
        } else {
            out[i] = T(out[i - 1] + (h / 12.0) * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]));
        }
    }
    return out;
}

}  // namespace sigtrade::ode
