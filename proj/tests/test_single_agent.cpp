#include "reference_values.hpp"
#include "test_support.hpp"

#include "sigtrade/errors.hpp"
#include "sigtrade/single_agent.hpp"

#include <doctest.h>

using namespace sigtrade;
using support::max_abs;

namespace {
const ModelParams kBase = single_base_params();
const SingleCoefficients& base_solution() {
    static const SingleCoefficients s = solve_single(kBase, TimeGrid(kDefaultSteps, 1.0));
    return s;
}
}  // namespace

TEST_CASE("terminal conditions are exact") {
    const auto& s = base_solution();
    const Eigen::Index last = s.nodes() - 1;
    CHECK(s(4, last) == -kBase.alpha);
    CHECK(s(6, last) == 1.0);
    for (int i : {1, 2, 3, 5}) CHECK(s(i, last) == 0.0);
}

TEST_CASE("zero drift keeps the linear coefficients at zero") {
    const auto& s = base_solution();
    CHECK(max_abs(s.c(2)) + max_abs(s.c(3)) < 1e-12);
}

TEST_CASE("coefficients match the high-accuracy reference integrator") {
    const auto& s = base_solution();
    for (const auto& row : ref::kSingle) {
        const Eigen::Index node = s.grid().node_of(row.t);
        for (int i = 1; i <= 6; ++i) CHECK(std::abs(s(i, node) - row.c[i - 1]) < 1e-10);
    }
}

TEST_CASE("coefficients match a fine-step explicit Euler integration") {
    const auto field = single_vector_field(kBase);
    const int steps = 1'000'000;
    const double h = 1.0 / steps;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(6), dc(6);
    c[3] = -kBase.alpha;
    c[5] = 1.0;
    for (int i = steps; i > 0; --i) {
        field.rhs(i * h, c, dc);
        c -= h * dc;
    }
    const auto& s = base_solution();
    for (int i : {4, 5, 6}) CHECK(std::abs(c[i - 1] - s(i, 0)) < 1e-6);
}

TEST_CASE("grid refinement changes c(0) by less than 1e-8") {
    const auto fine = solve_single(kBase, TimeGrid(2 * kDefaultSteps, 1.0));
    const Eigen::VectorXd diff = fine.trajectory.values.row(0) - base_solution().trajectory.values.row(0);
    CHECK(max_abs(diff) < 1e-8);
}

TEST_CASE("feedback rate") {
    const auto& s = base_solution();
    CHECK(feedback_rate(s, 0.3, 0.0, 0.0) == 0.0);
    for (double t : {0.0, 0.123, 0.5, 0.99})
        for (auto [q, v] : {std::pair{1.0, 0.2}, {-2.5, 0.7}, {0.3, -1.1}})
            CHECK(feedback_rate(s, t, -q, -v) == -feedback_rate(s, t, q, v));

    const auto& r = ref::kSingle[0].c;
    const double nu_q0 = (kBase.b + 2 * r[3] - kBase.gamma * r[5]) / (2 * kBase.k);
    CHECK(feedback_rate(s, 0.0, 1.0, 0.0) == doctest::Approx(nu_q0).epsilon(1e-10));
    CHECK_THROWS_AS(feedback_rate(s, 1.5, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(feedback_rate(s, -0.1, 0.0, 0.0), DomainError);
}

TEST_CASE("loadings") {
    const auto l = loadings(base_solution());
    const Eigen::Index last = l.nu_q.size() - 1;
    const double two_k = 2 * kBase.k;
    CHECK(l.nu_q[last] == doctest::Approx((kBase.b - 2 * kBase.alpha - kBase.gamma) / two_k));
    CHECK(l.nu_V[last] == doctest::Approx(100.0));
    // nu_q falls towards its most negative value at T; nu_V rises.
    for (Eigen::Index i = 1; i <= last; ++i) {
        REQUIRE(l.nu_q[i] <= l.nu_q[i - 1]);
        REQUIRE(l.nu_V[i] >= l.nu_V[i - 1]);
    }
    CHECK(l.nu_q[last] == l.nu_q.minCoeff());
}

TEST_CASE("value function") {
    const auto& s = base_solution();
    for (auto [x, q, S, V] : {std::array{1.0, 2.0, 100.0, 0.3}, {0.0, -1.0, 95.0, -0.2}})
        CHECK(value_function(s, 1.0, x, q, S, V) ==
              doctest::Approx(x + q * (S + V) - kBase.alpha * q * q).epsilon(1e-14));
    CHECK(value_function(s, 1.0, 3.0, 0.0, 100.0, 0.5) == 3.0);
    const auto& r = ref::kSingle[0].c;
    CHECK(value_function(s, 0.0, 0.0, 0.0, 100.0, 0.1) ==
          doctest::Approx(r[0] + r[2] * 0.1 + r[4] * 0.01).epsilon(1e-10));
}

TEST_CASE("HJB residual vanishes on an interior lattice") {
    const auto& s = base_solution();
    double worst = 0.0, worst_gap = 0.0;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (double q : {-2.0, -1.0, 0.0, 1.0, 2.0})
            for (double v : {-0.4, -0.2, 0.0, 0.2, 0.4}) {
                const HjbCheck h = hjb_residual(s, t, 0.0, q, 100.0, v, 1e-5);
                worst = std::max(worst, std::abs(h.residual));
                worst_gap = std::max(worst_gap, std::abs(h.maximizer - feedback_rate(s, t, q, v)));
                REQUIRE(h.quadratic_coefficient == -kBase.k);
            }
    CHECK(worst < 1e-4);
    CHECK(worst_gap < 1e-8);
    CHECK_THROWS_AS(hjb_residual(s, 0.5, 0, 0, 100, 0, 0.0), ParameterError);
}
