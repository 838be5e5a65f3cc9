#include "reference_values.hpp"
#include "test_support.hpp"

#include "sigtrade/errors.hpp"
#include "sigtrade/mfg_shared.hpp"

#include <doctest.h>

using namespace sigtrade;
using support::max_abs;

namespace {
const TimeGrid kGrid(kDefaultSteps, 1.0);
const ModelParams kBase = shared_base_params();
const SharedCoefficients& base_solution() {
    static const SharedCoefficients s = solve_shared(kBase, kGrid);
    return s;
}
const SharedCoefficients& closed_solution() {
    static const SharedCoefficients s = solve_shared(support::shared_closed_params(), kGrid);
    return s;
}
}  // namespace

TEST_CASE("terminal conditions are exact") {
    const auto& s = base_solution();
    const Eigen::Index last = s.nodes() - 1;
    CHECK(s(5, last) == -kBase.alpha);
    CHECK(s(9, last) == 1.0);
    for (int i : {1, 2, 3, 4, 6, 7, 8, 10}) CHECK(s(i, last) == 0.0);
}

TEST_CASE("vanishing coefficients") {
    const auto& s = base_solution();
    CHECK(max_abs(s.c(2)) + max_abs(s.c(3)) + max_abs(s.c(4)) < 1e-12);
    const auto& z = closed_solution();
    double sum = 0;
    for (int i : {3, 5, 6, 8, 10}) sum += max_abs(z.c(i));
    CHECK(sum < 1e-12);
}

TEST_CASE("coefficients match the high-accuracy reference integrator") {
    const auto& s = base_solution();
    for (const auto& row : ref::kShared) {
        const Eigen::Index node = kGrid.node_of(row.t);
        for (int i = 1; i <= 10; ++i) CHECK(std::abs(s(i, node) - row.c[i - 1]) < 1e-10);
    }
}

TEST_CASE("consistency law holds exactly at every node") {
    const auto& s = base_solution();
    const double kappa = 2 * kBase.k + kBase.k_bar;
    for (Eigen::Index i = 0; i < s.nodes(); ++i) {
        REQUIRE(s.f(i, 0) == s(2, i) / kappa);
        REQUIRE(s.f(i, 1) == (2 * s(5, i) + s(8, i)) / kappa);
        REQUIRE(s.f(i, 2) == s(9, i) / kappa);
    }
}

TEST_CASE("closed form agrees with the ODE solution") {
    const auto& s = closed_solution();
    const ModelParams p = support::shared_closed_params();
    const double kappa = 2 * p.k + p.k_bar;
    double e1 = 0, e7 = 0, e9 = 0, ef = 0;
    for (Eigen::Index i = 0; i < s.nodes(); i += 10) {
        const auto cf = closed_form_shared(p, kGrid.t(i));
        e1 = std::max(e1, std::abs(cf.c1 - s(1, i)));
        e7 = std::max(e7, std::abs(cf.c7 - s(7, i)));
        e9 = std::max(e9, std::abs(cf.c9 - s(9, i)));
        ef = std::max(ef, std::abs(cf.f3 - cf.c9 / kappa));
    }
    CHECK(e1 < 1e-6);
    CHECK(e7 < 1e-6);
    CHECK(e9 < 1e-6);
    CHECK(ef == 0.0);

    const auto end = closed_form_shared(p, 1.0);
    CHECK(end.c9 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(end.c7 == 0.0);
    CHECK(end.c1 == 0.0);
}

TEST_CASE("closed form rejects parameters outside its domain") {
    ModelParams p = support::shared_closed_params();
    p.b = 0.0;
    CHECK_THROWS_AS(closed_form_shared(p, 0.5), ParameterError);
    p = support::shared_closed_params();
    p.gamma_bar = 0.0;
    CHECK_THROWS_AS(closed_form_shared(p, 0.5), ParameterError);
    CHECK_THROWS_AS(closed_form_shared(kBase, 0.5), ParameterError);
    CHECK_THROWS_AS(closed_form_shared(support::shared_closed_params(), 1.1), DomainError);
}

TEST_CASE("agent and aggregate rates") {
    const auto& s = base_solution();
    for (double t : {0.0, 0.37, 0.8, 1.0}) {
        const Eigen::VectorXd c = s.at(t);
        for (auto [q, qb, vb] : {std::array{1.0, 0.5, 0.2}, {-3.0, 2.0, -0.4}}) {
            const double gap = feedback_rate_shared(s, t, q, qb, vb) - mean_field_rate(s, t, qb, vb);
            CHECK(std::abs(gap - c[4] / kBase.k * (q - qb)) < 1e-12);
        }
        // Average of agent rates over a population with mean q_bar.
        const std::array<double, 4> qs{-1.0, 0.5, 2.0, 2.5};
        double avg = 0;
        for (double q : qs) avg += feedback_rate_shared(s, t, q, 1.0, 0.3) / qs.size();
        CHECK(std::abs(avg - mean_field_rate(s, t, 1.0, 0.3)) < 1e-12);
    }
    CHECK(feedback_rate_shared(s, 0.5, 0.0, 0.0, 0.0) == 0.0);
    CHECK(max_abs(s.f_path(1)) == 0.0);

    const auto& r = ref::kShared[0].c;
    const double kappa = 2 * kBase.k + kBase.k_bar;
    CHECK(mean_field_rate(s, 0.0, 1.0, 0.0) == doctest::Approx((2 * r[4] + r[7]) / kappa).epsilon(1e-9));
    CHECK_THROWS_AS(mean_field_rate(s, 2.0, 0.0, 0.0), DomainError);

    const ModelParams p = support::shared_closed_params();
    const auto& z = closed_solution();
    for (double t : {0.0, 0.5, 0.9}) {
        const double expected = closed_form_shared(p, t).c9 / kappa * 0.7;
        for (auto [q, qb] : {std::pair{0.0, 0.0}, {2.0, -1.0}})
            CHECK(std::abs(feedback_rate_shared(z, t, q, qb, 0.7) - expected) < 1e-10);
    }
}

TEST_CASE("loadings at maturity and sign structure") {
    const auto l = loadings_shared(base_solution());
    const Eigen::Index last = l.nu_q.size() - 1;
    CHECK(l.nu_q[last] == doctest::Approx(-20.0).epsilon(1e-14));
    CHECK(l.nu_Vbar[last] == doctest::Approx(1.0 / 0.011).epsilon(1e-14));
    CHECK(l.nu_q.maxCoeff() < 0.0);
    int sign_changes = 0;
    for (Eigen::Index i = 1; i <= last; ++i)
        if ((l.nu_qbar[i] > 0) != (l.nu_qbar[i - 1] > 0)) ++sign_changes;
    CHECK(sign_changes == 1);
}

TEST_CASE("Q_bar loading is monotone in b and gamma_bar") {
    auto sweep = [](double ModelParams::*field, std::initializer_list<double> values) {
        std::vector<Eigen::VectorXd> out;
        for (double v : values) {
            ModelParams p = kBase;
            p.*field = v;
            out.push_back(loadings_shared(solve_shared(p, kGrid)).nu_qbar);
        }
        return out;
    };
    // All curves meet at T, so strict ordering is checked on [0, 0.99].
    const Eigen::Index interior = kGrid.node_of(0.99);
    const auto by_b = sweep(&ModelParams::b, {0.0, 0.01, 0.02, 0.03, 0.04, 0.05});
    for (std::size_t j = 1; j < by_b.size(); ++j)
        CHECK((by_b[j].head(interior + 1).array() < by_b[j - 1].head(interior + 1).array()).all());
    const auto by_gb = sweep(&ModelParams::gamma_bar, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
    for (std::size_t j = 1; j < by_gb.size(); ++j)
        CHECK((by_gb[j].head(interior + 1).array() > by_gb[j - 1].head(interior + 1).array()).all());
}
