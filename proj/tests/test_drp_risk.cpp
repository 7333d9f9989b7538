#include "doctest.h"

#include "mgsched/drp.hpp"
#include "mgsched/risk.hpp"

using namespace mgsched;

namespace {

DrpParams one_hour_params(int T, double self_elast, double rho0_val) {
    DrpParams p;
    p.participation = 0.25;
    p.incentive.assign(T, 0.0);
    p.penalty.assign(T, 0.0);
    p.rho0.assign(T, rho0_val);
    p.elasticity.diagonal = self_elast;
    p.elasticity.off_diagonal = 0.0;
    return p;
}

} // namespace

TEST_CASE("responsive load is unchanged at the initial prices") {
    const int T = 24;
    DrpParams p = one_hour_params(T, -0.2, 10.0);
    p.elasticity.off_diagonal = 0.01;
    std::vector<double> pl0(T, 40.0), rho(T, 10.0);
    const auto out = responsive_load(pl0, rho, p);
    for (double v : out) CHECK(v == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("self-elasticity scales one active hour") {
    const int T = 24;
    DrpParams p = one_hour_params(T, -0.2, 10.0);
    std::vector<double> pl0(T, 40.0), rho(T, 10.0);
    rho[7] = 12.0;
    auto out = responsive_load(pl0, rho, p);
    CHECK(out[7] == doctest::Approx(0.96 * 40.0).epsilon(1e-12));
    // Adding a 1 $/kWh incentive deepens the response: bracket (12-10+1)/10.
    p.incentive[7] = 1.0;
    out = responsive_load(pl0, rho, p);
    CHECK(out[7] == doctest::Approx(0.94 * 40.0).epsilon(1e-12));
}

TEST_CASE("responsive load is affine in the price deviation") {
    const int T = 24;
    DrpParams p = one_hour_params(T, -0.15, 8.0);
    p.elasticity.off_diagonal = 0.005;
    std::vector<double> pl0(T, 30.0), rho1(T, 8.0), rho2(T, 8.0);
    for (int t = 0; t < T; ++t) {
        rho1[t] += 0.1 * (t % 5);
        rho2[t] += 0.2 * (t % 5); // doubled deviation
    }
    const auto base = responsive_load(pl0, std::vector<double>(T, 8.0), p);
    const auto d1 = responsive_load(pl0, rho1, p);
    const auto d2 = responsive_load(pl0, rho2, p);
    for (int t = 0; t < T; ++t)
        CHECK(d2[t] - base[t] == doctest::Approx(2.0 * (d1[t] - base[t])).epsilon(1e-9));
}

TEST_CASE("zero rho0 is rejected") {
    DrpParams p = one_hour_params(4, -0.2, 10.0);
    p.rho0[2] = 0.0;
    std::vector<double> pl0(4, 10.0), rho(4, 10.0);
    CHECK_THROWS_AS(responsive_load(pl0, rho, p), std::domain_error);
}

TEST_CASE("drp cost sums incentive-weighted absolute shifts") {
    std::vector<double> shifts(24, 0.0), A(24, 0.1);
    shifts[3] = 5.0;
    shifts[17] = 5.0;
    CHECK(drp_cost(shifts, A) == doctest::Approx(1.0).epsilon(1e-12));
    std::fill(shifts.begin(), shifts.end(), 0.0);
    CHECK(drp_cost(shifts, A) == doctest::Approx(0.0));
    shifts[0] = 10.0;
    std::fill(A.begin(), A.end(), 0.02);
    CHECK(drp_cost(shifts, A) == doctest::Approx(0.2).epsilon(1e-12));
    shifts[1] = -1.0;
    CHECK_THROWS_AS(drp_cost(shifts, A), std::domain_error);
}

TEST_CASE("drp constraint block bounds") {
    DrpParams p = one_hour_params(3, -0.2, 10.0);
    std::vector<double> pl0 = {40.0, 20.0, 0.0};
    auto block = drp_constraint_block(pl0, p);
    CHECK(block.shift_ub[0] == doctest::Approx(10.0));
    CHECK(block.shift_lb[0] == doctest::Approx(-10.0));
    CHECK(block.shift_ub[1] == doctest::Approx(5.0));
    CHECK(block.shift_ub[2] == doctest::Approx(0.0));
    CHECK(block.zero_sum);
    CHECK(block.split_abs);
    p.participation = 0.0;
    block = drp_constraint_block(pl0, p);
    for (double v : block.shift_ub) CHECK(v == 0.0);
    for (double v : block.shift_lb) CHECK(v == 0.0);
}

TEST_CASE("downside risk reproduces the published per-scenario values") {
    const double target = 72.6946;
    CHECK(downside_risk(72.10782, target) == doctest::Approx(0.5868).epsilon(5e-5));
    CHECK(downside_risk(74.01032, target) == doctest::Approx(0.0));
    CHECK(downside_risk(70.29204, target) == doctest::Approx(2.4026).epsilon(5e-5));
    CHECK(downside_risk(73.42139, target) == doctest::Approx(0.0));
    CHECK(downside_risk(73.64145, target) == doctest::Approx(0.0));
}

TEST_CASE("expected downside risk matches the published average") {
    const std::vector<double> risks = {0.5868, 0.0, 2.4026, 0.0, 0.0};
    const std::vector<double> probs(5, 0.2);
    CHECK(expected_downside_risk(risks, probs) == doctest::Approx(0.5979).epsilon(2e-4));
    const std::vector<double> zeros(5, 0.0);
    CHECK(expected_downside_risk(zeros, probs) == doctest::Approx(0.0));
    const std::vector<double> one_risk = {3.7};
    const std::vector<double> one_prob = {1.0};
    CHECK(expected_downside_risk(one_risk, one_prob) == doctest::Approx(3.7));
    const std::vector<double> bad_probs = {0.3, 0.3, 0.3, 0.3, 0.3};
    CHECK_THROWS_AS(expected_downside_risk(risks, bad_probs), Error);
}

TEST_CASE("EDR bound reproduces the published average-RIP column") {
    const double baseline = 0.5979;
    CHECK(edr_bound(0.99, baseline) == doctest::Approx(0.5919).epsilon(1e-3));
    CHECK(edr_bound(0.95, baseline) == doctest::Approx(0.5680).epsilon(1e-3));
    CHECK(edr_bound(0.9, baseline) == doctest::Approx(0.5381).epsilon(1e-3));
    CHECK(edr_bound(0.85, baseline) == doctest::Approx(0.5082).epsilon(1e-3));
    CHECK(edr_bound(0.8, baseline) == doctest::Approx(0.4783).epsilon(1e-3));
    CHECK(edr_bound(0.75, baseline) == doctest::Approx(0.4484).epsilon(1e-3));
    CHECK(edr_bound(0.7, baseline) == doctest::Approx(0.4185).epsilon(1e-3));
    CHECK(edr_bound(1.0, baseline) == doctest::Approx(baseline));
    CHECK_THROWS_AS(edr_bound(0.0, baseline), Error);
    CHECK_THROWS_AS(edr_bound(1.5, baseline), Error);
    CHECK_THROWS_AS(edr_bound(0.9, -1.0), Error);
}
