#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lsmsim/regression.hpp"
#include "test_support.hpp"

using namespace lsmsim;

namespace {

// Independent oracle: normal equations solved with Gauss-Jordan elimination
// and partial pivoting. Deliberately shares no code with fit_multiple_ols.
std::vector<double> oracle_ols(const std::vector<std::vector<double>>& X,
                               const std::vector<double>& y) {
    const std::size_t n = X.size();
    const std::size_t p = X[0].size() + 1;
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> z(p, 1.0);
        for (std::size_t j = 1; j < p; ++j) {
            z[j] = X[r][j - 1];
        }
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                a[i][j] += z[i] * z[j];
            }
            a[i][p] += z[i] * y[r];
        }
    }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < p; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) {
                pivot = r;
            }
        }
        std::swap(a[col], a[pivot]);
        const double d = a[col][col];
        for (std::size_t j = col; j <= p; ++j) {
            a[col][j] /= d;
        }
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            for (std::size_t j = col; j <= p; ++j) {
                a[r][j] -= f * a[col][j];
            }
        }
    }
    std::vector<double> coeffs(p);
    for (std::size_t i = 0; i < p; ++i) {
        coeffs[i] = a[i][p];
    }
    return coeffs;
}

}  // namespace

TEST_CASE("fit_ols recovers exact lines") {
    std::vector<double> x;
    std::vector<double> y;
    for (int d = 0; d <= 110; d += 10) {
        x.push_back(d);
        y.push_back(3.0 * d + 5.0);
    }
    const auto fit = fit_ols(x, y);
    CHECK(fit.slope() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.intercept() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_ols recovery within 1e-9 relative error") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> coeff(-50.0, 50.0);
    for (int round = 0; round < 100; ++round) {
        const double a = coeff(gen);
        const double b = coeff(gen);
        if (std::fabs(a) < 1e-3) continue;
        std::vector<double> x;
        std::vector<double> y;
        for (int i = 0; i < 20; ++i) {
            x.push_back(i * 3.5 + 1.0);
            y.push_back(a * x.back() + b);
        }
        const auto fit = fit_ols(x, y);
        CHECK(std::fabs(fit.slope() - a) <= 1e-9 * std::fabs(a));
    }
}

TEST_CASE("fit_ols degenerate inputs") {
    const std::vector<double> x = {1, 2, 3, 4};
    CHECK_THROWS_AS(fit_ols(x, {1, 2, 3}), DegenerateInputError);
    CHECK_THROWS_AS(fit_ols({1, 2}, {1, 2}), DegenerateInputError);
    CHECK_THROWS_AS(fit_ols({2, 2, 2, 2}, {1, 2, 3, 4}), DegenerateInputError);
    CHECK_THROWS_AS(fit_ols(x, {7, 7, 7, 7}), DegenerateInputError);
}

TEST_CASE("r_squared is invariant under affine rescaling of x") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 30; ++i) {
        x.push_back(i);
        y.push_back(2.0 * i + 1.0 + noise(gen));
    }
    const double r2 = fit_ols(x, y).r_squared;
    std::vector<double> rescaled = x;
    for (auto& v : rescaled) {
        v = 42.0 * v - 17.0;
    }
    CHECK(fit_ols(rescaled, y).r_squared == doctest::Approx(r2).epsilon(1e-12));
}

TEST_CASE("multiple OLS exact fit") {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (int i = 0; i < 12; ++i) {
        const double x1 = i;
        const double x2 = (i * 7) % 5;
        X.push_back({x1, x2});
        y.push_back(1.0 + 2.0 * x1 + 3.0 * x2);
    }
    const auto fit = fit_multiple_ols(X, y);
    REQUIRE(fit.coefficients.size() == 3);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.coefficients[2] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("multiple OLS rejects rank deficiency") {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (int i = 0; i < 10; ++i) {
        X.push_back({static_cast<double>(i), static_cast<double>(i)});
        y.push_back(i);
    }
    CHECK_THROWS_AS(fit_multiple_ols(X, y), DegenerateInputError);
}

TEST_CASE("multiple OLS matches the independent oracle on random instances") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> value(-5.0, 5.0);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::vector<double>> X;
        std::vector<double> y;
        const double b0 = value(gen);
        const double b1 = value(gen);
        const double b2 = value(gen);
        for (int i = 0; i < 20; ++i) {
            const double x1 = value(gen);
            const double x2 = value(gen);
            X.push_back({x1, x2});
            y.push_back(b0 + b1 * x1 + b2 * x2 + noise(gen));
        }
        const auto fit = fit_multiple_ols(X, y);
        const auto expected = oracle_ols(X, y);
        REQUIRE(fit.coefficients.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(fit.coefficients[i] == doctest::Approx(expected[i]).epsilon(1e-6));
        }
        // sigma = 0.01: recovered coefficients stay within a loose 3-sigma
        // band of the generating values.
        CHECK(std::fabs(fit.coefficients[1] - b1) < 0.05);
        CHECK(std::fabs(fit.coefficients[2] - b2) < 0.05);
    }
}

TEST_CASE("regression rates") {
    CHECK(regression_rate(1.87, 1.0, MetricKind::latency).rate ==
          doctest::Approx(0.87).epsilon(1e-12));
    CHECK(regression_rate(12.7, 10.0, MetricKind::latency).rate ==
          doctest::Approx(0.27).epsilon(1e-12));
    CHECK(regression_rate(5.0, 5.0, MetricKind::latency).rate == 0.0);
    CHECK(regression_rate(5.0, 5.0, MetricKind::throughput).rate == 0.0);
    CHECK(regression_rate(80.0, 100.0, MetricKind::throughput).rate ==
          doctest::Approx(0.2).epsilon(1e-12));
    CHECK_THROWS_AS(regression_rate(1.0, 0.0, MetricKind::latency), ValidationError);
    CHECK_THROWS_AS(regression_rate(1.0, -2.0, MetricKind::throughput), ValidationError);
}

TEST_CASE("latency rate is antisymmetric under exchange only at zero") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> value(0.5, 20.0);
    for (int round = 0; round < 200; ++round) {
        const double a = value(gen);
        const double b = value(gen);
        const double forward = regression_rate(a, b, MetricKind::latency).rate;
        const double backward = regression_rate(b, a, MetricKind::latency).rate;
        if (a == b) {
            CHECK(forward == 0.0);
            CHECK(backward == 0.0);
        } else {
            CHECK(forward != -backward);
        }
    }
    CHECK(regression_rate(3.0, 3.0, MetricKind::latency).rate ==
          -regression_rate(3.0, 3.0, MetricKind::latency).rate);
}

TEST_CASE("slope report reproduces the depth table exactly in deterministic mode") {
    const auto stack = testsup::tunable_stack();
    LatencyModel model;
    model.constant_cost_ns = 500.0;
    SweepConfig sweep;
    sweep.delays_us = SweepConfig::default_grid();
    sweep.repetitions = 300;

    std::vector<SweepResult> open_sweeps;
    std::vector<SweepResult> stat_sweeps;
    for (const int depth : {1, 2, 4, 8}) {
        open_sweeps.push_back(run_sweep(
            testsup::load_scenario("open_d" + std::to_string(depth)), stack, model, sweep));
        stat_sweeps.push_back(run_sweep(
            testsup::load_scenario("stat_d" + std::to_string(depth)), stack, model, sweep));
    }
    const auto open_rows = slope_report(open_sweeps);
    const auto stat_rows = slope_report(stat_sweeps);
    const double open_expected[] = {2, 3, 5, 9};
    const double stat_expected[] = {1, 2, 4, 8};
    for (int i = 0; i < 4; ++i) {
        CHECK(open_rows[i].slope == doctest::Approx(open_expected[i]).epsilon(1e-9));
        CHECK(stat_rows[i].slope == doctest::Approx(stat_expected[i]).epsilon(1e-9));
    }
}

TEST_CASE("openat slope is 3.0 at any depth") {
    const auto stack = testsup::tunable_stack();
    SweepConfig sweep;
    sweep.delays_us = SweepConfig::default_grid();
    sweep.repetitions = 10;
    for (const int depth : {1, 3, 6, 8}) {
        auto scenario = testsup::load_scenario("openat");
        scenario.path = make_depth_path(depth);
        const auto rows = slope_report({run_sweep(scenario, stack, {}, sweep)});
        CHECK(rows[0].slope == doctest::Approx(3.0).epsilon(1e-9));
    }
}

TEST_CASE("noisy depth-8 open sweep recovers the slope") {
    const auto stack = testsup::tunable_stack();
    LatencyModel model;
    model.constant_cost_ns = 500.0;
    SweepConfig sweep;
    sweep.delays_us = SweepConfig::default_grid();
    sweep.repetitions = 300;
    sweep.noise_stddev_ns = kReferenceNoiseStddevNs;
    sweep.rng_seed = 42;
    const auto rows =
        slope_report({run_sweep(testsup::load_scenario("open_d8"), stack, model, sweep)});
    CHECK(rows[0].slope > 8.5);
    CHECK(rows[0].slope < 9.5);
    CHECK(rows[0].r_squared >= 0.99);
}

TEST_CASE("slope equals trace authorization count for every bundled benchmark") {
    const auto stack = testsup::tunable_stack();
    SweepConfig sweep;
    sweep.delays_us = SweepConfig::default_grid();
    sweep.repetitions = 10;
    for (const auto& name : benchmark_names()) {
        CAPTURE(name);
        const auto scenario = testsup::load_scenario(name);
        const auto trace = build_trace(scenario, stack);
        const auto rows = slope_report({run_sweep(scenario, stack, {}, sweep)});
        CHECK(rows[0].slope ==
              doctest::Approx(static_cast<double>(trace.authorization_count)).epsilon(1e-9));
    }
}
