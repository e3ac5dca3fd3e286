#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lsmsim/latency_sim.hpp"

namespace lsmsim {

/// coefficients[0] is the intercept, followed by one slope per predictor.
struct RegressionResult {
    std::vector<double> coefficients;
    double r_squared = 0.0;

    double intercept() const { return coefficients.at(0); }
    double slope(std::size_t i = 0) const { return coefficients.at(i + 1); }
};

/// Simple OLS over (x, y). Requires at least 3 points, non-constant x and
/// non-constant y (R^2 is undefined when the total sum of squares is 0).
RegressionResult fit_ols(const std::vector<double>& x, const std::vector<double>& y);

/// Multiple OLS; X holds one row per observation (predictors only, the
/// intercept column is added internally). Solves the normal equations with
/// a diagonally pivoted Cholesky factorization; pivots below 1e-10 of the
/// largest initial diagonal raise a rank-deficiency error.
RegressionResult fit_multiple_ols(const std::vector<std::vector<double>>& X,
                                  const std::vector<double>& y);

enum class MetricKind {
    latency,     // lower is better
    throughput,  // higher is better
};

MetricKind metric_kind_from_string(std::string_view name);
std::string_view to_string(MetricKind kind);

/// Relative overhead versus a baseline; positive means "worse" for both
/// metric kinds. Requires baseline > 0.
struct RegressionRate {
    double baseline = 0.0;
    double target = 0.0;
    double rate = 0.0;
    MetricKind kind = MetricKind::latency;
};

RegressionRate regression_rate(double target, double baseline, MetricKind kind);

struct SlopeRow {
    std::string scenario;
    double slope = 0.0;
    double intercept_ns = 0.0;
    double r_squared = 0.0;
};

/// Per-scenario OLS of mean latency against injected delay (both in ns, so
/// the slope is the dimensionless authorization multiplicity).
std::vector<SlopeRow> slope_report(const std::vector<SweepResult>& sweeps);

}  // namespace lsmsim
