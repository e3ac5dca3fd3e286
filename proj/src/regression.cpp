#include "lsmsim/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lsmsim/errors.hpp"

namespace lsmsim {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double r_squared_for(const std::vector<double>& y, const std::vector<double>& fitted) {
    const double y_mean = mean_of(y);
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_tot += (y[i] - y_mean) * (y[i] - y_mean);
        ss_res += (y[i] - fitted[i]) * (y[i] - fitted[i]);
    }
    if (ss_tot <= 0.0) {
        throw DegenerateInputError("R^2 undefined: zero total sum of squares");
    }
    return 1.0 - ss_res / ss_tot;
}

}  // namespace

RegressionResult fit_ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw DegenerateInputError("fit_ols: x and y length mismatch");
    }
    if (x.size() < 3) {
        throw DegenerateInputError("fit_ols: need at least 3 points");
    }
    const double x_mean = mean_of(x);
    const double y_mean = mean_of(y);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - x_mean) * (x[i] - x_mean);
        sxy += (x[i] - x_mean) * (y[i] - y_mean);
    }
    if (sxx <= 0.0) {
        throw DegenerateInputError("fit_ols: constant regressor");
    }
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;

    std::vector<double> fitted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        fitted[i] = intercept + slope * x[i];
    }
    RegressionResult result;
    result.coefficients = {intercept, slope};
    result.r_squared = r_squared_for(y, fitted);
    return result;
}

RegressionResult fit_multiple_ols(const std::vector<std::vector<double>>& X,
                                  const std::vector<double>& y) {
    const std::size_t n = X.size();
    if (n == 0 || n != y.size()) {
        throw DegenerateInputError("fit_multiple_ols: bad design matrix shape");
    }
    const std::size_t k = X[0].size();
    for (const auto& row : X) {
        if (row.size() != k) {
            throw DegenerateInputError("fit_multiple_ols: ragged design matrix");
        }
    }
    const std::size_t p = k + 1;  // intercept column first
    if (n < p + 1) {
        throw DegenerateInputError("fit_multiple_ols: need more rows than coefficients");
    }

    // Normal equations A c = b with A = Z^T Z, b = Z^T y, Z = [1 X].
    auto z_at = [&](std::size_t row, std::size_t col) -> double {
        return col == 0 ? 1.0 : X[row][col - 1];
    };
    std::vector<std::vector<double>> a(p, std::vector<double>(p, 0.0));
    std::vector<double> b(p, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t i = 0; i < p; ++i) {
            const double zi = z_at(row, i);
            b[i] += zi * y[row];
            for (std::size_t j = i; j < p; ++j) {
                a[i][j] += zi * z_at(row, j);
            }
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            a[i][j] = a[j][i];
        }
    }

    // Cholesky with symmetric diagonal pivoting; rank tolerance is relative
    // to the largest initial diagonal.
    double max_diag = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        max_diag = std::max(max_diag, a[i][i]);
    }
    const double tol = 1e-10 * max_diag;

    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<double>> l(p, std::vector<double>(p, 0.0));
    std::vector<double> diag_work(p);
    for (std::size_t i = 0; i < p; ++i) {
        diag_work[i] = a[i][i];
    }

    for (std::size_t step = 0; step < p; ++step) {
        // Remaining diagonal after subtracting prior columns.
        std::size_t pivot = step;
        double best = -1.0;
        for (std::size_t i = step; i < p; ++i) {
            double d = a[perm[i]][perm[i]];
            for (std::size_t s = 0; s < step; ++s) {
                d -= l[i][s] * l[i][s];
            }
            if (d > best) {
                best = d;
                pivot = i;
            }
        }
        if (pivot != step) {
            std::swap(perm[pivot], perm[step]);
            std::swap(l[pivot], l[step]);
        }
        if (best <= tol) {
            throw DegenerateInputError("fit_multiple_ols: rank-deficient design matrix");
        }
        l[step][step] = std::sqrt(best);
        for (std::size_t i = step + 1; i < p; ++i) {
            double v = a[perm[i]][perm[step]];
            for (std::size_t s = 0; s < step; ++s) {
                v -= l[i][s] * l[step][s];
            }
            l[i][step] = v / l[step][step];
        }
    }

    // Solve L w = P b, then L^T (P c) = w.
    std::vector<double> w(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        double v = b[perm[i]];
        for (std::size_t s = 0; s < i; ++s) {
            v -= l[i][s] * w[s];
        }
        w[i] = v / l[i][i];
    }
    std::vector<double> cp(p, 0.0);
    for (std::size_t ii = p; ii-- > 0;) {
        double v = w[ii];
        for (std::size_t s = ii + 1; s < p; ++s) {
            v -= l[s][ii] * cp[s];
        }
        cp[ii] = v / l[ii][ii];
    }
    std::vector<double> coeffs(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        coeffs[perm[i]] = cp[i];
    }

    std::vector<double> fitted(n, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        double v = coeffs[0];
        for (std::size_t j = 0; j < k; ++j) {
            v += coeffs[j + 1] * X[row][j];
        }
        fitted[row] = v;
    }
    RegressionResult result;
    result.coefficients = std::move(coeffs);
    result.r_squared = r_squared_for(y, fitted);
    return result;
}

MetricKind metric_kind_from_string(std::string_view name) {
    if (name == "latency") return MetricKind::latency;
    if (name == "throughput") return MetricKind::throughput;
    throw ValidationError("unknown metric kind: " + std::string(name));
}

std::string_view to_string(MetricKind kind) {
    return kind == MetricKind::latency ? "latency" : "throughput";
}

RegressionRate regression_rate(double target, double baseline, MetricKind kind) {
    if (baseline <= 0.0) {
        throw ValidationError("regression_rate: baseline must be positive");
    }
    RegressionRate rate;
    rate.baseline = baseline;
    rate.target = target;
    rate.kind = kind;
    rate.rate = kind == MetricKind::latency ? (target - baseline) / baseline
                                            : (baseline - target) / baseline;
    return rate;
}

std::vector<SlopeRow> slope_report(const std::vector<SweepResult>& sweeps) {
    std::vector<SlopeRow> rows;
    rows.reserve(sweeps.size());
    for (const auto& sweep : sweeps) {
        std::vector<double> delay_ns;
        std::vector<double> mean_ns;
        delay_ns.reserve(sweep.points.size());
        mean_ns.reserve(sweep.points.size());
        for (const auto& point : sweep.points) {
            delay_ns.push_back(point.delay_us * 1000.0);
            mean_ns.push_back(point.mean_ns);
        }
        const RegressionResult fit = fit_ols(delay_ns, mean_ns);
        rows.push_back({sweep.scenario_label, fit.slope(), fit.intercept(), fit.r_squared});
    }
    return rows;
}

}  // namespace lsmsim
