#include "mfp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mfp {

namespace {

double sample_sd(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace

MomentEstimate empirical_abs_moment(std::span<const double> samples, double q) {
    if (samples.size() < 30)
        throw std::invalid_argument("empirical_abs_moment: need at least 30 samples");
    if (q == 0.0) return {1.0, 0.0};
    std::vector<double> powered(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double a = std::abs(samples[i]);
        if (a == 0.0 && q < 0.0)
            throw std::domain_error("empirical_abs_moment: zero sample with negative q");
        powered[i] = std::pow(a, q);
    }
    const double mean = std::accumulate(powered.begin(), powered.end(), 0.0) /
                        static_cast<double>(powered.size());
    const double se = sample_sd(powered, mean) / std::sqrt(static_cast<double>(powered.size()));
    return {mean, se};
}

ComplexEstimate empirical_mellin(std::span<const double> samples, double theta) {
    if (samples.empty()) throw std::domain_error("empirical_mellin: empty sample");
    std::vector<double> re(samples.size()), im(samples.size());
    std::size_t positive = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double x = samples[i];
        if (x < 0.0) throw std::invalid_argument("empirical_mellin: samples must be nonnegative");
        if (x > 0.0) {
            const double phase = theta * std::log(x);
            re[i] = std::cos(phase);
            im[i] = std::sin(phase);
            ++positive;
        } else {
            re[i] = 0.0;
            im[i] = 0.0;
        }
    }
    if (positive == 0) throw std::domain_error("empirical_mellin: no positive samples");
    const double n = static_cast<double>(samples.size());
    const double mr = std::accumulate(re.begin(), re.end(), 0.0) / n;
    const double mi = std::accumulate(im.begin(), im.end(), 0.0) / n;
    return {{mr, mi}, sample_sd(re, mr) / std::sqrt(n), sample_sd(im, mi) / std::sqrt(n)};
}

ComplexEstimate empirical_cf(std::span<const double> samples, double theta) {
    if (samples.empty()) throw std::domain_error("empirical_cf: empty sample");
    std::vector<double> re(samples.size()), im(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        re[i] = std::cos(theta * samples[i]);
        im[i] = std::sin(theta * samples[i]);
    }
    const double n = static_cast<double>(samples.size());
    const double mr = std::accumulate(re.begin(), re.end(), 0.0) / n;
    const double mi = std::accumulate(im.begin(), im.end(), 0.0) / n;
    return {{mr, mi}, sample_sd(re, mr) / std::sqrt(n), sample_sd(im, mi) / std::sqrt(n)};
}

double ks_statistic(std::span<const double> x, std::span<const double> y) {
    std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double nx = static_cast<double>(xs.size()), ny = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] <= v) ++i;
        while (j < ys.size() && ys[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double ks_asymptotic_pvalue(double d, double n_effective) {
    const double sqrt_ne = std::sqrt(n_effective);
    const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
    if (lambda < 1e-4) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * lambda * lambda * k * k);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestReport ks_two_sample(std::span<const double> x, std::span<const double> y, double alpha,
                         std::string name) {
    if (x.size() < 100 || y.size() < 100)
        throw std::invalid_argument("ks_two_sample: both samples need >= 100 points");
    const double d = ks_statistic(x, y);
    const double ne = static_cast<double>(x.size()) * static_cast<double>(y.size()) /
                      static_cast<double>(x.size() + y.size());
    const double p = ks_asymptotic_pvalue(d, ne);
    TestReport report;
    report.name = std::move(name);
    report.statistic = d;
    report.p_value = p;
    report.threshold = alpha;
    report.pass = p > alpha;
    return report;
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y,
                  std::span<const double> y_var) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n || y_var.size() != n)
        throw std::invalid_argument("ols_fit: need >= 3 points with matching variances");
    const double x_bar = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double y_bar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - x_bar) * (x[i] - x_bar);
        sxy += (x[i] - x_bar) * (y[i] - y_bar);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_fit: degenerate abscissa");
    const double slope = sxy / sxx;
    double var_slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (x[i] - x_bar) / sxx;
        var_slope += w * w * y_var[i];
    }
    return {slope, y_bar - slope * x_bar, std::sqrt(var_slope)};
}

bool MomentScalingReport::all_pass() const {
    return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; });
}

MomentScalingReport fit_scaling_function(const Eigen::MatrixXd& ensemble,
                                         std::span<const double> times,
                                         std::span<const double> q_grid,
                                         std::span<const double> theory, Interval q_range,
                                         double tolerance_floor) {
    if (static_cast<std::size_t>(ensemble.cols()) != times.size())
        throw std::invalid_argument("fit_scaling_function: ensemble/time grid mismatch");
    if (theory.size() != q_grid.size())
        throw std::invalid_argument("fit_scaling_function: theory/q grid mismatch");

    MomentScalingReport report;
    report.q_grid.assign(q_grid.begin(), q_grid.end());
    report.theory.assign(theory.begin(), theory.end());
    report.time_grid.assign(times.begin(), times.end());
    report.q_range = q_range;
    report.tolerance_floor = tolerance_floor;

    std::vector<double> column(static_cast<std::size_t>(ensemble.rows()));
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
        const double q = q_grid[qi];
        if (!(q == 0.0 || q_range.contains(q)))
            throw std::domain_error("fit_scaling_function: q outside the declared range");
        std::vector<double> log_t, log_m, var_log_m;
        for (std::size_t j = 0; j < times.size(); ++j) {
            for (Eigen::Index r = 0; r < ensemble.rows(); ++r)
                column[static_cast<std::size_t>(r)] = ensemble(r, static_cast<Eigen::Index>(j));
            const auto m = empirical_abs_moment(column, q);
            if (!(m.value > 0.0)) {
                std::ostringstream os;
                os << "dropped nonpositive moment estimate at q=" << q << " t=" << times[j];
                report.warnings.push_back(os.str());
                continue;
            }
            log_t.push_back(std::log(times[j]));
            log_m.push_back(std::log(m.value));
            var_log_m.push_back((m.se / m.value) * (m.se / m.value));
        }
        if (log_t.size() < 3)
            throw std::runtime_error("fit_scaling_function: fewer than 3 usable time points");
        const LinearFit fit = ols_fit(log_t, log_m, var_log_m);
        report.slopes.push_back(fit.slope);
        report.slope_ses.push_back(fit.slope_se);
        report.pass.push_back(std::abs(fit.slope - theory[qi]) <=
                              std::max(3.0 * fit.slope_se, tolerance_floor));
    }
    return report;
}

CovarianceEstimate empirical_cov(const Eigen::MatrixXd& ensemble) {
    const Eigen::Index n = ensemble.rows(), k = ensemble.cols();
    if (n < 3) throw std::invalid_argument("empirical_cov: need >= 3 paths");
    CovarianceEstimate out{Eigen::MatrixXd(k, k), Eigen::MatrixXd(k, k)};
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
            const auto est = covariance_with_se(
                {ensemble.col(a).data(), static_cast<std::size_t>(n)},
                {ensemble.col(b).data(), static_cast<std::size_t>(n)});
            out.cov(a, b) = out.cov(b, a) = est.value;
            out.se(a, b) = out.se(b, a) = est.se;
        }
    }
    return out;
}

MomentEstimate covariance_with_se(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n)
        throw std::invalid_argument("covariance_with_se: need matching samples, n >= 3");
    const double nd = static_cast<double>(n);
    const double x_bar = std::accumulate(x.begin(), x.end(), 0.0) / nd;
    const double y_bar = std::accumulate(y.begin(), y.end(), 0.0) / nd;

    // delete-one jackknife over the closed-form covariance update
    double s_xy = 0.0;
    for (std::size_t i = 0; i < n; ++i) s_xy += x[i] * y[i];
    const double cov = (s_xy - nd * x_bar * y_bar) / (nd - 1.0);

    std::vector<double> loo(n);
    double loo_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sx = nd * x_bar - x[i], sy = nd * y_bar - y[i];
        const double c_i = (s_xy - x[i] * y[i] - sx * sy / (nd - 1.0)) / (nd - 2.0);
        loo[i] = c_i;
        loo_mean += c_i;
    }
    loo_mean /= nd;
    double ss = 0.0;
    for (const double c : loo) ss += (c - loo_mean) * (c - loo_mean);
    return {cov, std::sqrt((nd - 1.0) / nd * ss)};
}

}  // namespace mfp
