#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "mfp/levy.hpp"

namespace mfp {

struct MomentEstimate {
    double value;
    double se;
};

// sample mean of |x|^q with its standard error; needs >= 30 samples
MomentEstimate empirical_abs_moment(std::span<const double> samples, double q);

struct ComplexEstimate {
    std::complex<double> value;
    double se_re;
    double se_im;
};

// Mellin transform on the imaginary line: mean of exp(i theta log x) over the
// positive samples, scaled by the positive-mass fraction.
ComplexEstimate empirical_mellin(std::span<const double> samples, double theta);

// empirical characteristic function, mean of exp(i theta x)
ComplexEstimate empirical_cf(std::span<const double> samples, double theta);

struct TestReport {
    std::string name;
    double statistic = 0.0;
    double p_value = 0.0;   // p-value or deviation/SE ratio, per test kind
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

double ks_statistic(std::span<const double> x, std::span<const double> y);
double ks_asymptotic_pvalue(double d, double n_effective);
TestReport ks_two_sample(std::span<const double> x, std::span<const double> y,
                         double alpha = 0.01, std::string name = "ks_two_sample");

struct LinearFit {
    double slope;
    double intercept;
    double slope_se;  // from per-point variances via the delta method
};

LinearFit ols_fit(std::span<const double> x, std::span<const double> y,
                  std::span<const double> y_var);

// Per-q OLS of log empirical moment against log t over a geometric time grid.
struct MomentScalingReport {
    std::vector<double> q_grid;
    std::vector<double> slopes;      // tau_hat(q)
    std::vector<double> slope_ses;
    std::vector<double> theory;      // reference exponents
    std::vector<bool> pass;          // |slope - theory| <= max(3 se, tol_floor)
    std::vector<double> time_grid;
    Interval q_range{0.0, 0.0};
    double tolerance_floor = 0.0;
    std::vector<std::string> warnings;

    bool all_pass() const;
};

// ensemble: one row per path, one column per time point
MomentScalingReport fit_scaling_function(const Eigen::MatrixXd& ensemble,
                                         std::span<const double> times,
                                         std::span<const double> q_grid,
                                         std::span<const double> theory,
                                         Interval q_range, double tolerance_floor);

struct CovarianceEstimate {
    Eigen::MatrixXd cov;
    Eigen::MatrixXd se;  // delete-one jackknife
};

CovarianceEstimate empirical_cov(const Eigen::MatrixXd& ensemble);

// sample covariance of two columns with a moment-based standard error
MomentEstimate covariance_with_se(std::span<const double> x, std::span<const double> y);

}  // namespace mfp
