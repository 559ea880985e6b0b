#include "mfp/suites.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "mfp/ensemble.hpp"
#include "mfp/scaling.hpp"

namespace mfp {

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    return splitmix64(seed ^ fnv1a64(label));
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

TestReport check_tol(std::string name, double observed, double expected, double tol) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = std::abs(observed - expected);
    r.p_value = r.statistic;
    r.threshold = tol;
    r.pass = r.statistic <= tol;
    r.detail = "observed " + fmt(observed) + ", expected " + fmt(expected);
    return r;
}

TestReport check_within_se(std::string name, double observed, double expected, double se,
                           double k_se) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = std::abs(observed - expected);
    r.p_value = se > 0.0 ? r.statistic / se : (r.statistic == 0.0 ? 0.0 : 1e300);
    r.threshold = k_se;
    r.pass = r.statistic <= k_se * se;
    r.detail = "observed " + fmt(observed) + ", expected " + fmt(expected) + ", se " + fmt(se);
    return r;
}

TestReport check_flag(std::string name, bool pass, std::string detail) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = pass ? 0.0 : 1.0;
    r.threshold = 0.0;
    r.pass = pass;
    r.detail = std::move(detail);
    return r;
}

// samples of M(lambda, t), each from its own path
std::vector<double> sample_m_values(const LevyModel& levy, double horizon, double lambda, double t,
                                    std::size_t n, std::uint64_t seed, std::string_view label,
                                    int workers) {
    std::vector<double> out(n);
    const double lam[1] = {lambda}, tt[1] = {t};
    parallel_for_indices(n, workers, [&](std::size_t i) {
        RngStream rng(seed, label, i);
        out[i] = sample_scaling_grid(levy, horizon, lam, tt, rng).value(0, 0);
    });
    return out;
}

Eigen::MatrixXd increments_of(const Eigen::MatrixXd& ensemble) {
    Eigen::MatrixXd inc(ensemble.rows(), ensemble.cols() - 1);
    for (Eigen::Index j = 0; j + 1 < ensemble.cols(); ++j)
        inc.col(j) = ensemble.col(j + 1) - ensemble.col(j);
    return inc;
}

MomentEstimate correlation_with_se(std::span<const double> x, std::span<const double> y) {
    const auto cov = covariance_with_se(x, y);
    const double sx = std::sqrt(covariance_with_se(x, x).value);
    const double sy = std::sqrt(covariance_with_se(y, y).value);
    return {cov.value / (sx * sy), cov.se / (sx * sy)};
}

std::vector<double> column_of(const Eigen::MatrixXd& m, Eigen::Index j) {
    return {m.col(j).data(), m.col(j).data() + m.rows()};
}

SuiteResult scaling_family_suite(const ExperimentConfig& cfg, int workers) {
    SuiteResult result{"scaling-family", {}};
    const LevyModel& levy = cfg.lmf_model().levy;
    const std::uint64_t seed = cfg.seed;

    {  // M(1, t) = 1, bit-exact, and pathwise multiplicativity on an 8x8 grid
        std::vector<double> lambdas, times;
        for (int k = 7; k >= 0; --k) lambdas.push_back(std::ldexp(1.0, -k));
        for (int k = 7; k >= 0; --k) times.push_back(std::ldexp(1.0, -k));
        const double horizon = std::log(128.0) + 1.0;
        double max_identity = 0.0, max_mult = 0.0;
        for (std::size_t rep = 0; rep < 10; ++rep) {
            RngStream rng(seed, "sf.mult", rep);
            const auto grid = sample_scaling_grid(levy, horizon, lambdas, times, rng);
            const std::size_t ones = grid.lambdas.size() - 1;  // lambda = 1 is the last (sorted)
            for (std::size_t j = 0; j < grid.times.size(); ++j)
                max_identity = std::max(max_identity, std::abs(grid.value(ones, j) - 1.0));
            // lambda_i = 2^(i-7), t_j = 2^(j-7); lambda_i*lambda_m and
            // lambda_m*t_j stay on the grid when i+m >= 7 and m+j >= 7
            for (std::size_t i = 0; i < 8; ++i)
                for (std::size_t m = 0; m < 8; ++m)
                    for (std::size_t j = 0; j < 8; ++j) {
                        if (i + m < 7 || m + j < 7) continue;
                        const double lhs = grid.value(i + m - 7, j);
                        const double rhs = grid.value(i, m + j - 7) * grid.value(m, j);
                        max_mult = std::max(max_mult, std::abs(lhs - rhs) / std::abs(lhs));
                    }
        }
        result.reports.push_back(check_tol("scaling_identity_at_one", max_identity, 0.0, 0.0));
        result.reports.push_back(check_tol("pathwise_multiplicativity", max_mult, 0.0, 1e-12));
    }

    {  // n-fold divisibility: product of 4 samples of M(lambda^(1/4), t) vs M(lambda, t)
        const std::size_t n = 10000;
        const double lambda = std::exp(-1.0), t = 0.7, horizon = 1.5;
        std::vector<double> products(n);
        parallel_for_indices(n, workers, [&](std::size_t i) {
            double prod = 1.0;
            for (std::size_t k = 0; k < 4; ++k) {
                RngStream rng(seed, "sf.div.parts", i * 4 + k);
                const double lam[1] = {std::pow(lambda, 0.25)};
                const double tt[1] = {t};
                prod *= sample_scaling_grid(levy, horizon, lam, tt, rng).value(0, 0);
            }
            products[i] = prod;
        });
        const auto direct =
            sample_m_values(levy, horizon, lambda, t, n, seed, "sf.div.direct", workers);
        result.reports.push_back(ks_two_sample(products, direct, 0.01, "divisibility_ks_n4"));
    }

    {  // stationarity of M(lambda, e^u) in u
        const double lambda = 0.5, horizon = 1.5;
        const double us[3] = {-1.0, 0.0, 0.8};
        std::vector<std::vector<double>> pools;
        for (int k = 0; k < 3; ++k)
            pools.push_back(sample_m_values(levy, horizon, lambda, std::exp(us[k]), 10000, seed,
                                            "sf.stat." + std::to_string(k), workers));
        result.reports.push_back(ks_two_sample(pools[0], pools[1], 0.01, "log_time_stationarity_01"));
        result.reports.push_back(ks_two_sample(pools[1], pools[2], 0.01, "log_time_stationarity_12"));
    }

    {  // marginal law of log M(1/e, t) against exp(Psi(theta))
        const double lambda = std::exp(-1.0), horizon = 1.0;
        const double thetas[4] = {-2.0, -1.0, 1.0, 2.0};
        for (const double t : {0.4, 0.9}) {
            auto m = sample_m_values(levy, horizon, lambda, t, 100000, seed,
                                     "sf.cf.t" + std::to_string(t < 0.5), workers);
            for (double& x : m) x = std::log(x);
            for (const double theta : thetas) {
                const auto ecf = empirical_cf(m, theta);
                const auto ref = marginal_cf_reference(levy, lambda, theta);
                const double dev = std::max(std::abs(ecf.value.real() - ref.real()) / ecf.se_re,
                                            std::abs(ecf.value.imag() - ref.imag()) / ecf.se_im);
                std::ostringstream name;
                name << "marginal_cf_t" << fmt(t) << "_theta" << fmt(theta);
                TestReport r;
                r.name = name.str();
                r.statistic = dev;
                r.p_value = dev;
                r.threshold = 4.0;
                r.pass = dev <= 4.0;
                r.detail = "ecf (" + fmt(ecf.value.real()) + "," + fmt(ecf.value.imag()) +
                           ") vs (" + fmt(ref.real()) + "," + fmt(ref.imag()) + ")";
                result.reports.push_back(r);
            }
        }
    }

    {  // laws sampled at horizon a and at a larger horizon agree
        const double lambda = 0.6;
        for (const double t : {0.2, 0.9}) {
            const auto low = sample_m_values(levy, 0.0, lambda, t, 10000, seed,
                                             "sf.hz.low" + std::to_string(t < 0.5), workers);
            const auto high = sample_m_values(levy, 2.0, lambda, t, 10000, seed,
                                              "sf.hz.high" + std::to_string(t < 0.5), workers);
            result.reports.push_back(
                ks_two_sample(low, high, 0.01, "horizon_consistency_t" + fmt(t)));
        }
    }
    return result;
}

SuiteResult lmf_law_suite(const ExperimentConfig& cfg, int workers) {
    SuiteResult result{"lmf-law", {}};
    const LmfModel& model = cfg.lmf_model();
    const double ts = model.time_scale;

    {  // joint law: X(lambda t) vs M(lambda) X(t) with an independent factor.
        // Across several time points the correct independent family is the
        // constant one: a single log-Levy draw per lambda scales every
        // coordinate. The grid-structured family of the construction shares
        // path segments with X and only matches per coordinate, so it is
        // checked marginally (KS) below.
        const std::vector<double> times = {0.25 * ts, 0.5 * ts, ts};
        const std::size_t n = 10000;
        for (const double lambda : {0.5, 0.25}) {
            std::vector<double> scaled_times;
            for (const double t : times) scaled_times.push_back(lambda * t);
            Eigen::MatrixXd lhs(n, 3), rhs(n, 3), rhs_grid(n, 3);
            const std::uint64_t s_lhs = derive_seed(cfg.seed, "law.lhs" + fmt(lambda));
            const std::uint64_t s_rhs = derive_seed(cfg.seed, "law.rhs" + fmt(lambda));
            const std::uint64_t s_m = derive_seed(cfg.seed, "law.m" + fmt(lambda));
            std::vector<double> base_times;
            for (const double t : times) base_times.push_back(t / ts);
            parallel_for_indices(n, workers, [&](std::size_t i) {
                const auto left = sample_lmf_path(model, scaled_times, s_lhs, i);
                const auto right = sample_lmf_path(model, times, s_rhs, i);
                RngStream m_rng(s_m, "grid", i);
                const double lam[1] = {lambda};
                const auto grid = sample_scaling_grid(model.levy, 1.0, lam, base_times, m_rng);
                const double constant_factor = grid.value(0, 2);  // one draw of M(lambda, .)
                for (int j = 0; j < 3; ++j) {
                    lhs(static_cast<Eigen::Index>(i), j) = left.values[static_cast<std::size_t>(j)];
                    rhs(static_cast<Eigen::Index>(i), j) =
                        constant_factor * right.values[static_cast<std::size_t>(j)];
                    rhs_grid(static_cast<Eigen::Index>(i), j) =
                        grid.value(0, static_cast<std::size_t>(j)) *
                        right.values[static_cast<std::size_t>(j)];
                }
            });
            for (int j = 0; j < 3; ++j) {
                result.reports.push_back(ks_two_sample(
                    column_of(lhs, j), column_of(rhs, j), 0.01,
                    "scaling_law_ks_lambda" + fmt(lambda) + "_t" + fmt(times[static_cast<std::size_t>(j)])));
                result.reports.push_back(ks_two_sample(
                    column_of(lhs, j), column_of(rhs_grid, j), 0.01,
                    "scaling_law_marginal_grid_lambda" + fmt(lambda) + "_t" +
                        fmt(times[static_cast<std::size_t>(j)])));
            }
            // pairwise product moments probe the joint law across coordinates
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    std::vector<double> pl(n), pr(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        pl[i] = lhs(static_cast<Eigen::Index>(i), a) * lhs(static_cast<Eigen::Index>(i), b);
                        pr[i] = rhs(static_cast<Eigen::Index>(i), a) * rhs(static_cast<Eigen::Index>(i), b);
                    }
                    const auto ml = empirical_abs_moment(pl, 1.0);
                    const auto mr = empirical_abs_moment(pr, 1.0);
                    result.reports.push_back(check_within_se(
                        "scaling_law_product_lambda" + fmt(lambda) + "_" + std::to_string(a) +
                            std::to_string(b),
                        ml.value, mr.value, std::hypot(ml.se, mr.se), 4.0));
                }
        }
    }

    {  // fitted scaling function vs -psi(q); large-q moments need the full
       // stated ensemble to tame the lognormal tails
        std::vector<double> theory;
        for (const double q : cfg.q_grid) theory.push_back(-model.psi(q));
        const std::size_t n_paths = std::max<std::size_t>(cfg.ensemble, 200000);
        const auto ensemble = sample_lmf_ensemble(model, cfg.times, n_paths,
                                                  derive_seed(cfg.seed, "law.moments"), workers);
        const Interval q_range{std::max(model.levy.psi_domain().lo,
                                        model.stationary.moment_range().lo),
                               std::min(model.levy.psi_domain().hi,
                                        model.stationary.moment_range().hi)};
        const auto report =
            fit_scaling_function(ensemble, cfg.times, cfg.q_grid, theory, q_range, 0.05);
        for (std::size_t i = 0; i < report.q_grid.size(); ++i) {
            result.reports.push_back(check_within_se(
                "moment_scaling_q" + fmt(report.q_grid[i]), report.slopes[i], report.theory[i],
                std::max(report.slope_ses[i], report.tolerance_floor / 3.0), 3.0));
        }
    }

    {  // self-similar reduction: deterministic drift gives linear tau within 3 SE
        LmfModel ss{LevyModel{DeterministicDrift{0.3}},
                    StationaryModel{OrnsteinUhlenbeck{1.0, 1.0}}};
        std::vector<double> theory;
        for (const double q : cfg.q_grid) theory.push_back(0.3 * q);
        const auto ensemble = sample_lmf_ensemble(ss, cfg.times, cfg.ensemble,
                                                  derive_seed(cfg.seed, "law.ss"), workers);
        const auto report = fit_scaling_function(ensemble, cfg.times, cfg.q_grid, theory,
                                                 Interval{-1.0, 1e30}, 0.0);
        for (std::size_t i = 0; i < report.q_grid.size(); ++i) {
            result.reports.push_back(check_within_se("self_similar_tau_q" + fmt(report.q_grid[i]),
                                                     report.slopes[i], report.theory[i],
                                                     report.slope_ses[i], 3.0));
        }
    }
    return result;
}

SuiteResult inverse_lamperti_suite(const ExperimentConfig& cfg, int workers) {
    SuiteResult result{"inverse-lamperti", {}};
    const LmfModel& model = cfg.lmf_model();
    std::vector<double> times;
    for (int k = -8; k <= 0; ++k) times.push_back(std::ldexp(model.time_scale, k));

    {  // pathwise recovery is exact up to floating point
        const std::size_t n = 1000;
        std::vector<double> errors(n);
        const std::uint64_t seed = derive_seed(cfg.seed, "inv.exact");
        parallel_for_indices(n, workers, [&](std::size_t i) {
            const auto coupled = sample_lmf_path_coupled(model, times, seed, i);
            const auto rec = inverse_lamperti(coupled);
            const std::size_t m = times.size();
            double worst = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double y = coupled.y_values[j];
                const double got = rec.values[m - 1 - j];
                const double denom = std::max(std::abs(y), 1e-300);
                worst = std::max(worst, std::abs(got - y) / denom);
            }
            errors[i] = worst;
        });
        result.reports.push_back(check_tol("inverse_recovery_max_rel_err",
                                           *std::max_element(errors.begin(), errors.end()), 0.0,
                                           1e-12));
    }

    {  // marginals of the recovered stationary process agree across the s-grid
        const std::size_t n = 10000;
        const std::uint64_t seed_a = derive_seed(cfg.seed, "inv.stat.a");
        const std::uint64_t seed_b = derive_seed(cfg.seed, "inv.stat.b");
        Eigen::MatrixXd rec_a(n, times.size()), rec_b(n, times.size());
        parallel_for_indices(n, workers, [&](std::size_t i) {
            const auto ca = sample_lmf_path_coupled(model, times, seed_a, i);
            const auto cb = sample_lmf_path_coupled(model, times, seed_b, i);
            const auto ra = inverse_lamperti(ca);
            const auto rb = inverse_lamperti(cb);
            for (std::size_t j = 0; j < times.size(); ++j) {
                rec_a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ra.values[j];
                rec_b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rb.values[j];
            }
        });
        result.reports.push_back(ks_two_sample(column_of(rec_a, 0),
                                               column_of(rec_b, 4), 0.01,
                                               "recovered_shift_invariance_04"));
        result.reports.push_back(ks_two_sample(column_of(rec_a, 2),
                                               column_of(rec_b, 8), 0.01,
                                               "recovered_shift_invariance_28"));
    }
    return result;
}

SuiteResult cascade_measures_suite(const ExperimentConfig& cfg, int workers) {
    SuiteResult result{"cascade-measures", {}};
    const CascadeSpec spec = cfg.cascade_spec();
    const double T = spec.integral_scale;

    {  // mu(A_l(t)) closed form vs cone integration, and invariance in t
        double max_err = 0.0;
        for (const double frac : {1.0, 0.5, 1.0 / std::numbers::e, 0.05}) {
            CascadeSpec s = spec;
            s.truncation = frac * T;
            const double closed = cone_measure(s, 0.0);
            for (const double t : {0.0, 5.0 * T}) {
                const double numeric = cone_combo_measure_numeric(T, s.truncation, t, s.truncation,
                                                                  t, ConeCombo::OnlyFirst);
                max_err = std::max(max_err, std::abs(closed - numeric));
            }
        }
        result.reports.push_back(check_tol("cone_measure_vs_integration", max_err, 0.0, 1e-6));
    }

    {  // pair measures on >= 20 parameter combinations in the small-l regime
        double max_err = 0.0, max_sum_err = 0.0;
        int combos = 0;
        bool all_valid = true;
        for (const double l1 : {0.9, 0.7, 0.5, 0.3})
            for (const double ratio : {0.25, 0.5, 0.75})
                for (const double t : {T, 0.6 * T}) {
                    const double l2 = ratio * l1;
                    CascadeSpec s = spec;
                    s.truncation = 0.4 * t * (l1 - l2) / l1;
                    const auto pm = cone_pair_measures(s, t, l1, l2);
                    all_valid = all_valid && pm.closed_form_valid;
                    max_err = std::max(max_err, pm.max_abs_error);
                    const double whole = 1.0 + std::log(T / (l1 * s.truncation));
                    max_sum_err = std::max(max_sum_err, std::abs(pm.b1 + pm.b2 - whole));
                    ++combos;
                }
        result.reports.push_back(check_flag("pair_measures_regime",
                                            all_valid && combos >= 20,
                                            std::to_string(combos) + " combos, all in regime"));
        result.reports.push_back(check_tol("pair_measures_vs_integration", max_err, 0.0, 1e-6));
        result.reports.push_back(check_tol("pair_measures_additivity", max_sum_err, 0.0, 1e-9));
    }

    {  // omega covariance branches vs cone integration and branch continuity
        const double l = spec.truncation;
        double max_err = 0.0;
        for (const double tau : {0.0, 0.5 * l, l, 2.0 * l, 0.5 * T, T, 1.5 * T}) {
            const double closed = omega_covariance(spec, tau);
            const double numeric =
                spec.variance *
                cone_combo_measure_numeric(T, l, 0.0, l, tau, ConeCombo::Intersection);
            max_err = std::max(max_err, std::abs(closed - numeric));
        }
        result.reports.push_back(check_tol("omega_covariance_vs_integration", max_err, 0.0, 1e-6));
        const double eps = 1e-13;
        const double jump_l =
            std::abs(omega_covariance(spec, l * (1 - eps)) - omega_covariance(spec, l * (1 + eps)));
        const double jump_t =
            std::abs(omega_covariance(spec, T * (1 - eps)) - omega_covariance(spec, T * (1 + eps)));
        result.reports.push_back(check_tol("omega_covariance_continuity", jump_l + jump_t, 0.0, 1e-9));
    }

    {  // E Q_l([0,t]) = t, and the q=2 moment-ratio exponent
        const std::size_t n = 10000;
        const auto ensemble =
            sample_cascade_ensemble(spec, n, derive_seed(cfg.seed, "cascade.mean"), workers);
        const auto idx = [&](double t) {
            return static_cast<Eigen::Index>(
                       std::llround(t / T * static_cast<double>(spec.resolution))) - 1;
        };
        for (const double t : {0.25 * T, 0.5 * T, 0.75 * T, T}) {
            const auto col = column_of(ensemble, idx(t));
            const auto m = empirical_abs_moment(col, 1.0);
            result.reports.push_back(
                check_within_se("cascade_mean_t" + fmt(t), m.value, t, m.se, 3.0));
        }

        const auto big = column_of(ensemble, idx(0.5 * T));
        const auto small = column_of(ensemble, idx(0.25 * T));
        std::vector<double> big2(big.size()), small2(small.size());
        for (std::size_t i = 0; i < big.size(); ++i) {
            big2[i] = big[i] * big[i];
            small2[i] = small[i] * small[i];
        }
        const auto mb = empirical_abs_moment(big2, 1.0);
        const auto ms = empirical_abs_moment(small2, 1.0);
        const auto cross = covariance_with_se(big2, small2);
        const double exponent = std::log2(mb.value / ms.value);
        const double nd = static_cast<double>(big.size());
        const double var_log =
            (mb.se / mb.value) * (mb.se / mb.value) + (ms.se / ms.value) * (ms.se / ms.value) -
            2.0 * cross.value / (nd * mb.value * ms.value);
        const double se_exponent = std::sqrt(std::max(var_log, 0.0)) / std::numbers::ln2;
        const double target = 2.0 - base_laplace_exponent(spec, 2.0);
        result.reports.push_back(
            check_within_se("cascade_q2_ratio_exponent", exponent, target, se_exponent, 4.0));
    }

    {  // degenerate base law: Q_l([0,t]) = t exactly
        CascadeSpec s = spec;
        s.variance = 0.0;
        RngStream rng(cfg.seed, "cascade.degenerate", 0);
        const auto sample = simulate_lognormal_cascade(s, rng);
        double max_err = 0.0;
        for (std::size_t j = 0; j < sample.times.size(); ++j)
            max_err = std::max(max_err, std::abs(sample.cumulative[j] - sample.times[j]));
        result.reports.push_back(check_tol("cascade_degenerate_identity", max_err, 0.0, 1e-10));
    }
    return result;
}

SuiteResult cascade_cf_suite(const ExperimentConfig& cfg, int /*workers*/) {
    SuiteResult result{"cascade-cf", {}};
    CascadeSpec spec = cfg.cascade_spec();
    spec.variance = 0.2;

    {  // pinned regression constants, extended-precision evaluation
        const auto scaling = pair_cf_scaling_process(spec, 1.0, 1.0, 0.5, 1.0);
        const auto levy = pair_cf_levy(spec, 1.0, 1.0, 0.5, 1.0);
        const std::complex<double> scaling_ref(0.6390050841115954, -0.09657617272756516);
        const std::complex<double> levy_ref(0.7700556897749468, -0.11638253459116741);
        result.reports.push_back(
            check_tol("pair_cf_scaling_pinned", std::abs(scaling - scaling_ref), 0.0, 1e-12));
        result.reports.push_back(
            check_tol("pair_cf_levy_pinned", std::abs(levy - levy_ref), 0.0, 1e-12));
    }

    {  // marginals coincide exactly while the joint laws differ
        double max_marginal_gap = 0.0;
        for (const double a1 : {0.5, 1.0, 2.0}) {
            const auto scaling = pair_cf_scaling_process(spec, a1, 0.0, 0.5, 1.0);
            const auto levy = pair_cf_levy(spec, a1, 0.0, 0.5, 1.0);
            const auto ref = std::exp(base_characteristic_exponent(spec, a1) * 0.5);
            max_marginal_gap = std::max({max_marginal_gap, std::abs(scaling - levy),
                                         std::abs(scaling - ref)});
        }
        result.reports.push_back(
            check_tol("marginal_cf_coincide", max_marginal_gap, 0.0, 1e-14));
        result.reports.push_back(check_flag(
            "joint_cf_differ",
            std::abs(pair_cf_scaling_process(spec, 1.0, 1.0, 0.5, 1.0) -
                     pair_cf_levy(spec, 1.0, 1.0, 0.5, 1.0)) > 1e-3,
            "gap at (1,1,0.5,1)"));
    }

    {  // non-Levy gap positive for v > 0, zero for v = 0, growing pointwise
        std::vector<double> gaps, point_gaps;
        for (const double v : {0.1, 0.2, 0.4}) {
            CascadeSpec s = spec;
            s.variance = v;
            gaps.push_back(non_levy_gap(s));
            point_gaps.push_back(std::abs(pair_cf_scaling_process(s, 1.0, 1.0, 0.5, 1.0) -
                                          pair_cf_levy(s, 1.0, 1.0, 0.5, 1.0)));
        }
        CascadeSpec s0 = spec;
        s0.variance = 0.0;
        const double zero_gap = non_levy_gap(s0);
        result.reports.push_back(check_flag(
            "non_levy_gap_positive", gaps[0] > 0.0 && gaps[1] > 0.0 && gaps[2] > 0.0,
            "gaps " + fmt(gaps[0]) + ", " + fmt(gaps[1]) + ", " + fmt(gaps[2])));
        result.reports.push_back(check_flag(
            "non_levy_gap_grows_pointwise",
            point_gaps[1] > point_gaps[0] && point_gaps[2] > point_gaps[1],
            "at (1,1,0.5,1): " + fmt(point_gaps[0]) + " < " + fmt(point_gaps[1]) + " < " +
                fmt(point_gaps[2])));
        result.reports.push_back(check_tol("non_levy_gap_degenerate", zero_gap, 0.0, 0.0));
    }

    {  // pure drift base law: linear Psi kills the coupling term
        const CharacteristicExponent drift = [](double theta) {
            return std::complex<double>(0.0, 0.35 * theta);
        };
        double max_gap = 0.0;
        for (const auto& p : default_cf_grid())
            max_gap = std::max(max_gap, std::abs(pair_cf_scaling_process(drift, p.a1, p.a2, p.s1, p.s2) -
                                                 pair_cf_levy(drift, p.a1, p.a2, p.s1, p.s2)));
        result.reports.push_back(check_tol("pure_drift_cf_equality", max_gap, 0.0, 1e-14));
    }
    return result;
}

SuiteResult covariance_suite(const ExperimentConfig& cfg, int workers) {
    SuiteResult result{"covariance", {}};
    const LmfModel& model = cfg.lmf_model();
    const double T = model.time_scale;

    {  // matched construction: E X(t)X(s) = min(t,s)/T on a 6-point grid
        std::vector<double> grid;
        for (const double f : {0.125, 0.25, 0.375, 0.5, 0.75, 1.0}) grid.push_back(f * T);
        const auto ensemble = sample_lmf_ensemble(model, grid, cfg.ensemble,
                                                  derive_seed(cfg.seed, "cov.grid"), workers);
        const auto est = empirical_cov(ensemble);
        double worst_dev = 0.0;
        for (Eigen::Index a = 0; a < est.cov.rows(); ++a)
            for (Eigen::Index b = 0; b <= a; ++b) {
                const double theory = theoretical_cov(model, grid[static_cast<std::size_t>(a)],
                                                      grid[static_cast<std::size_t>(b)]);
                worst_dev = std::max(worst_dev, std::abs(est.cov(a, b) - theory) / est.se(a, b));
            }
        TestReport r;
        r.name = "matched_covariance_grid";
        r.statistic = worst_dev;
        r.p_value = worst_dev;
        r.threshold = 3.0;
        r.pass = worst_dev <= 3.0;
        r.detail = "max |cov - min(t,s)/T| in SE units over 21 entries";
        result.reports.push_back(r);
    }

    {  // matched construction has uncorrelated increments
        std::vector<double> grid;
        for (int j = 1; j <= 16; ++j) grid.push_back(static_cast<double>(j) / 16.0 * T);
        const auto ensemble = sample_lmf_ensemble(model, grid, cfg.ensemble,
                                                  derive_seed(cfg.seed, "cov.inc"), workers);
        const auto inc = increments_of(ensemble);
        const std::pair<int, int> pairs[] = {{0, 1}, {4, 5}, {9, 10}, {13, 14}, {0, 2}, {6, 8}};
        for (const auto& [a, b] : pairs) {
            const auto corr = correlation_with_se(column_of(inc, a), column_of(inc, b));
            result.reports.push_back(check_within_se(
                "increment_corr_" + std::to_string(a) + "_" + std::to_string(b), corr.value, 0.0,
                corr.se, 3.0));
        }
    }

    {  // general pairing: three-case formula vs Monte Carlo
        LmfModel general{LevyModel{BrownianWithDrift{-0.3, 0.4}},
                         StationaryModel{OrnsteinUhlenbeck{1.0, 1.0}}};
        const std::vector<double> grid = {0.25, 0.5, 1.0};
        const auto ensemble = sample_lmf_ensemble(general, grid, 200000,
                                                  derive_seed(cfg.seed, "cov.general"), workers);
        const auto est = empirical_cov(ensemble);
        for (Eigen::Index a = 0; a < 3; ++a)
            for (Eigen::Index b = 0; b <= a; ++b) {
                const double theory = theoretical_cov(general, grid[static_cast<std::size_t>(a)],
                                                      grid[static_cast<std::size_t>(b)]);
                result.reports.push_back(check_within_se(
                    "general_cov_" + fmt(grid[static_cast<std::size_t>(a)]) + "_" +
                        fmt(grid[static_cast<std::size_t>(b)]),
                    est.cov(a, b), theory, est.se(a, b), 3.0));
            }
    }

    {  // gamma-formula identities
        const double psi1 = model.psi(1.0);
        double worst_matched = 0.0, worst_ou = 0.0;
        for (double h = 0.0; h <= 6.0; h += 0.25) {
            worst_matched = std::max(worst_matched,
                                     std::abs(gamma_from_psi(psi1, -1.0, 1.0, h) -
                                              std::exp(-(psi1 + 1.0) * h)));
            worst_ou = std::max(worst_ou, std::abs(gamma_from_psi(-0.5, -1.0, 1.0, h) -
                                                   std::exp(-0.5 * h)));
        }
        result.reports.push_back(check_tol("gamma_matched_identity", worst_matched, 0.0, 1e-12));
        result.reports.push_back(check_tol("gamma_ou_identity", worst_ou, 0.0, 1e-12));
    }

    {  // PSD checks of covariance candidates
        std::vector<double> grid;
        for (int k = 0; k <= 256; ++k) grid.push_back(static_cast<double>(k) / 32.0);
        const auto ou_psd = check_positive_semidefinite(
            [](double h) { return std::exp(-std::abs(h)); }, grid);
        const std::vector<double> small_grid = {0.0, 1.0, 2.0};
        const auto bad_psd = check_positive_semidefinite(
            [](double h) { return h == 0.0 ? 1.0 : -1.0; }, small_grid);
        const double p1 = model.psi(1.0), p2 = model.psi(2.0);
        const auto gamma_psd = check_positive_semidefinite(
            [p1, p2](double h) { return gamma_from_psi(p1, p2, 1.0, std::abs(h)); }, grid);
        result.reports.push_back(check_flag("psd_ou", ou_psd.ok,
                                            "min eigenvalue " + fmt(ou_psd.min_eigenvalue)));
        result.reports.push_back(check_flag("psd_indicator_rejected", !bad_psd.ok,
                                            "min eigenvalue " + fmt(bad_psd.min_eigenvalue)));
        result.reports.push_back(check_flag("psd_gamma_from_psi", gamma_psd.ok,
                                            "min eigenvalue " + fmt(gamma_psd.min_eigenvalue)));
    }

    {  // fractional-Gaussian-noise increment correlations for psi(2) = -0.8
        LevyModel levy{BrownianWithDrift{-0.65, 0.5}};
        const double p1 = levy.laplace_exponent(1.0), p2 = levy.laplace_exponent(2.0);
        LmfModel fgn{levy,
                     StationaryModel{GaussianFromCovariance{[p1, p2](double h) {
                         return gamma_from_psi(p1, p2, 1.0, std::abs(h));
                     }}}};
        std::vector<double> grid;
        for (int j = 1; j <= 9; ++j) grid.push_back(static_cast<double>(j) / 9.0);
        const auto ensemble =
            sample_lmf_ensemble(fgn, grid, 20000, derive_seed(cfg.seed, "cov.fgn"), workers);
        const auto inc = increments_of(ensemble);
        const auto fgn_corr = [p2](int k) {
            const double kk = std::abs(k);
            return 0.5 * (std::pow(kk + 1.0, -p2) + std::pow(std::abs(kk - 1.0), -p2) -
                          2.0 * std::pow(kk, -p2));
        };
        for (const auto& [a, b] : {std::pair<int, int>{0, 1}, {3, 4}, {2, 4}}) {
            const auto corr = correlation_with_se(column_of(inc, a), column_of(inc, b));
            result.reports.push_back(check_within_se(
                "fgn_corr_lag" + std::to_string(b - a) + "_" + std::to_string(a), corr.value,
                fgn_corr(b - a), corr.se, 3.0));
        }
    }
    return result;
}

SuiteResult mellin_suite(const ExperimentConfig& cfg, int /*workers*/) {
    SuiteResult result{"mellin", {}};
    const std::size_t n = 100000;
    std::vector<double> xs(n), ys(n), prod(n);
    RngStream rng_x(cfg.seed, "mellin.x", 0), rng_y(cfg.seed, "mellin.y", 0);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::exp(rng_x.normal());
        ys[i] = std::exp(rng_y.normal());
        prod[i] = xs[i] * ys[i];
    }

    {  // lognormal marginal: M(theta i) = exp(-theta^2/2)
        const auto m = empirical_mellin(xs, 1.0);
        const double dev = std::max(std::abs(m.value.real() - std::exp(-0.5)) / m.se_re,
                                    std::abs(m.value.imag()) / m.se_im);
        TestReport r;
        r.name = "mellin_lognormal_theta1";
        r.statistic = dev;
        r.p_value = dev;
        r.threshold = 4.0;
        r.pass = dev <= 4.0;
        result.reports.push_back(r);
    }

    {  // product law: Mellin of the product factorizes over independent factors
        for (const double theta : {0.5, 1.0, 2.0, 3.0}) {
            const auto m1 = empirical_mellin(xs, theta);
            const auto m2 = empirical_mellin(ys, theta);
            const auto m12 = empirical_mellin(prod, theta);
            // the gap equals the sample covariance of the two unit-modulus
            // factors, so its component SEs calibrate the check
            const std::complex<double> gap = m12.value - m1.value * m2.value;
            std::vector<double> w_re(n), w_im(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto w = (std::polar(1.0, theta * std::log(xs[i])) - m1.value) *
                               (std::polar(1.0, theta * std::log(ys[i])) - m2.value);
                w_re[i] = w.real();
                w_im[i] = w.imag();
            }
            double mean_re = 0.0, mean_im = 0.0, ss_re = 0.0, ss_im = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mean_re += w_re[i];
                mean_im += w_im[i];
            }
            mean_re /= static_cast<double>(n);
            mean_im /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                ss_re += (w_re[i] - mean_re) * (w_re[i] - mean_re);
                ss_im += (w_im[i] - mean_im) * (w_im[i] - mean_im);
            }
            const double se_re = std::sqrt(ss_re / (static_cast<double>(n) - 1.0)) /
                                 std::sqrt(static_cast<double>(n));
            const double se_im = std::sqrt(ss_im / (static_cast<double>(n) - 1.0)) /
                                 std::sqrt(static_cast<double>(n));
            const double dev = std::max(std::abs(gap.real()) / se_re, std::abs(gap.imag()) / se_im);
            TestReport r;
            r.name = "mellin_product_theta" + fmt(theta);
            r.statistic = std::abs(gap);
            r.p_value = dev;
            r.threshold = 4.0;
            r.pass = dev <= 4.0;
            r.detail = "|M_xy - M_x M_y| = " + fmt(std::abs(gap));
            result.reports.push_back(r);
        }
    }

    {  // theta = 0 returns the positive-mass fraction
        std::vector<double> with_zeros = {0.0, 1.0, 2.0, 0.0, 3.0};
        const auto m = empirical_mellin(with_zeros, 0.0);
        result.reports.push_back(check_tol("mellin_zero_mass", m.value.real(), 0.6, 1e-15));
    }
    return result;
}

}  // namespace

bool SuiteResult::pass() const {
    return std::all_of(reports.begin(), reports.end(),
                       [](const TestReport& r) { return r.pass; });
}

std::vector<std::string> SuiteResult::failing_names() const {
    std::vector<std::string> names;
    for (const auto& r : reports)
        if (!r.pass) names.push_back(r.name);
    return names;
}

std::vector<std::string> suite_names() {
    return {"scaling-family", "lmf-law",    "inverse-lamperti", "cascade-measures",
            "cascade-cf",     "covariance", "mellin"};
}

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg, int workers) {
    if (name == "scaling-family") return scaling_family_suite(cfg, workers);
    if (name == "lmf-law") return lmf_law_suite(cfg, workers);
    if (name == "inverse-lamperti") return inverse_lamperti_suite(cfg, workers);
    if (name == "cascade-measures") return cascade_measures_suite(cfg, workers);
    if (name == "cascade-cf") return cascade_cf_suite(cfg, workers);
    if (name == "covariance") return covariance_suite(cfg, workers);
    if (name == "mellin") return mellin_suite(cfg, workers);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names,
                                    const ExperimentConfig& cfg, int workers) {
    std::vector<std::string> expanded;
    for (const auto& n : names) {
        if (n == "all") {
            const auto all = suite_names();
            expanded.insert(expanded.end(), all.begin(), all.end());
        } else {
            expanded.push_back(n);
        }
    }
    std::vector<SuiteResult> results;
    results.reserve(expanded.size());
    for (const auto& n : expanded) results.push_back(run_suite(n, cfg, workers));
    return results;
}

}  // namespace mfp
