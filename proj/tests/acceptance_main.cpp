// Acceptance suite: runs every project acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mfp/cascade.hpp"
#include "mfp/ensemble.hpp"
#include "mfp/lmf.hpp"
#include "mfp/scaling.hpp"
#include "mfp/stats.hpp"
#include "oracles.hpp"

using namespace mfp;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240817;
int g_failures = 0;
int g_workers = 2;

struct Criterion {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

void run_criterion(int number, const std::string& name, double budget_seconds,
                   const std::function<void(Criterion&)>& body) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > budget_seconds) {
        c.pass = false;
        c.detail += (c.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%2d] %-34s %s (%.2f s%s%s)\n", number, name.c_str(),
                c.pass ? "PASS" : "FAIL", elapsed, c.detail.empty() ? "" : "; ",
                c.detail.c_str());
    std::fflush(stdout);
    if (!c.pass) ++g_failures;
}

std::vector<double> dyadic(double scale, int lo, int hi) {
    std::vector<double> t;
    for (int k = lo; k <= hi; ++k) t.push_back(std::ldexp(scale, k));
    return t;
}

std::vector<double> column_of(const Eigen::MatrixXd& m, Eigen::Index j) {
    return {m.col(j).data(), m.col(j).data() + m.rows()};
}

// ---- criterion bodies -----------------------------------------------------

void criterion_inverse_lamperti(Criterion& c) {
    const auto model = mbm_analog_preset(0.5, 1.0);
    const auto times = dyadic(1.0, -8, 0);
    double worst = 0.0;
    for (std::uint64_t p = 0; p < 1000; ++p) {
        const auto coupled = sample_lmf_path_coupled(model, times, kSeed, p);
        const auto rec = inverse_lamperti(coupled);
        const std::size_t n = times.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double y = coupled.y_values[i];
            worst = std::max(worst, std::abs(rec.values[n - 1 - i] - y) /
                                        std::max(std::abs(y), 1e-300));
        }
    }
    c.require(worst <= 1e-12, "max rel err " + std::to_string(worst));
}

void criterion_scaling_algebra(Criterion& c) {
    const LevyModel levy{BrownianWithDrift{-0.75, 0.5}};
    std::vector<double> lambdas, times;
    for (int k = 7; k >= 0; --k) lambdas.push_back(std::ldexp(1.0, -k));
    for (int k = 7; k >= 0; --k) times.push_back(std::ldexp(1.0, -k));
    double max_identity = 0.0, max_mult = 0.0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        RngStream rng(kSeed, "acc.mult", rep);
        const auto grid = sample_scaling_grid(levy, std::log(128.0) + 1.0, lambdas, times, rng);
        for (std::size_t j = 0; j < 8; ++j)
            max_identity = std::max(max_identity, std::abs(grid.value(7, j) - 1.0));
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t m = 0; m < 8; ++m)
                for (std::size_t j = 0; j < 8; ++j) {
                    if (i + m < 7 || m + j < 7) continue;
                    const double lhs = grid.value(i + m - 7, j);
                    const double rhs = grid.value(i, m + j - 7) * grid.value(m, j);
                    max_mult = std::max(max_mult, std::abs(lhs - rhs) / std::abs(lhs));
                }
    }
    c.require(max_identity == 0.0, "M(1,t) deviates by " + std::to_string(max_identity));
    c.require(max_mult <= 1e-12, "multiplicativity rel err " + std::to_string(max_mult));

    const std::size_t n = 10000;
    const double lambda = std::exp(-1.0), t = 0.7;
    std::vector<double> products(n), direct(n);
    parallel_for_indices(n, g_workers, [&](std::size_t i) {
        double prod = 1.0;
        for (std::size_t k = 0; k < 4; ++k) {
            RngStream rng(kSeed, "acc.div.parts", i * 4 + k);
            const double lam[1] = {std::pow(lambda, 0.25)};
            const double tt[1] = {t};
            prod *= sample_scaling_grid(levy, 1.5, lam, tt, rng).value(0, 0);
        }
        products[i] = prod;
        RngStream rng(kSeed, "acc.div.direct", i);
        const double lam[1] = {lambda};
        const double tt[1] = {t};
        direct[i] = sample_scaling_grid(levy, 1.5, lam, tt, rng).value(0, 0);
    });
    const auto ks = ks_two_sample(products, direct, 0.01, "divisibility");
    c.require(ks.pass, "divisibility KS p=" + std::to_string(ks.p_value));
}

void criterion_marginal_cf(Criterion& c) {
    const std::vector<LevyModel> models = {LevyModel{BrownianWithDrift{0.0, 1.0}},
                                           LevyModel{GammaProcess{2.0, 3.0}}};
    const double lambda = std::exp(-1.0);
    const std::size_t n = 100000;
    std::uint64_t salt = 0;
    for (const auto& levy : models) {
        for (const double t : {0.4, 0.9}) {
            std::vector<double> logm(n);
            const std::string label = "acc.cf." + std::to_string(salt++);
            parallel_for_indices(n, g_workers, [&](std::size_t i) {
                RngStream rng(kSeed, label, i);
                const double lam[1] = {lambda};
                const double tt[1] = {t};
                logm[i] = std::log(sample_scaling_grid(levy, 1.0, lam, tt, rng).value(0, 0));
            });
            for (const double theta : {-2.0, -1.0, 1.0, 2.0}) {
                const auto ecf = empirical_cf(logm, theta);
                const auto ref = std::exp(levy.characteristic_exponent(theta));
                const double dev = std::max(std::abs(ecf.value.real() - ref.real()) / ecf.se_re,
                                            std::abs(ecf.value.imag() - ref.imag()) / ecf.se_im);
                c.require(dev <= 4.0, levy.name() + " t=" + std::to_string(t) +
                                          " theta=" + std::to_string(theta) +
                                          " dev=" + std::to_string(dev));
            }
        }
    }
}

void criterion_moment_scaling(Criterion& c) {
    const auto model = mbm_analog_preset(0.5, 1.0);
    const auto times = dyadic(1.0, -8, 0);
    const auto ensemble = sample_lmf_ensemble(model, times, 200000, kSeed + 4, g_workers);
    const std::vector<double> qs = {0.5, 1.0, 2.0, 3.0};
    std::vector<double> theory;
    for (const double q : qs) theory.push_back(-model.psi(q));
    const auto report =
        fit_scaling_function(ensemble, times, qs, theory, Interval{-1.0, 1e30}, 0.05);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double dev = std::abs(report.slopes[i] - theory[i]);
        c.require(dev <= std::max(3.0 * report.slope_ses[i], 0.05),
                  "q=" + std::to_string(qs[i]) + " |tau_hat+psi(q)|=" + std::to_string(dev));
    }
}

void criterion_covariance(Criterion& c) {
    const auto model = mbm_analog_preset(0.5, 1.0);
    std::vector<double> grid;
    for (const double f : {0.125, 0.25, 0.375, 0.5, 0.75, 1.0}) grid.push_back(f);
    const auto ensemble = sample_lmf_ensemble(model, grid, 200000, kSeed + 5, g_workers);
    const auto est = empirical_cov(ensemble);
    for (Eigen::Index a = 0; a < est.cov.rows(); ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            const double theory = std::min(grid[static_cast<std::size_t>(a)],
                                           grid[static_cast<std::size_t>(b)]);
            const double dev = std::abs(est.cov(a, b) - theory) / est.se(a, b);
            c.require(dev <= 3.0, "cov(" + std::to_string(a) + "," + std::to_string(b) +
                                      ") dev=" + std::to_string(dev));
        }

    std::vector<double> inc_grid;
    for (int j = 1; j <= 16; ++j) inc_grid.push_back(static_cast<double>(j) / 16.0);
    const auto paths = sample_lmf_ensemble(model, inc_grid, 200000, kSeed + 6, g_workers);
    Eigen::MatrixXd inc(paths.rows(), paths.cols() - 1);
    for (Eigen::Index j = 0; j + 1 < paths.cols(); ++j)
        inc.col(j) = paths.col(j + 1) - paths.col(j);
    const std::pair<int, int> pairs[] = {{0, 1}, {4, 5}, {9, 10}, {13, 14}, {0, 2}, {6, 8}};
    for (const auto& [a, b] : pairs) {
        const auto cov = covariance_with_se(column_of(inc, a), column_of(inc, b));
        const double dev = std::abs(cov.value) / cov.se;
        c.require(dev <= 3.0, "increment corr (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") dev=" + std::to_string(dev));
    }
}

void criterion_self_similar(Criterion& c) {
    LmfModel model{LevyModel{DeterministicDrift{0.3}},
                   StationaryModel{OrnsteinUhlenbeck{1.0, 1.0}}};
    const auto times = dyadic(1.0, -8, 0);
    const auto ensemble = sample_lmf_ensemble(model, times, 100000, kSeed + 7, g_workers);
    const std::vector<double> qs = {0.5, 1.0, 2.0, 3.0};
    std::vector<double> theory;
    for (const double q : qs) theory.push_back(0.3 * q);
    const auto report =
        fit_scaling_function(ensemble, times, qs, theory, Interval{-1.0, 1e30}, 0.0);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double dev = std::abs(report.slopes[i] - theory[i]);
        c.require(dev <= 3.0 * report.slope_ses[i],
                  "q=" + std::to_string(qs[i]) + " dev=" + std::to_string(dev) + " se=" +
                      std::to_string(report.slope_ses[i]));
    }
}

void criterion_cascade_measures(Criterion& c) {
    const double T = 1.0;
    int combos = 0;
    double worst = 0.0;
    for (const double l1 : {0.9, 0.7, 0.5, 0.3})
        for (const double ratio : {0.25, 0.5, 0.75})
            for (const double t : {T, 0.6 * T}) {
                const double l2 = ratio * l1;
                CascadeSpec spec{T, 0.4 * t * (l1 - l2) / l1, 0.2, 16, 4.0};
                const auto pm = cone_pair_measures(spec, t, l1, l2);
                if (!pm.closed_form_valid) continue;
                const double b1 = oracles::cone_measure_simpson(
                    T, l1 * spec.truncation, l1 * t, l2 * spec.truncation, l2 * t,
                    ConeCombo::FirstMinusSecond);
                const double b2 = oracles::cone_measure_simpson(
                    T, l1 * spec.truncation, l1 * t, l2 * spec.truncation, l2 * t,
                    ConeCombo::Intersection);
                const double b3 = oracles::cone_measure_simpson(
                    T, l1 * spec.truncation, l1 * t, l2 * spec.truncation, l2 * t,
                    ConeCombo::SecondMinusFirst);
                worst = std::max({worst, std::abs(pm.b1 - b1), std::abs(pm.b2 - b2),
                                  std::abs(pm.b3 - b3)});
                ++combos;
            }
    // whole-cone measures and the omega covariance branches
    for (const double l : {1.0, 0.5, 0.1, 0.01}) {
        CascadeSpec spec{T, l, 0.2, 16, 4.0};
        const double closed = cone_measure(spec, 0.3);
        const double numeric =
            oracles::cone_measure_simpson(T, l, 0.3, l, 0.3, ConeCombo::OnlyFirst);
        worst = std::max(worst, std::abs(closed - numeric));
        ++combos;
        for (const double tau : {0.3 * l, l, 0.5 * (l + T), T}) {
            const double cov = omega_covariance(spec, tau);
            const double ref =
                0.2 * oracles::cone_measure_simpson(T, l, 0.0, l, tau, ConeCombo::Intersection);
            worst = std::max(worst, std::abs(cov - ref));
        }
    }
    c.require(combos >= 20, "only " + std::to_string(combos) + " combos");
    c.require(worst <= 1e-6, "max |closed - numeric| = " + std::to_string(worst));
}

void criterion_cascade_mean_scaling(Criterion& c) {
    const CascadeSpec spec{1.0, 1.0 / 256.0, 0.2, 512, 4.0};
    const auto ensemble = sample_cascade_ensemble(spec, 10000, kSeed + 8, g_workers);
    for (const double t : {0.25, 0.5, 0.75, 1.0}) {
        const auto idx = static_cast<Eigen::Index>(std::llround(t * 512.0)) - 1;
        const auto col = column_of(ensemble, idx);
        const auto est = empirical_abs_moment(col, 1.0);
        const double dev = std::abs(est.value - t) / est.se;
        c.require(dev <= 3.0, "mean at t=" + std::to_string(t) + " dev=" + std::to_string(dev));
    }

    const auto big = column_of(ensemble, 255), small = column_of(ensemble, 127);
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
    const double var_log = (mb.se / mb.value) * (mb.se / mb.value) +
                           (ms.se / ms.value) * (ms.se / ms.value) -
                           2.0 * cross.value / (nd * mb.value * ms.value);
    const double se = std::sqrt(std::max(var_log, 1e-30)) / std::numbers::ln2;
    const double target = 2.0 - base_laplace_exponent(spec, 2.0);
    c.require(std::abs(exponent - target) <= 4.0 * se,
              "exponent " + std::to_string(exponent) + " target " + std::to_string(target) +
                  " se " + std::to_string(se));
}

void criterion_non_levy(Criterion& c) {
    CascadeSpec spec{1.0, 0.01, 0.0, 16, 4.0};
    c.require(non_levy_gap(spec) == 0.0, "gap not identically zero at v=0");
    for (const double v : {0.1, 0.2, 0.4}) {
        spec.variance = v;
        c.require(non_levy_gap(spec) > 0.0, "gap not positive at v=" + std::to_string(v));
    }
    spec.variance = 0.2;
    double marginal_gap = 0.0;
    for (const double a1 : {0.5, 1.0, 2.0}) {
        const auto scaling = pair_cf_scaling_process(spec, a1, 0.0, 0.5, 1.0);
        const auto levy = pair_cf_levy(spec, a1, 0.0, 0.5, 1.0);
        marginal_gap = std::max(marginal_gap, std::abs(scaling - levy));
    }
    c.require(marginal_gap <= 1e-15, "marginal CFs differ by " + std::to_string(marginal_gap));
    c.require(std::abs(pair_cf_scaling_process(spec, 1.0, 1.0, 0.5, 1.0) -
                       pair_cf_levy(spec, 1.0, 1.0, 0.5, 1.0)) > 1e-3,
              "joint CFs do not separate");
}

void criterion_gamma_formula(Criterion& c) {
    double worst_matched = 0.0, worst_ou = 0.0;
    for (double h = 0.0; h <= 8.0; h += 0.05) {
        worst_matched = std::max(worst_matched, std::abs(gamma_from_psi(-0.625, -1.0, 1.0, h) -
                                                         std::exp(-0.375 * h)));
        worst_ou =
            std::max(worst_ou, std::abs(gamma_from_psi(-0.5, -1.0, 1.0, h) - std::exp(-0.5 * h)));
    }
    c.require(worst_matched <= 1e-12, "matched identity err " + std::to_string(worst_matched));
    c.require(worst_ou <= 1e-12, "ou identity err " + std::to_string(worst_ou));
}

void criterion_mellin(Criterion& c) {
    const std::size_t n = 100000;
    std::vector<double> xs(n), ys(n), prod(n);
    RngStream rng_x(kSeed, "acc.mellin.x", 0), rng_y(kSeed, "acc.mellin.y", 0);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::exp(rng_x.normal());
        ys[i] = std::exp(0.7 * rng_y.normal() + 0.1);
        prod[i] = xs[i] * ys[i];
    }
    for (const double theta : {0.5, 1.0, 2.0, 3.0}) {
        const auto m1 = empirical_mellin(xs, theta);
        const auto m2 = empirical_mellin(ys, theta);
        const auto m12 = empirical_mellin(prod, theta);
        const auto gap = m12.value - m1.value * m2.value;
        double mean_re = 0.0, mean_im = 0.0, ss_re = 0.0, ss_im = 0.0;
        std::vector<double> w_re(n), w_im(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto w = (std::polar(1.0, theta * std::log(xs[i])) - m1.value) *
                           (std::polar(1.0, theta * std::log(ys[i])) - m2.value);
            w_re[i] = w.real();
            w_im[i] = w.imag();
            mean_re += w.real();
            mean_im += w.imag();
        }
        mean_re /= static_cast<double>(n);
        mean_im /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            ss_re += (w_re[i] - mean_re) * (w_re[i] - mean_re);
            ss_im += (w_im[i] - mean_im) * (w_im[i] - mean_im);
        }
        const double se_re = std::sqrt(ss_re / static_cast<double>(n - 1) / static_cast<double>(n));
        const double se_im = std::sqrt(ss_im / static_cast<double>(n - 1) / static_cast<double>(n));
        const double dev =
            std::max(std::abs(gap.real()) / se_re, std::abs(gap.imag()) / se_im);
        c.require(dev <= 4.0, "theta=" + std::to_string(theta) + " dev=" + std::to_string(dev));
    }
}

void criterion_reproducibility(Criterion& c) {
#ifndef MFP_CLI_PATH
    c.require(false, "CLI path not wired");
#else
    const fs::path dir = fs::temp_directory_path() / "mfp_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "config.json");
        cfg << R"({"seed": 777, "ensemble": 4000,
                   "times": {"kind": "dyadic", "min_exp": -6, "max_exp": 0}})";
    }
    const auto run = [&](const std::string& args) {
        const std::string cmd = "cd " + dir.string() + " && " + MFP_CLI_PATH + " " + args +
                                " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const int one = run("--config config.json --workers 1 --out one verify covariance");
    const int two = run("--config config.json --workers 2 --out two verify covariance");
    c.require(one == 0, "workers=1 run exited " + std::to_string(one));
    c.require(two == 0, "workers=2 run exited " + std::to_string(two));

    const auto strip = [](const fs::path& file) {
        std::ifstream in(file);
        std::ostringstream out;
        std::string line;
        while (std::getline(in, line))
            if (line.find("generated_at") == std::string::npos) out << line << "\n";
        return out.str();
    };
    const auto lhs = strip(dir / "one" / "verify_covariance.json");
    const auto rhs = strip(dir / "two" / "verify_covariance.json");
    c.require(!lhs.empty() && lhs == rhs, "verdict JSON differs across worker counts");
    fs::remove_all(dir);
#endif
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_workers = std::atoi(argv[1]);
    std::printf("acceptance suite (seed %llu, %d workers)\n",
                static_cast<unsigned long long>(kSeed), g_workers);

    run_criterion(1, "inverse-lamperti exactness", 1.0, criterion_inverse_lamperti);
    run_criterion(2, "scaling-factor algebra", 10.0, criterion_scaling_algebra);
    run_criterion(3, "levy marginal law", 30.0, criterion_marginal_cf);
    run_criterion(4, "moment scaling", 120.0, criterion_moment_scaling);
    run_criterion(5, "covariance / increments", 120.0, criterion_covariance);
    run_criterion(6, "self-similar reduction", 60.0, criterion_self_similar);
    run_criterion(7, "cascade measures", 30.0, criterion_cascade_measures);
    run_criterion(8, "cascade mean and scaling", 180.0, criterion_cascade_mean_scaling);
    run_criterion(9, "non-levy demonstration", 1.0, criterion_non_levy);
    run_criterion(10, "gamma-formula consistency", 1.0, criterion_gamma_formula);
    run_criterion(11, "mellin product property", 10.0, criterion_mellin);
    run_criterion(12, "reproducibility", 600.0, criterion_reproducibility);

    if (g_failures == 0)
        std::printf("ACCEPTANCE: all 12 criteria passed\n");
    else
        std::printf("ACCEPTANCE: %d criteria FAILED\n", g_failures);
    return g_failures;
}
