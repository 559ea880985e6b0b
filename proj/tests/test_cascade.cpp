#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mfp/cascade.hpp"
#include "mfp/ensemble.hpp"
#include "mfp/stats.hpp"
#include "oracles.hpp"

using namespace mfp;

namespace {

CascadeSpec base_spec() { return CascadeSpec{1.0, 1.0 / 64.0, 0.2, 256, 4.0}; }

}  // namespace

TEST_CASE("cone measure closed form and invariance in t") {
    CascadeSpec spec = base_spec();
    spec.truncation = spec.integral_scale;
    CHECK(cone_measure(spec, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

    spec.truncation = spec.integral_scale / std::numbers::e;
    CHECK(cone_measure(spec, 3.0) == doctest::Approx(2.0).epsilon(1e-14));

    // independent Simpson integration of the cone
    for (const double t : {0.0, 5.0}) {
        const double numeric = oracles::cone_measure_simpson(
            spec.integral_scale, spec.truncation, t, spec.truncation, t, ConeCombo::OnlyFirst);
        CHECK(std::abs(numeric - 2.0) <= 1e-8);
    }

    spec.truncation = 2.0;  // above T
    CHECK_THROWS_AS(static_cast<void>(cone_measure(spec, 0.0)), std::domain_error);
}

TEST_CASE("pair measures: closed forms at the spec points") {
    CascadeSpec spec = base_spec();
    const double T = spec.integral_scale;

    // out of the small-l regime the closed form is still the paper formula,
    // and the validity flag reports it
    spec.truncation = T;
    const auto edge = cone_pair_measures(spec, T, 0.5, 0.25);
    CHECK(edge.b2 == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK_FALSE(edge.closed_form_valid);

    // same lambdas with l small enough: closed form equals the geometry
    spec.truncation = T / 8.0;
    const auto inside = cone_pair_measures(spec, T, 0.5, 0.25);
    CHECK(inside.closed_form_valid);
    CHECK(inside.b2 == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(inside.max_abs_error <= 1e-6);

    // lambda1 -> 1 limit: mu(B2) -> -log(1 - lambda)
    spec.truncation = T / 16.0;
    const auto limit = cone_pair_measures(spec, T, 1.0, 0.5);
    CHECK(limit.closed_form_valid);
    CHECK(limit.b2 == doctest::Approx(-std::log(0.5)).epsilon(1e-14));
    CHECK(limit.max_abs_error <= 1e-6);

    // additivity: mu(B1) + mu(B2) = mu(A_{l1 l}(l1 t))
    const double whole = 1.0 + std::log(T / (1.0 * spec.truncation));
    CHECK(limit.b1 + limit.b2 == doctest::Approx(whole).epsilon(1e-12));
    const double whole_numeric = oracles::cone_measure_simpson(
        T, 1.0 * spec.truncation, 1.0 * T, 0.5 * spec.truncation, 0.5 * T, ConeCombo::OnlyFirst);
    CHECK(std::abs(limit.b1_numeric + limit.b2_numeric - whole_numeric) <= 1e-8);

    CHECK_THROWS_AS(static_cast<void>(cone_pair_measures(spec, T, 0.25, 0.5)),
                    std::invalid_argument);
}

TEST_CASE("pair measures agree with the independent Simpson oracle in-regime") {
    CascadeSpec spec = base_spec();
    const double T = spec.integral_scale;
    double worst = 0.0;
    int combos = 0;
    for (const double l1 : {0.9, 0.6, 0.35})
        for (const double ratio : {0.3, 0.6})
            for (const double t : {T, 0.55 * T}) {
                const double l2 = ratio * l1;
                spec.truncation = 0.45 * t * (l1 - l2) / l1;
                const auto pm = cone_pair_measures(spec, t, l1, l2);
                REQUIRE(pm.closed_form_valid);
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
    CHECK(combos >= 12);
    CHECK(worst <= 1e-6);
}

TEST_CASE("omega covariance branches and continuity") {
    const CascadeSpec spec = base_spec();
    const double T = spec.integral_scale, l = spec.truncation, v = spec.variance;
    CHECK(omega_covariance(spec, 0.0) == doctest::Approx(v * (1.0 + std::log(T / l))));
    CHECK(omega_covariance(spec, T) == 0.0);
    CHECK(omega_covariance(spec, 2.0 * T) == 0.0);
    CHECK(omega_covariance(spec, l) == doctest::Approx(v * std::log(T / l)).epsilon(1e-13));

    for (const double tau : {0.3 * l, l, 3.0 * l, 0.4 * T, T}) {
        const double numeric =
            v * oracles::cone_measure_simpson(T, l, 0.0, l, tau, ConeCombo::Intersection);
        CHECK(std::abs(omega_covariance(spec, tau) - numeric) <= 1e-6);
    }
    CHECK_THROWS_AS(static_cast<void>(omega_covariance(spec, -0.1)), std::invalid_argument);
}

TEST_CASE("cascade mean reproduces Lebesgue measure") {
    const CascadeSpec spec = base_spec();
    const auto ensemble = sample_cascade_ensemble(spec, 10000, 71, 2);
    for (const Eigen::Index col : {63, 127, 255}) {
        std::vector<double> q(static_cast<std::size_t>(ensemble.rows()));
        for (Eigen::Index i = 0; i < ensemble.rows(); ++i) q[static_cast<std::size_t>(i)] = ensemble(i, col);
        const auto est = empirical_abs_moment(q, 1.0);
        const double t = static_cast<double>(col + 1) / 256.0;
        INFO("t = ", t);
        CHECK(std::abs(est.value - t) <= 3.0 * est.se);
    }
}

TEST_CASE("degenerate cascade is the identity measure") {
    CascadeSpec spec = base_spec();
    spec.variance = 0.0;
    RngStream rng(72, "degenerate", 0);
    const auto sample = simulate_lognormal_cascade(spec, rng);
    for (std::size_t j = 0; j < sample.times.size(); ++j)
        CHECK(sample.cumulative[j] == doctest::Approx(sample.times[j]).epsilon(1e-12));
}

TEST_CASE("cascade second moment matches the quadrature oracle") {
    const CascadeSpec spec = base_spec();
    const std::size_t cells = 128;  // t = 0.5
    const double exact = oracles::cascade_second_moment(spec, cells);
    const auto ensemble = sample_cascade_ensemble(spec, 8000, 73, 2);
    std::vector<double> q2(static_cast<std::size_t>(ensemble.rows()));
    for (Eigen::Index i = 0; i < ensemble.rows(); ++i) {
        const double q = ensemble(i, static_cast<Eigen::Index>(cells) - 1);
        q2[static_cast<std::size_t>(i)] = q * q;
    }
    const auto est = empirical_abs_moment(q2, 1.0);
    CHECK(std::abs(est.value - exact) <= 4.0 * est.se);
}

TEST_CASE("q=2 moment ratio recovers the scaling exponent") {
    const CascadeSpec spec = base_spec();
    const auto ensemble = sample_cascade_ensemble(spec, 4000, 74, 2);
    std::vector<double> big2(static_cast<std::size_t>(ensemble.rows())),
        small2(static_cast<std::size_t>(ensemble.rows()));
    for (Eigen::Index i = 0; i < ensemble.rows(); ++i) {
        const double b = ensemble(i, 127), s = ensemble(i, 63);
        big2[static_cast<std::size_t>(i)] = b * b;
        small2[static_cast<std::size_t>(i)] = s * s;
    }
    const auto mb = empirical_abs_moment(big2, 1.0);
    const auto ms = empirical_abs_moment(small2, 1.0);
    const auto cross = covariance_with_se(big2, small2);
    const double exponent = std::log2(mb.value / ms.value);
    const double nd = static_cast<double>(ensemble.rows());
    const double var_log = (mb.se / mb.value) * (mb.se / mb.value) +
                           (ms.se / ms.value) * (ms.se / ms.value) -
                           2.0 * cross.value / (nd * mb.value * ms.value);
    const double se = std::sqrt(std::max(var_log, 1e-30)) / std::numbers::ln2;
    const double target = 2.0 - base_laplace_exponent(spec, 2.0);
    CHECK(base_laplace_exponent(spec, 2.0) == doctest::Approx(spec.variance).epsilon(1e-15));
    CHECK(std::abs(exponent - target) <= 4.0 * se);
}

TEST_CASE("pinned characteristic function values (v = 0.2)") {
    CascadeSpec spec = base_spec();
    spec.variance = 0.2;
    const auto scaling = pair_cf_scaling_process(spec, 1.0, 1.0, 0.5, 1.0);
    CHECK(scaling.real() == doctest::Approx(0.6390050841115954).epsilon(1e-12));
    CHECK(scaling.imag() == doctest::Approx(-0.09657617272756516).epsilon(1e-12));
    const auto levy = pair_cf_levy(spec, 1.0, 1.0, 0.5, 1.0);
    CHECK(levy.real() == doctest::Approx(0.7700556897749468).epsilon(1e-12));
    CHECK(levy.imag() == doctest::Approx(-0.11638253459116741).epsilon(1e-12));
    CHECK(std::abs(scaling - levy) > 0.1);
}

TEST_CASE("marginal reductions of the pair characteristic functions") {
    CascadeSpec spec = base_spec();
    spec.variance = 0.3;
    // a2 = 0: the coupling term vanishes and both reduce to exp(Psi(a1) s1)
    for (const double a1 : {0.5, 1.0, 2.0}) {
        const auto scaling = pair_cf_scaling_process(spec, a1, 0.0, 0.5, 1.2);
        const auto levy = pair_cf_levy(spec, a1, 0.0, 0.5, 1.2);
        const auto marginal = std::exp(base_characteristic_exponent(spec, a1) * 0.5);
        CHECK(std::abs(scaling - marginal) <= 1e-15);
        CHECK(std::abs(levy - marginal) <= 1e-15);
    }
    // a1 = 0 for the levy pair: exp(Psi(a2) s2)
    const auto levy = pair_cf_levy(spec, 0.0, 1.5, 0.5, 1.2);
    CHECK(std::abs(levy - std::exp(base_characteristic_exponent(spec, 1.5) * 1.2)) <= 1e-15);

    CHECK_THROWS_AS(static_cast<void>(pair_cf_levy(spec, 1.0, 1.0, 1.0, 0.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(pair_cf_scaling_process(spec, 1.0, 1.0, 1.0, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("pure drift base law collapses the non-levy gap") {
    const CharacteristicExponent drift = [](double theta) {
        return std::complex<double>(0.0, -0.7 * theta);
    };
    for (const auto& p : default_cf_grid()) {
        const auto a = pair_cf_scaling_process(drift, p.a1, p.a2, p.s1, p.s2);
        const auto b = pair_cf_levy(drift, p.a1, p.a2, p.s1, p.s2);
        CHECK(std::abs(a - b) <= 1e-14);
    }
}

TEST_CASE("non-levy gap: zero iff degenerate, growing with variance") {
    CascadeSpec spec = base_spec();
    spec.variance = 0.0;
    CHECK(non_levy_gap(spec) == 0.0);
    std::vector<double> grid_gaps, point_gaps;
    for (const double v : {0.1, 0.2, 0.4}) {
        spec.variance = v;
        grid_gaps.push_back(non_levy_gap(spec));
        point_gaps.push_back(std::abs(pair_cf_scaling_process(spec, 1.0, 1.0, 0.5, 1.0) -
                                      pair_cf_levy(spec, 1.0, 1.0, 0.5, 1.0)));
    }
    for (const double g : grid_gaps) CHECK(g > 0.0);
    // at a fixed grid point the separation grows over this variance range
    CHECK(point_gaps[1] > point_gaps[0]);
    CHECK(point_gaps[2] > point_gaps[1]);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(validate(CascadeSpec{1.0, 1.5, 0.2, 64, 2.0}), std::domain_error);
    CHECK_THROWS_AS(validate(CascadeSpec{1.0, 0.0, 0.2, 64, 2.0}), std::domain_error);
    CHECK_THROWS_AS(validate(CascadeSpec{1.0, 0.5, -0.1, 64, 2.0}), std::domain_error);
    RngStream rng(75, "tiny", 0);
    CHECK_THROWS_AS(static_cast<void>(simulate_lognormal_cascade(CascadeSpec{1.0, 0.5, 0.1, 1, 2.0}, rng)),
                    std::invalid_argument);
}
