#include "mfp/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfp/stationary.hpp"

namespace mfp {

namespace {

// 40-point Gauss-Legendre nodes/weights on [-1,1] (symmetric halves)
constexpr int kGlPoints = 40;
constexpr double kGlNode[kGlPoints / 2] = {
    0.0387724175060508, 0.1160840706752552, 0.1926975807013711, 0.2681521850072537,
    0.3419940908257585, 0.4137792043716050, 0.4830758016861787, 0.5494671250951282,
    0.6125538896679802, 0.6719566846141796, 0.7273182551899271, 0.7783056514265194,
    0.8246122308333117, 0.8659595032122595, 0.9020988069688743, 0.9328128082786765,
    0.9579168192137917, 0.9772599499837743, 0.9907262386994570, 0.9982377097105593};
constexpr double kGlWeight[kGlPoints / 2] = {
    0.0775059479784248, 0.0770398181642480, 0.0761103619006262, 0.0747231690579683,
    0.0728865823958041, 0.0706116473912868, 0.0679120458152339, 0.0648040134566010,
    0.0613062424929289, 0.0574397690993916, 0.0532278469839368, 0.0486958076350722,
    0.0438709081856733, 0.0387821679744720, 0.0334601952825478, 0.0279370069800234,
    0.0222458491941670, 0.0164210583819079, 0.0104982845311528, 0.0045212770985332};

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int k = 0; k < kGlPoints / 2; ++k)
        sum += kGlWeight[k] * (f(mid - half * kGlNode[k]) + f(mid + half * kGlNode[k]));
    return half * sum;
}

struct Cone {
    double l;  // truncation: active for v >= l
    double c;  // center
};

double section_length(const Cone& a, const Cone& b, double v, double integral_scale,
                      ConeCombo combo) {
    const double w = 0.5 * std::min(v, integral_scale);
    const bool a_on = v >= a.l, b_on = v >= b.l;
    const double len_a = a_on ? 2.0 * w : 0.0;
    const double len_b = b_on ? 2.0 * w : 0.0;
    double len_ab = 0.0;
    if (a_on && b_on) {
        const double lo = std::max(a.c, b.c) - w;
        const double hi = std::min(a.c, b.c) + w;
        len_ab = std::max(0.0, hi - lo);
    }
    switch (combo) {
        case ConeCombo::OnlyFirst: return len_a;
        case ConeCombo::Intersection: return len_ab;
        case ConeCombo::FirstMinusSecond: return len_a - len_ab;
        case ConeCombo::SecondMinusFirst: return len_b - len_ab;
    }
    return 0.0;
}

}  // namespace

void validate(const CascadeSpec& spec) {
    if (!(spec.integral_scale > 0.0))
        throw std::domain_error("CascadeSpec: integral scale T must be > 0");
    if (!(spec.truncation > 0.0) || spec.truncation > spec.integral_scale)
        throw std::domain_error("CascadeSpec: truncation l must lie in (0, T]");
    if (spec.variance < 0.0) throw std::domain_error("CascadeSpec: variance must be >= 0");
}

double base_laplace_exponent(const CascadeSpec& spec, double q) {
    return 0.5 * spec.variance * q * (q - 1.0);
}

std::complex<double> base_characteristic_exponent(const CascadeSpec& spec, double theta) {
    return {-0.5 * spec.variance * theta * theta, -0.5 * spec.variance * theta};
}

double cone_measure(const CascadeSpec& spec, double /*t*/) {
    validate(spec);
    return 1.0 + std::log(spec.integral_scale / spec.truncation);
}

double cone_combo_measure_numeric(double integral_scale, double l1, double c1, double l2,
                                  double c2, ConeCombo combo) {
    if (!(integral_scale > 0.0) || !(l1 > 0.0) || !(l2 > 0.0))
        throw std::invalid_argument("cone_combo_measure_numeric: scales must be > 0");
    const Cone a{l1, c1}, b{l2, c2};
    const auto integrand = [&](double v) {
        return section_length(a, b, v, integral_scale, combo) / (v * v);
    };

    const double delta = std::abs(c1 - c2);
    std::vector<double> breaks = {std::min(l1, l2), std::max(l1, l2), integral_scale};
    if (delta > 0.0) breaks.push_back(delta);
    const double v_tail = *std::max_element(breaks.begin(), breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        // log-spaced subpanels keep the 1/v^2 weight well resolved when a
        // panel spans several decades
        const double lo = breaks[i], hi = breaks[i + 1];
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::log2(hi / lo))));
        for (int p = 0; p < pieces; ++p) {
            const double pa = lo * std::pow(hi / lo, static_cast<double>(p) / pieces);
            const double pb = lo * std::pow(hi / lo, static_cast<double>(p + 1) / pieces);
            total += gauss_legendre(integrand, pa, pb);
        }
    }
    // above v_tail every section width is constant, so the tail is analytic
    total += section_length(a, b, v_tail * (1.0 + 1e-9), integral_scale, combo) / v_tail;
    return total;
}

ConePairMeasures cone_pair_measures(const CascadeSpec& spec, double t, double lambda1,
                                    double lambda2) {
    validate(spec);
    if (!(lambda2 > 0.0 && lambda2 < lambda1 && lambda1 <= 1.0))
        throw std::invalid_argument("cone_pair_measures: need 0 < lambda2 < lambda1 <= 1");
    if (!(spec.truncation <= t) || t > spec.integral_scale)
        throw std::invalid_argument("cone_pair_measures: need l <= t <= T");

    const double T = spec.integral_scale, l = spec.truncation;
    ConePairMeasures out;
    out.b1 = std::log((lambda1 - lambda2) / lambda1) + std::log(t / l) + 1.0;
    out.b2 = std::log(1.0 / (lambda1 - lambda2)) + std::log(T / t);
    out.b3 = std::log((lambda1 - lambda2) / lambda2) + std::log(t / l) + 1.0;

    const double l1 = lambda1 * l, c1 = lambda1 * t;
    const double l2 = lambda2 * l, c2 = lambda2 * t;
    out.b1_numeric = cone_combo_measure_numeric(T, l1, c1, l2, c2, ConeCombo::FirstMinusSecond);
    out.b2_numeric = cone_combo_measure_numeric(T, l1, c1, l2, c2, ConeCombo::Intersection);
    out.b3_numeric = cone_combo_measure_numeric(T, l1, c1, l2, c2, ConeCombo::SecondMinusFirst);
    out.max_abs_error = std::max({std::abs(out.b1 - out.b1_numeric),
                                  std::abs(out.b2 - out.b2_numeric),
                                  std::abs(out.b3 - out.b3_numeric)});
    out.closed_form_valid = lambda1 * l <= (lambda1 - lambda2) * t;
    return out;
}

double omega_covariance(const CascadeSpec& spec, double tau) {
    validate(spec);
    if (tau < 0.0) throw std::invalid_argument("omega_covariance: tau must be >= 0");
    const double T = spec.integral_scale, l = spec.truncation;
    double mu_cap = 0.0;
    if (tau <= l)
        mu_cap = 1.0 + std::log(T / l) - tau / l;
    else if (tau <= T)
        mu_cap = std::log(T / tau);
    return spec.variance * mu_cap;
}

CascadeSimulator::CascadeSimulator(const CascadeSpec& spec) : spec_(spec) {
    validate(spec);
    if (spec.resolution < 2)
        throw std::invalid_argument("CascadeSimulator: resolution must be >= 2");
    cell_width_ = spec.integral_scale / static_cast<double>(spec.resolution);
    mean_ = -0.5 * spec.variance * cone_measure(spec, 0.0);
    auto cov = [spec](double h) { return omega_covariance(spec, std::abs(h)); };
    sampler_ = std::make_shared<CirculantSampler>(cov, spec.resolution, cell_width_);
}

CascadeSample CascadeSimulator::simulate(RngStream& rng) const {
    const auto& sampler = *static_cast<const CirculantSampler*>(sampler_.get());
    const std::vector<double> omega = sampler.sample(rng);
    CascadeSample out;
    out.times.resize(omega.size());
    out.cumulative.resize(omega.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        acc += std::exp(mean_ + omega[k]) * cell_width_;
        out.times[k] = static_cast<double>(k + 1) * cell_width_;
        out.cumulative[k] = acc;
    }
    return out;
}

CascadeSample simulate_lognormal_cascade(const CascadeSpec& spec, RngStream& rng) {
    return CascadeSimulator(spec).simulate(rng);
}

std::complex<double> pair_cf_scaling_process(const CharacteristicExponent& psi_cf, double a1,
                                             double a2, double s1, double s2) {
    if (!(s1 > 0.0 && s1 < s2))
        throw std::invalid_argument("pair_cf_scaling_process: need 0 < s1 < s2");
    const auto coupling = psi_cf(a1) + psi_cf(a2) - psi_cf(a1 + a2);
    return std::exp(psi_cf(a1) * s1 + psi_cf(a2) * s2 +
                    std::log(std::exp(-s1) - std::exp(-s2)) * coupling);
}

std::complex<double> pair_cf_scaling_process(const CascadeSpec& spec, double a1, double a2,
                                             double s1, double s2) {
    return pair_cf_scaling_process(
        [&spec](double theta) { return base_characteristic_exponent(spec, theta); }, a1, a2, s1,
        s2);
}

std::complex<double> pair_cf_levy(const CharacteristicExponent& psi_cf, double a1, double a2,
                                  double s1, double s2) {
    if (!(s1 > 0.0 && s1 < s2)) throw std::invalid_argument("pair_cf_levy: need 0 < s1 < s2");
    return std::exp(psi_cf(a2) * (s2 - s1) + psi_cf(a1 + a2) * s1);
}

std::complex<double> pair_cf_levy(const CascadeSpec& spec, double a1, double a2, double s1,
                                  double s2) {
    return pair_cf_levy(
        [&spec](double theta) { return base_characteristic_exponent(spec, theta); }, a1, a2, s1,
        s2);
}

std::vector<CfGridPoint> default_cf_grid() {
    std::vector<CfGridPoint> grid;
    const double amps[] = {0.5, 1.0, 2.0};
    const std::pair<double, double> spans[] = {{0.25, 0.5}, {0.5, 1.0}, {1.0, 2.0}};
    for (const double a1 : amps)
        for (const double a2 : amps)
            for (const auto& [s1, s2] : spans) grid.push_back({a1, a2, s1, s2});
    return grid;
}

double non_levy_gap(const CascadeSpec& spec, std::span<const CfGridPoint> grid) {
    double gap = 0.0;
    for (const auto& p : grid) {
        gap = std::max(gap, std::abs(pair_cf_scaling_process(spec, p.a1, p.a2, p.s1, p.s2) -
                                     pair_cf_levy(spec, p.a1, p.a2, p.s1, p.s2)));
    }
    return gap;
}

double non_levy_gap(const CascadeSpec& spec) {
    const auto grid = default_cf_grid();
    return non_levy_gap(spec, grid);
}

}  // namespace mfp
