#include "mfp/lmf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfp {

namespace {

void require_valid_times(std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("times must be nonempty");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) throw std::invalid_argument("times must be strictly positive");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("times must be strictly increasing");
    }
}

std::vector<double> base_times(const LmfModel& model, std::span<const double> times) {
    std::vector<double> u(times.begin(), times.end());
    for (double& v : u) v /= model.time_scale;
    return u;
}

}  // namespace

double effective_horizon(const LmfModel& model, std::span<const double> times) {
    require_valid_times(times);
    const double u_min = times.front() / model.time_scale;
    const double u_max = times.back() / model.time_scale;
    if (model.horizon_a) {
        const double a = *model.horizon_a;
        if (u_max > std::exp(a))
            throw std::domain_error("requested time exceeds the horizon bound t <= T*e^a");
        return a;
    }
    return std::max({0.0, -std::log(u_min), std::log(u_max)}) + 1.0;
}

CoupledLmfSample sample_lmf_path_coupled(const LmfModel& model, std::span<const double> times,
                                         const PreparedStationarySampler& prepared,
                                         RngStream& levy_rng, RngStream& stationary_rng) {
    const double a = effective_horizon(model, times);
    const auto u = base_times(model, times);

    CoupledLmfSample out;
    out.horizon_a = a;
    out.time_scale = model.time_scale;
    out.path.times.assign(times.begin(), times.end());

    std::vector<double> s_points;
    s_points.reserve(u.size() + 1);
    for (const double ui : u) s_points.push_back(a - std::log(ui));
    s_points.push_back(a);
    const double tol = 1e-12 * std::max(1.0, a);
    out.levy_path = sample_levy_path(model.levy, std::move(s_points), tol, levy_rng);

    out.y_points.reserve(u.size());
    for (const double ui : u) out.y_points.push_back(std::log(ui));
    out.y_values = prepared.sample(stationary_rng);

    const double l_at_a = out.levy_path.value_at(a);
    out.path.values.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double l_i = out.levy_path.value_at(a - std::log(u[i]));
        out.path.values[i] = std::exp(l_i - l_at_a) * out.y_values[i];
    }
    return out;
}

CoupledLmfSample sample_lmf_path_coupled(const LmfModel& model, std::span<const double> times,
                                         std::uint64_t master_seed, std::uint64_t path_index) {
    require_valid_times(times);
    const auto u = base_times(model, times);
    std::vector<double> log_u;
    log_u.reserve(u.size());
    for (const double ui : u) log_u.push_back(std::log(ui));
    PreparedStationarySampler prepared(model.stationary, log_u);
    RngStream levy_rng(master_seed, "lmf.levy", path_index);
    RngStream y_rng(master_seed, "lmf.y", path_index);
    auto out = sample_lmf_path_coupled(model, times, prepared, levy_rng, y_rng);
    out.path.seed = master_seed;
    out.path.path_index = path_index;
    return out;
}

SamplePath sample_lmf_path(const LmfModel& model, std::span<const double> times,
                           std::uint64_t master_seed, std::uint64_t path_index) {
    return sample_lmf_path_coupled(model, times, master_seed, path_index).path;
}

StationaryRecovery inverse_lamperti(const CoupledLmfSample& coupled) {
    const std::size_t n = coupled.path.times.size();
    if (n == 0 || coupled.path.values.size() != n || coupled.y_values.size() != n ||
        coupled.levy_path.s_points.empty())
        throw std::invalid_argument("inverse_lamperti: input is not a coupled sample");

    const double a = coupled.horizon_a;
    double l_at_a = 0.0;
    try {
        l_at_a = coupled.levy_path.value_at(a);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("inverse_lamperti: coupled Levy path lacks the horizon point");
    }

    StationaryRecovery rec;
    rec.s_points.resize(n);
    rec.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = coupled.path.times[i] / coupled.time_scale;
        const double s = a - std::log(u);
        const double m = std::exp(l_at_a - coupled.levy_path.value_at(s));
        // ascending in s = descending in t
        rec.s_points[n - 1 - i] = s;
        rec.values[n - 1 - i] = m * coupled.path.values[i];
    }
    return rec;
}

SamplePath time_invert(const SamplePath& path) {
    for (const double t : path.times)
        if (!(t > 0.0)) throw std::invalid_argument("time_invert: times must be positive");
    SamplePath out;
    out.seed = path.seed;
    out.path_index = path.path_index;
    const std::size_t n = path.times.size();
    out.times.resize(n);
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.times[n - 1 - i] = 1.0 / path.times[i];
        out.values[n - 1 - i] = path.values[i];
    }
    return out;
}

SamplePath rescale_time(const SamplePath& path, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("rescale_time: factor must be > 0");
    SamplePath out = path;
    for (double& t : out.times) t *= factor;
    return out;
}

double theoretical_moment(const LmfModel& model, double q, double t, double abs_moment_at_pivot) {
    if (!(t > 0.0)) throw std::domain_error("theoretical_moment: t must be > 0");
    if (!(q == 0.0 || model.stationary.moment_range().contains(q)))
        throw std::domain_error("theoretical_moment: q outside the stationary moment range");
    const double u = t / model.time_scale;
    if (u <= 1.0) return std::pow(u, -model.psi(q)) * abs_moment_at_pivot;
    return std::pow(u, model.psi(-q)) * abs_moment_at_pivot;
}

double theoretical_moment(const LmfModel& model, double q, double t) {
    return theoretical_moment(model, q, t, model.stationary.abs_moment_y0(q));
}

bool is_second_order_matched(const LmfModel& model) {
    if (!model.levy.psi_domain().contains(2.0)) return false;
    const double psi1 = model.psi(1.0), psi2 = model.psi(2.0);
    if (std::abs(psi2 + 1.0) > 1e-12) return false;
    const auto* ou = std::get_if<OrnsteinUhlenbeck>(&model.stationary.kind());
    return ou != nullptr && std::abs(ou->rate - (psi1 + 1.0)) <= 1e-12;
}

double theoretical_cov(const LmfModel& model, double t, double s) {
    if (!(t > 0.0 && s > 0.0)) throw std::domain_error("theoretical_cov: times must be > 0");
    const Interval dom = model.levy.psi_domain();
    if (!dom.contains(2.0) || !dom.contains(-2.0))
        throw std::domain_error("theoretical_cov: second moments undefined for this Levy model");
    if (t < s) std::swap(t, s);
    const double ts = model.time_scale;
    const double y0_sq = model.stationary.product_moment(0.0);

    if (is_second_order_matched(model)) {
        const double psi2 = model.psi(2.0);
        const double gap = t - s;
        const double gap_term = gap == 0.0 ? 0.0 : std::pow(gap, -psi2);
        return 0.5 * std::pow(ts, psi2) * y0_sq *
               (std::pow(t, -psi2) + std::pow(s, -psi2) - gap_term);
    }

    const double u = t / ts, v = s / ts;
    const double y_cross = model.stationary.product_moment(std::log(u) - std::log(v));
    if (u > 1.0 && v > 1.0)
        return std::pow(u, model.psi(-1.0)) *
               std::pow(v, model.psi(-2.0) - model.psi(-1.0)) * y_cross;
    if (u > 1.0)
        return std::pow(u, model.psi(-1.0)) * std::pow(v, -model.psi(1.0)) * y_cross;
    return std::pow(u, model.psi(1.0) - model.psi(2.0)) * std::pow(v, -model.psi(1.0)) * y_cross;
}

LmfModel mbm_analog_preset(double sigma, double time_scale) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::domain_error(
            "mbm_analog_preset: sigma must lie in (0,1) so the OU rate psi(1)+1 = "
            "1/2 - sigma^2/2 stays positive");
    if (!(time_scale > 0.0)) throw std::domain_error("mbm_analog_preset: T must be > 0");
    const double drift = -0.5 - sigma * sigma;
    LevyModel levy{BrownianWithDrift{drift, sigma}};
    const double ou_rate = levy.laplace_exponent(1.0) + 1.0;
    StationaryModel stationary{OrnsteinUhlenbeck{ou_rate, 1.0}};
    return LmfModel{std::move(levy), std::move(stationary), std::nullopt, time_scale};
}

}  // namespace mfp
