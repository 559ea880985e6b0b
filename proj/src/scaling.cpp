#include "mfp/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfp {

std::size_t LevyPathSample::index_of(double s) const {
    const auto it = std::lower_bound(s_points.begin(), s_points.end(), s - dedup_tol);
    if (it == s_points.end() || std::abs(*it - s) > dedup_tol)
        throw std::invalid_argument("LevyPathSample: s-point not on the sampled path");
    return static_cast<std::size_t>(it - s_points.begin());
}

LevyPathSample sample_levy_path(const LevyModel& levy, std::vector<double> s_points,
                                double dedup_tol, RngStream& rng) {
    LevyPathSample path;
    path.dedup_tol = dedup_tol;
    std::sort(s_points.begin(), s_points.end());
    for (const double s : s_points) {
        if (path.s_points.empty() || s - path.s_points.back() > dedup_tol)
            path.s_points.push_back(s);
    }
    const std::size_t n = path.s_points.size();
    path.values.assign(n, 0.0);
    if (n < 2) return path;

    // increments drawn from the largest segment down, then accumulated from
    // the bottom anchor; the anchor value is 0 by convention
    std::vector<double> increments(n - 1);
    for (std::size_t k = n - 1; k >= 1; --k)
        increments[k - 1] = levy.sample_increment(path.s_points[k] - path.s_points[k - 1], rng);
    for (std::size_t k = 1; k < n; ++k) path.values[k] = path.values[k - 1] + increments[k - 1];
    return path;
}

ScalingFactorGrid sample_scaling_grid(const LevyModel& levy, double horizon_a,
                                      std::span<const double> lambdas,
                                      std::span<const double> times, RngStream& rng) {
    if (horizon_a < 0.0) throw std::domain_error("sample_scaling_grid: horizon must be >= 0");
    const double e_a = std::exp(horizon_a);
    for (const double lam : lambdas) {
        if (!(lam > 0.0 && lam <= 1.0))
            throw std::domain_error("sample_scaling_grid: lambda must lie in (0,1]");
    }
    for (const double t : times) {
        if (!(t > 0.0) || t > e_a)
            throw std::domain_error("sample_scaling_grid: t must lie in (0, e^a]");
    }

    ScalingFactorGrid grid;
    grid.horizon_a = horizon_a;
    grid.lambdas.assign(lambdas.begin(), lambdas.end());
    grid.times.assign(times.begin(), times.end());
    std::sort(grid.lambdas.begin(), grid.lambdas.end());
    std::sort(grid.times.begin(), grid.times.end());

    std::vector<double> s_points;
    s_points.reserve(grid.lambdas.size() * grid.times.size() + grid.times.size());
    for (const double t : grid.times) {
        const double base = horizon_a - std::log(t);
        s_points.push_back(base);
        for (const double lam : grid.lambdas) s_points.push_back(base - std::log(lam));
    }
    const double tol = 1e-12 * std::max(1.0, horizon_a);
    grid.path = sample_levy_path(levy, std::move(s_points), tol, rng);

    grid.values.resize(grid.lambdas.size() * grid.times.size());
    for (std::size_t j = 0; j < grid.times.size(); ++j) {
        const double base = horizon_a - std::log(grid.times[j]);
        const double l_base = grid.path.value_at(base);
        for (std::size_t i = 0; i < grid.lambdas.size(); ++i) {
            const double l_top = grid.path.value_at(base - std::log(grid.lambdas[i]));
            grid.values[i * grid.times.size() + j] = std::exp(l_top - l_base);
        }
    }
    return grid;
}

std::complex<double> marginal_cf_reference(const LevyModel& levy, double lambda, double theta) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::domain_error("marginal_cf_reference: lambda must lie in (0,1]");
    return std::exp(-std::log(lambda) * levy.characteristic_exponent(theta));
}

}  // namespace mfp
