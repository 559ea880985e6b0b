#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mfp/levy.hpp"
#include "mfp/rng.hpp"

namespace mfp {

// One Levy path observed on a sorted set of s-points. Values are relative to
// the first point (only differences are ever used). Points closer than the
// dedup tolerance were merged, so coincident requests share one value.
struct LevyPathSample {
    std::vector<double> s_points;
    std::vector<double> values;
    double dedup_tol = 0.0;

    // index of the s-point matching s within the dedup tolerance
    std::size_t index_of(double s) const;
    double value_at(double s) const { return values[index_of(s)]; }
};

// Samples the Levy path on descending segments between consecutive unique
// points; the path starts at the largest s-point and works down.
LevyPathSample sample_levy_path(const LevyModel& levy, std::vector<double> s_points,
                                double dedup_tol, RngStream& rng);

// Joint samples of the scaling factors M^(a)(lambda, t) =
// exp(L(a - log t - log lambda) - L(a - log t)) over a (lambda, t) grid, all
// entries coupled to one underlying Levy path.
struct ScalingFactorGrid {
    double horizon_a = 0.0;
    std::vector<double> lambdas;  // sorted, in (0,1]
    std::vector<double> times;    // sorted, in (0, e^a]
    std::vector<double> values;   // row-major: value(i,j) = M(lambda_i, times_j)
    LevyPathSample path;

    double value(std::size_t lambda_idx, std::size_t time_idx) const {
        return values[lambda_idx * times.size() + time_idx];
    }
};

ScalingFactorGrid sample_scaling_grid(const LevyModel& levy, double horizon_a,
                                      std::span<const double> lambdas,
                                      std::span<const double> times, RngStream& rng);

// Characteristic function of log M(lambda, t): exp((-log lambda) * Psi(theta)).
std::complex<double> marginal_cf_reference(const LevyModel& levy, double lambda, double theta);

}  // namespace mfp
