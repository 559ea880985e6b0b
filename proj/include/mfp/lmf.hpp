#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfp/levy.hpp"
#include "mfp/scaling.hpp"
#include "mfp/stationary.hpp"

namespace mfp {

// Multifractal process built from a (Levy, stationary) pair:
//   X(t) = exp(L(a - log u) - L(a)) * Y(log u),  u = t / time_scale.
// Scales lambda run over (0,1]; the scaling relation holds on
// (0, time_scale], and sampling is allowed on (0, time_scale * e^a].
// If horizon_a is unset, each sampling call picks the smallest horizon
// with one unit of slack so every requested time fits strictly inside.
struct LmfModel {
    LevyModel levy;
    StationaryModel stationary;
    std::optional<double> horizon_a = std::nullopt;
    double time_scale = 1.0;

    double psi(double q) const { return levy.laplace_exponent(q); }
};

struct SamplePath {
    std::vector<double> times;  // sorted, strictly positive
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
};

// A path together with the Levy path and stationary samples it was built
// from; required by the exact inverse transform.
struct CoupledLmfSample {
    SamplePath path;
    LevyPathSample levy_path;     // sampled at {a - log u_i} and {a}
    std::vector<double> y_points;  // log u_i
    std::vector<double> y_values;
    double horizon_a = 0.0;
    double time_scale = 1.0;
};

struct StationaryRecovery {
    std::vector<double> s_points;  // a - log u_i, ascending
    std::vector<double> values;
};

double effective_horizon(const LmfModel& model, std::span<const double> times);

CoupledLmfSample sample_lmf_path_coupled(const LmfModel& model, std::span<const double> times,
                                         std::uint64_t master_seed, std::uint64_t path_index);
// shared-sampler variant for ensembles (prepared must match log(times/T))
CoupledLmfSample sample_lmf_path_coupled(const LmfModel& model, std::span<const double> times,
                                         const PreparedStationarySampler& prepared,
                                         RngStream& levy_rng, RngStream& stationary_rng);
SamplePath sample_lmf_path(const LmfModel& model, std::span<const double> times,
                           std::uint64_t master_seed, std::uint64_t path_index);

// Theorem-4.2 style recovery Y(s) = M(e^-s, e^s) X(e^s) evaluated on the
// coupled representation; cancellation makes it exact pathwise.
StationaryRecovery inverse_lamperti(const CoupledLmfSample& coupled);

// maps a path on times t to one on 1/t (sorted); involution
SamplePath time_invert(const SamplePath& path);
// multiplies times by factor T > 0
SamplePath rescale_time(const SamplePath& path, double factor);

// E|X(t)|^q = (t/T)^(-psi(q)) m_q for t <= T, (t/T)^(psi(-q)) m_q for t > T,
// with m_q = E|X(T)|^q supplied (or derived from the stationary marginal).
double theoretical_moment(const LmfModel& model, double q, double t, double abs_moment_at_pivot);
double theoretical_moment(const LmfModel& model, double q, double t);

// E[X(t)X(s)]: the closed min-like form for the second-order matched
// construction, otherwise the general three-case product formula.
double theoretical_cov(const LmfModel& model, double t, double s);

// true when psi(2) = -1 and Y is the OU process with rate psi(1)+1, i.e. the
// construction with second-order stationary increments
bool is_second_order_matched(const LmfModel& model);

// Multifractal analog of Brownian motion: Brownian levy with drift
// -1/2 - sigma^2 paired with the OU process with rate psi(1)+1, rescaled to
// (0, T]. Requires sigma in (0,1) so the OU rate stays positive.
LmfModel mbm_analog_preset(double sigma, double time_scale);

}  // namespace mfp
