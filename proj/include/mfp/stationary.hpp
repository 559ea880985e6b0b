#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mfp/levy.hpp"
#include "mfp/rng.hpp"

namespace mfp {

using CovarianceFn = std::function<double(double)>;

struct ConstantValue {
    double value;
};

// zero-mean Gaussian, covariance variance * exp(-rate*|h|)
struct OrnsteinUhlenbeck {
    double rate;
    double variance;
};

// zero-mean stationary Gaussian with a user-supplied autocovariance
struct GaussianFromCovariance {
    CovarianceFn gamma;
};

// Strictly stationary process with exact joint sampler and known covariance.
class StationaryModel {
public:
    using Kind = std::variant<ConstantValue, OrnsteinUhlenbeck, GaussianFromCovariance>;

    explicit StationaryModel(Kind kind);

    const Kind& kind() const { return kind_; }
    std::string name() const;

    double mean() const;
    double covariance(double h) const;
    // E[Y(u) Y(u+h)] = covariance(h) + mean^2
    double product_moment(double h) const { return covariance(h) + mean() * mean(); }
    // E|Y(0)|^q
    double abs_moment_y0(double q) const;
    Interval moment_range() const { return moment_range_; }

    // exact joint sample at strictly increasing times
    std::vector<double> sample_at_times(std::span<const double> times, RngStream& rng) const;

private:
    Kind kind_;
    Interval moment_range_;
};

// gamma(h) = 0.5 * ey0_sq * exp(-psi1*h) * (1 + exp(psi2*h) - (1-exp(-h))^(-psi2)),
// the lag-h covariance a stationary Y must have for the Lamperti-style
// construction to get second-order stationary increments; gamma(0) = ey0_sq.
double gamma_from_psi(double psi1, double psi2, double ey0_sq, double h);

struct PsdReport {
    bool ok;
    double min_eigenvalue;
};

// Builds the Gram matrix [gamma(|t_i - t_j|)] on the grid and reports whether
// its smallest eigenvalue clears -1e-9 * gamma(0). Grid size capped at 2048.
PsdReport check_positive_semidefinite(const CovarianceFn& gamma, std::span<const double> grid);

// Circulant-embedding sample of a zero-mean stationary Gaussian sequence on
// an equispaced grid of n points. Throws if the embedding has negative
// eigenvalues beyond tolerance (message carries the most negative one).
std::vector<double> sample_gaussian_from_covariance(const CovarianceFn& gamma, std::size_t n,
                                                    double spacing, RngStream& rng);

// Reusable circulant-embedding sampler: eigenvalues are computed once, then
// each sample costs one FFT. Thread-safe once constructed.
class CirculantSampler {
public:
    CirculantSampler(const CovarianceFn& gamma, std::size_t n, double spacing);
    std::vector<double> sample(RngStream& rng) const;
    double min_eigenvalue() const { return min_eigenvalue_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    double min_eigenvalue_;
};

// Exact joint sampler for a StationaryModel on a fixed time grid; factors any
// needed covariance once so per-path sampling is cheap. Thread-safe.
class PreparedStationarySampler {
public:
    PreparedStationarySampler(const StationaryModel& model, std::span<const double> times);
    std::vector<double> sample(RngStream& rng) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

}  // namespace mfp
