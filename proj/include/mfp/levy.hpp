#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mfp/rng.hpp"

namespace mfp {

struct Interval {
    double lo;
    double hi;
    bool contains(double q) const { return q > lo && q < hi; }
    std::string str() const;
};

// L(s) = drift*s + volatility*B(s)
struct BrownianWithDrift {
    double drift;
    double volatility;
};

// L(s) = -hurst*s; the degenerate Levy process of the self-similar case
struct DeterministicDrift {
    double hurst;
};

// compound Poisson with normal jumps: rate > 0, jumps N(jump_mean, jump_sd^2)
struct CompoundPoissonNormal {
    double rate;
    double jump_mean;
    double jump_sd;
};

// gamma subordinator: L(s) ~ Gamma(shape*s, rate)
struct GammaProcess {
    double shape;
    double rate;
};

// A Levy process given by its analytic exponents plus an exact increment
// sampler. psi(q) = log E[exp(q L(1))] on psi_domain; Psi(theta) =
// log E[exp(i theta L(1))].
class LevyModel {
public:
    using Kind = std::variant<BrownianWithDrift, DeterministicDrift, CompoundPoissonNormal, GammaProcess>;

    explicit LevyModel(Kind kind);

    const Kind& kind() const { return kind_; }
    const Interval& psi_domain() const { return psi_domain_; }
    std::string name() const;

    double laplace_exponent(double q) const;
    std::complex<double> characteristic_exponent(double theta) const;

    // independent increments; entry k is distributed as L(durations[k])
    std::vector<double> sample_increments(std::span<const double> durations, RngStream& rng) const;
    double sample_increment(double duration, RngStream& rng) const;

private:
    Kind kind_;
    Interval psi_domain_;
};

}  // namespace mfp
