#include "mfp/levy.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string Interval::str() const {
    std::ostringstream os;
    os << "(" << lo << ", " << hi << ")";
    return os.str();
}

LevyModel::LevyModel(Kind kind) : kind_(std::move(kind)), psi_domain_{-kInf, kInf} {
    std::visit(overloaded{
                   [&](const BrownianWithDrift& p) {
                       if (p.volatility < 0.0)
                           throw std::invalid_argument("BrownianWithDrift: volatility must be >= 0");
                   },
                   [&](const DeterministicDrift&) {},
                   [&](const CompoundPoissonNormal& p) {
                       if (p.rate <= 0.0)
                           throw std::invalid_argument("CompoundPoissonNormal: rate must be > 0");
                       if (p.jump_sd < 0.0)
                           throw std::invalid_argument("CompoundPoissonNormal: jump_sd must be >= 0");
                   },
                   [&](const GammaProcess& p) {
                       if (p.shape <= 0.0 || p.rate <= 0.0)
                           throw std::invalid_argument("GammaProcess: shape and rate must be > 0");
                       psi_domain_ = {-kInf, p.rate};
                   },
               },
               kind_);
}

std::string LevyModel::name() const {
    return std::visit(overloaded{
                          [](const BrownianWithDrift&) { return std::string("brownian"); },
                          [](const DeterministicDrift&) { return std::string("deterministic"); },
                          [](const CompoundPoissonNormal&) { return std::string("compound_poisson_normal"); },
                          [](const GammaProcess&) { return std::string("gamma"); },
                      },
                      kind_);
}

double LevyModel::laplace_exponent(double q) const {
    if (!(q == 0.0 || psi_domain_.contains(q))) {
        throw std::domain_error("laplace_exponent: q=" + std::to_string(q) +
                                " outside psi domain " + psi_domain_.str());
    }
    return std::visit(
        overloaded{
            [&](const BrownianWithDrift& p) {
                return p.drift * q + 0.5 * p.volatility * p.volatility * q * q;
            },
            [&](const DeterministicDrift& p) { return -p.hurst * q; },
            [&](const CompoundPoissonNormal& p) {
                return p.rate * (std::exp(p.jump_mean * q + 0.5 * p.jump_sd * p.jump_sd * q * q) - 1.0);
            },
            [&](const GammaProcess& p) { return -p.shape * std::log1p(-q / p.rate); },
        },
        kind_);
}

std::complex<double> LevyModel::characteristic_exponent(double theta) const {
    const std::complex<double> i(0.0, 1.0);
    return std::visit(
        overloaded{
            [&](const BrownianWithDrift& p) {
                return i * (p.drift * theta) - 0.5 * p.volatility * p.volatility * theta * theta;
            },
            [&](const DeterministicDrift& p) { return -i * (p.hurst * theta); },
            [&](const CompoundPoissonNormal& p) {
                return std::complex<double>(p.rate) *
                       (std::exp(i * (p.jump_mean * theta) - 0.5 * p.jump_sd * p.jump_sd * theta * theta) - 1.0);
            },
            [&](const GammaProcess& p) {
                return -p.shape * std::log(1.0 - i * (theta / p.rate));
            },
        },
        kind_);
}

double LevyModel::sample_increment(double duration, RngStream& rng) const {
    if (!(duration > 0.0))
        throw std::invalid_argument("sample_increment: duration must be > 0");
    return std::visit(
        overloaded{
            [&](const BrownianWithDrift& p) {
                return rng.normal(p.drift * duration, p.volatility * std::sqrt(duration));
            },
            [&](const DeterministicDrift& p) { return -p.hurst * duration; },
            [&](const CompoundPoissonNormal& p) {
                const std::int64_t jumps = rng.poisson(p.rate * duration);
                double total = 0.0;
                for (std::int64_t j = 0; j < jumps; ++j) total += rng.normal(p.jump_mean, p.jump_sd);
                return total;
            },
            [&](const GammaProcess& p) { return rng.gamma(p.shape * duration) / p.rate; },
        },
        kind_);
}

std::vector<double> LevyModel::sample_increments(std::span<const double> durations, RngStream& rng) const {
    std::vector<double> out;
    out.reserve(durations.size());
    for (const double d : durations) out.push_back(sample_increment(d, rng));
    return out;
}

}  // namespace mfp
