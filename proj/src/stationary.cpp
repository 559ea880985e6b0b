#include "mfp/stationary.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mfp/fft.hpp"

namespace mfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPsdRelTol = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_strictly_increasing(std::span<const double> times) {
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("sample_at_times: times must be strictly increasing");
    }
}

// E|N(0,1)|^q = 2^(q/2) Gamma((q+1)/2) / sqrt(pi), finite for q > -1
double std_normal_abs_moment(double q) {
    if (q <= -1.0)
        throw std::domain_error("abs_moment: |N(0,s^2)|^q is finite only for q > -1");
    if (q == 0.0) return 1.0;
    return std::pow(2.0, 0.5 * q) * std::tgamma(0.5 * (q + 1.0)) / std::sqrt(std::numbers::pi);
}

std::size_t embedding_size(std::size_t n) {
    std::size_t m = 2;
    while (m < 2 * (n > 0 ? n - 1 : 1) || m < 2) m *= 2;
    return std::max<std::size_t>(m, 2);
}

}  // namespace

StationaryModel::StationaryModel(Kind kind) : kind_(std::move(kind)), moment_range_{-1.0, kInf} {
    std::visit(overloaded{
                   [&](const ConstantValue& p) {
                       moment_range_ = {p.value == 0.0 ? 0.0 : -kInf, kInf};
                   },
                   [&](const OrnsteinUhlenbeck& p) {
                       if (p.rate <= 0.0)
                           throw std::invalid_argument("OrnsteinUhlenbeck: rate must be > 0");
                       if (p.variance <= 0.0)
                           throw std::invalid_argument("OrnsteinUhlenbeck: variance must be > 0");
                   },
                   [&](const GaussianFromCovariance& p) {
                       if (!p.gamma)
                           throw std::invalid_argument("GaussianFromCovariance: missing covariance");
                   },
               },
               kind_);
}

std::string StationaryModel::name() const {
    return std::visit(overloaded{
                          [](const ConstantValue&) { return std::string("constant"); },
                          [](const OrnsteinUhlenbeck&) { return std::string("ou"); },
                          [](const GaussianFromCovariance&) { return std::string("gaussian_from_covariance"); },
                      },
                      kind_);
}

double StationaryModel::mean() const {
    if (const auto* c = std::get_if<ConstantValue>(&kind_)) return c->value;
    return 0.0;
}

double StationaryModel::covariance(double h) const {
    h = std::abs(h);
    return std::visit(overloaded{
                          [&](const ConstantValue&) { return 0.0; },
                          [&](const OrnsteinUhlenbeck& p) { return p.variance * std::exp(-p.rate * h); },
                          [&](const GaussianFromCovariance& p) { return p.gamma(h); },
                      },
                      kind_);
}

double StationaryModel::abs_moment_y0(double q) const {
    if (const auto* c = std::get_if<ConstantValue>(&kind_)) {
        if (c->value == 0.0 && q < 0.0)
            throw std::domain_error("abs_moment_y0: negative moment of constant zero");
        return q == 0.0 ? 1.0 : std::pow(std::abs(c->value), q);
    }
    const double var = covariance(0.0);
    return std::pow(var, 0.5 * q) * std_normal_abs_moment(q);
}

std::vector<double> StationaryModel::sample_at_times(std::span<const double> times, RngStream& rng) const {
    require_strictly_increasing(times);
    if (times.empty()) return {};
    if (const auto* c = std::get_if<ConstantValue>(&kind_))
        return std::vector<double>(times.size(), c->value);
    return PreparedStationarySampler(*this, times).sample(rng);
}

double gamma_from_psi(double psi1, double psi2, double ey0_sq, double h) {
    if (h < 0.0) throw std::invalid_argument("gamma_from_psi: h must be >= 0");
    if (ey0_sq <= 0.0) throw std::invalid_argument("gamma_from_psi: ey0_sq must be > 0");
    if (h == 0.0) return ey0_sq;
    return 0.5 * ey0_sq * std::exp(-psi1 * h) *
           (1.0 + std::exp(psi2 * h) - std::pow(-std::expm1(-h), -psi2));
}

PsdReport check_positive_semidefinite(const CovarianceFn& gamma, std::span<const double> grid) {
    if (grid.size() > 2048)
        throw std::length_error("check_positive_semidefinite: grid larger than 2048 points");
    const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double g = gamma(std::abs(grid[static_cast<std::size_t>(i)] -
                                            grid[static_cast<std::size_t>(j)]));
            gram(i, j) = g;
            gram(j, i) = g;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    const double min_eig = n > 0 ? solver.eigenvalues().minCoeff() : 0.0;
    return {min_eig >= -kPsdRelTol * std::abs(gamma(0.0)), min_eig};
}

struct CirculantSampler::Impl {
    std::size_t n;
    std::size_t m;
    std::vector<double> scale;  // sqrt(lambda_k / m)
    Fft fft;

    Impl(std::size_t n_, std::size_t m_) : n(n_), m(m_), fft(m_) {}
};

CirculantSampler::CirculantSampler(const CovarianceFn& gamma, std::size_t n, double spacing) {
    if (n == 0) throw std::invalid_argument("CirculantSampler: n must be > 0");
    const std::size_t m = embedding_size(n);
    auto impl = std::make_shared<Impl>(n, m);

    std::vector<std::complex<double>> c(m);
    for (std::size_t j = 0; j < m; ++j)
        c[j] = gamma(static_cast<double>(std::min(j, m - j)) * spacing);
    impl->fft.forward(c);

    double min_eig = kInf;
    impl->scale.resize(m);
    for (std::size_t k = 0; k < m; ++k) min_eig = std::min(min_eig, c[k].real());
    const double tol = kPsdRelTol * static_cast<double>(m) * std::max(std::abs(gamma(0.0)), 1e-300);
    if (min_eig < -tol)
        throw std::runtime_error("circulant embedding not positive semidefinite: min eigenvalue " +
                                 std::to_string(min_eig));
    for (std::size_t k = 0; k < m; ++k)
        impl->scale[k] = std::sqrt(std::max(c[k].real(), 0.0) / static_cast<double>(m));

    min_eigenvalue_ = min_eig;
    impl_ = std::move(impl);
}

std::vector<double> CirculantSampler::sample(RngStream& rng) const {
    const auto& im = *impl_;
    std::vector<std::complex<double>> buf(im.m);
    for (std::size_t k = 0; k < im.m; ++k) {
        const double re = rng.normal();
        const double imag = rng.normal();
        buf[k] = im.scale[k] * std::complex<double>(re, imag);
    }
    im.fft.forward(buf);
    std::vector<double> out(im.n);
    for (std::size_t j = 0; j < im.n; ++j) out[j] = buf[j].real();
    return out;
}

std::vector<double> sample_gaussian_from_covariance(const CovarianceFn& gamma, std::size_t n,
                                                    double spacing, RngStream& rng) {
    return CirculantSampler(gamma, n, spacing).sample(rng);
}

struct PreparedStationarySampler::Impl {
    enum class Mode { Constant, Ou, Gaussian } mode;
    std::size_t n = 0;
    double constant = 0.0;
    // OU recursion coefficients
    double sd0 = 0.0;
    std::vector<double> decay;
    std::vector<double> step_sd;
    // general Gaussian: sample = transform * z
    Eigen::MatrixXd transform;
};

PreparedStationarySampler::PreparedStationarySampler(const StationaryModel& model,
                                                     std::span<const double> times) {
    require_strictly_increasing(times);
    auto impl = std::make_shared<Impl>();
    impl->n = times.size();

    if (const auto* c = std::get_if<ConstantValue>(&model.kind())) {
        impl->mode = Impl::Mode::Constant;
        impl->constant = c->value;
    } else if (const auto* ou = std::get_if<OrnsteinUhlenbeck>(&model.kind())) {
        impl->mode = Impl::Mode::Ou;
        impl->sd0 = std::sqrt(ou->variance);
        impl->decay.reserve(times.size());
        impl->step_sd.reserve(times.size());
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double d = std::exp(-ou->rate * (times[i] - times[i - 1]));
            impl->decay.push_back(d);
            impl->step_sd.push_back(std::sqrt(ou->variance * (1.0 - d * d)));
        }
    } else {
        if (times.size() > 2048)
            throw std::length_error("PreparedStationarySampler: grid larger than 2048 points");
        impl->mode = Impl::Mode::Gaussian;
        const auto& gfc = std::get<GaussianFromCovariance>(model.kind());
        const Eigen::Index n = static_cast<Eigen::Index>(times.size());
        Eigen::MatrixXd gram(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) {
                const double g = gfc.gamma(std::abs(times[static_cast<std::size_t>(i)] -
                                                    times[static_cast<std::size_t>(j)]));
                gram(i, j) = g;
                gram(j, i) = g;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        const double min_eig = solver.eigenvalues().minCoeff();
        if (min_eig < -kPsdRelTol * std::abs(gfc.gamma(0.0)))
            throw std::runtime_error("covariance on grid not positive semidefinite: min eigenvalue " +
                                     std::to_string(min_eig));
        impl->transform = solver.eigenvectors() *
                          solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    }
    impl_ = std::move(impl);
}

std::vector<double> PreparedStationarySampler::sample(RngStream& rng) const {
    const auto& im = *impl_;
    std::vector<double> out(im.n);
    switch (im.mode) {
        case Impl::Mode::Constant:
            std::fill(out.begin(), out.end(), im.constant);
            break;
        case Impl::Mode::Ou: {
            if (im.n == 0) break;
            double y = rng.normal(0.0, im.sd0);
            out[0] = y;
            for (std::size_t i = 1; i < im.n; ++i) {
                y = im.decay[i - 1] * y + im.step_sd[i - 1] * rng.normal();
                out[i] = y;
            }
            break;
        }
        case Impl::Mode::Gaussian: {
            Eigen::VectorXd z(static_cast<Eigen::Index>(im.n));
            for (std::size_t i = 0; i < im.n; ++i) z[static_cast<Eigen::Index>(i)] = rng.normal();
            Eigen::VectorXd y = im.transform * z;
            for (std::size_t i = 0; i < im.n; ++i) out[i] = y[static_cast<Eigen::Index>(i)];
            break;
        }
    }
    return out;
}

}  // namespace mfp
