#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mfp/rng.hpp"

namespace mfp {

// Log-normal cascade over cone sets in the half-plane. The base law per unit
// control measure is Gaussian with variance `variance` and mean fixed to
// -variance/2, which normalizes psi(1) = 0. Control measure density is
// v^-2 du dv.
struct CascadeSpec {
    double integral_scale;    // T
    double truncation;        // l in (0, T]
    double variance;          // v >= 0
    std::size_t resolution;   // simulation grid cells on [0, T]
    double q_max = 2.0;       // moment bound (theta_c analog)
};

void validate(const CascadeSpec& spec);

// per-unit-measure exponents of the Gaussian base law
double base_laplace_exponent(const CascadeSpec& spec, double q);          // psi, psi(1)=0
std::complex<double> base_characteristic_exponent(const CascadeSpec& spec, double theta);

// mu(A_l(t)) = 1 + log(T/l), independent of t
double cone_measure(const CascadeSpec& spec, double t);

// ---- geometry-based numeric oracle (independent of the closed forms) ----
// Cone A_l(c) = {(u,v) : v >= l, c - f(v)/2 < u <= c + f(v)/2}, f = min(v,T).
enum class ConeCombo { OnlyFirst, Intersection, FirstMinusSecond, SecondMinusFirst };
double cone_combo_measure_numeric(double integral_scale, double l1, double c1, double l2,
                                  double c2, ConeCombo combo);

// Measures of B1 = A1\A2, B2 = A1 n A2, B3 = A2\A1 for the scaled cones
// A_i = A_{lambda_i l}(lambda_i t), 0 < lambda2 < lambda1 <= 1. The closed
// forms hold in the small-truncation regime lambda1*l <= (lambda1-lambda2)*t
// (always reached as l -> 0); closed_form_valid reports it.
struct ConePairMeasures {
    double b1, b2, b3;                             // closed forms
    double b1_numeric, b2_numeric, b3_numeric;     // 2-d integration of the cones
    double max_abs_error;                          // closed vs numeric
    bool closed_form_valid;
};
ConePairMeasures cone_pair_measures(const CascadeSpec& spec, double t, double lambda1,
                                    double lambda2);

// Cov(omega_l(s), omega_l(s+tau)) = variance * mu(A_l n A_l shifted by tau)
double omega_covariance(const CascadeSpec& spec, double tau);

struct CascadeSample {
    std::vector<double> times;       // right cell edges k*T/n, k=1..n
    std::vector<double> cumulative;  // X_l(t_k) = Q_l([0, t_k]) Riemann sums
};

// Prepared simulator: the circulant embedding of omega's covariance is
// factored once; each replica costs one FFT. Thread-safe once built.
class CascadeSimulator {
public:
    explicit CascadeSimulator(const CascadeSpec& spec);
    CascadeSample simulate(RngStream& rng) const;
    const CascadeSpec& spec() const { return spec_; }

private:
    CascadeSpec spec_;
    std::shared_ptr<const void> sampler_;  // CirculantSampler
    double mean_;
    double cell_width_;
};

CascadeSample simulate_lognormal_cascade(const CascadeSpec& spec, RngStream& rng);

using CharacteristicExponent = std::function<std::complex<double>(double)>;

// CF of (Z(s1)+s1, Z(s2)+s2) where Z(s) = log W(e^-s) is the log
// scaling-factor process of the cascade.
std::complex<double> pair_cf_scaling_process(const CharacteristicExponent& psi_cf, double a1,
                                             double a2, double s1, double s2);
std::complex<double> pair_cf_scaling_process(const CascadeSpec& spec, double a1, double a2,
                                             double s1, double s2);

// CF of (L~(s1), L~(s2)) for the Levy process sharing Z's marginals.
std::complex<double> pair_cf_levy(const CharacteristicExponent& psi_cf, double a1, double a2,
                                  double s1, double s2);
std::complex<double> pair_cf_levy(const CascadeSpec& spec, double a1, double a2, double s1,
                                  double s2);

struct CfGridPoint {
    double a1, a2, s1, s2;
};

std::vector<CfGridPoint> default_cf_grid();

// max |pair_cf_scaling_process - pair_cf_levy| over the grid; strictly
// positive for variance > 0, identically 0 in the degenerate case
double non_levy_gap(const CascadeSpec& spec, std::span<const CfGridPoint> grid);
double non_levy_gap(const CascadeSpec& spec);

}  // namespace mfp
