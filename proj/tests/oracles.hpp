#pragma once

#include <functional>

#include "mfp/cascade.hpp"

// Test-only oracles. Deliberately separate implementations from the library:
// adaptive Simpson instead of fixed Gauss-Legendre panels, and an independent
// encoding of the cone geometry.
namespace oracles {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// measure of a boolean combination of two cones under density v^-2 du dv
double cone_measure_simpson(double integral_scale, double l1, double c1, double l2, double c2,
                            mfp::ConeCombo combo);

// exact second moment of the discretized cascade Riemann sum over the first
// `cells` cells, using Simpson-integrated cone intersections
double cascade_second_moment(const mfp::CascadeSpec& spec, std::size_t cells);

}  // namespace oracles
