#pragma once

#include <span>

namespace amod {

/// g(t) = exp(-1/(1-|t|^2)) for |t| < 1, else 0; argument is |t|^2.
double mother_bump(double t_squared);

/// C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
double smooth_step(double t);

/// Radial cutoff vanishing on <zeta> <= c and identically 1 on <zeta> >= 2c.
double radial_cutoff(std::span<const double> zeta, double c);

}  // namespace amod
