#include "amod/bump.hpp"

#include <cmath>

#include "amod/grid.hpp"

namespace amod {

double mother_bump(double t_squared) {
  if (t_squared >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t_squared));
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double radial_cutoff(std::span<const double> zeta, double c) {
  return smooth_step((bracket(zeta) - c) / c);
}

}  // namespace amod
