#pragma once

#include <limits>
#include <span>
#include <vector>

#include "amod/grid.hpp"

namespace amod {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponent vector p = (p_1, ..., p_n), each in (0, inf].
class MixedExponents {
 public:
  MixedExponents() = default;
  explicit MixedExponents(std::vector<double> p);
  MixedExponents(std::initializer_list<double> p) : MixedExponents(std::vector<double>(p)) {}

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t j) const { return p_[j]; }
  const std::vector<double>& values() const { return p_; }

  /// Running minimum p~_j = min{1, p_1, ..., p_j}.
  MixedExponents tilde() const;
  /// r = min{1, q, p_1, ..., p_n}.
  double r(double q) const;
  double min() const;

 private:
  std::vector<double> p_;
};

/// Iterated Riemann-sum quasi-norm: innermost over x_1, outermost over x_n.
/// A p_j = inf stage is a max over that axis.
double mixed_norm(const SampledField& f, const MixedExponents& p);
double mixed_norm(const GridSpec& grid, std::span<const double> abs_values, const MixedExponents& p);

/// Exact discrete maximal function along `axis` (0-based): at each node, the
/// largest mean of |f| over node intervals of that axis containing it.
SampledField directional_maximal(const SampledField& f, int axis);

/// (M_n(...(M_1 |f|^theta)...))^{1/theta}, axes in index order.
SampledField iterated_maximal(const SampledField& f, double theta);

/// In-place real version used by the operators above.
void maximal_along_axis(const GridSpec& grid, std::vector<double>& a, int axis);

struct PeetreReport {
  double worst_ratio = 0.0;
  std::size_t argmax = 0;
  std::size_t excluded = 0;  ///< nodes with M_theta f below the exclusion floor
};

/// Worst ratio over the grid of sup_y |f(y)| / <R(x-y)>^{n/theta} against M_theta f(x).
/// Requires f^ to live in center + R[-2,2]^n (relative energy outside <= 1e-10).
PeetreReport peetre_check(const SampledField& f, std::span<const double> center, double R,
                          double theta);

}  // namespace amod
