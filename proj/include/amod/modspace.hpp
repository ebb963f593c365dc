#pragma once

#include <span>
#include <vector>

#include "amod/bapu.hpp"
#include "amod/grid.hpp"
#include "amod/mixed_norm.hpp"

namespace amod {

/// (alpha, s, p, q) naming the space M^{s,alpha}_{p,q}; q = kInf takes a sup over bands.
struct SpaceParams {
  double alpha = 0.5;
  double s = 0.0;
  MixedExponents p{2.0};
  double q = 2.0;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct BandRow {
  std::size_t window = 0;
  std::vector<int> index;
  double scale = 1.0;      ///< a_k
  double band_norm = 0.0;  ///< ||F^{-1}(psi_k F f)||_p
  double weighted = 0.0;   ///< a_k^s * band_norm
};

struct BandProfile {
  std::vector<BandRow> rows;
  double q = 2.0;
  double tail_fraction = 0.0;  ///< spectral energy outside the covered ball, relative

  /// l^q combination of the weighted terms.
  double combine() const;
};

/// (sum t^q)^{1/q}, or max t when q is infinite.
double lq_combine(std::span<const double> terms, double q);

/// F^{-1}(psi_k F f) for window w. Throws std::invalid_argument on a grid mismatch.
SampledField band_project(const SampledField& f, const BapuFamily& bapu, std::size_t w);
SampledField band_project(const Spectrum& F, const BapuFamily& bapu, std::size_t w);

inline constexpr double kSpectralTailTolerance = 1e-8;

/// Per-band rows. Throws GuardViolation when more than `tail_tolerance` of
/// the spectral energy lies outside the covered ball.
BandProfile band_profile(const SampledField& f, const BapuFamily& bapu, const SpaceParams& params,
                         double tail_tolerance = kSpectralTailTolerance);

/// Truncated norm over the retained bands.
double modulation_norm(const SampledField& f, const BapuFamily& bapu, const SpaceParams& params,
                       double tail_tolerance = kSpectralTailTolerance);

/// BAPU for the params' alpha on `grid` (auto-calibrated unless `covering.radius_factor` > 0).
BapuFamily make_bapu(const SpaceParams& params, const GridSpec& grid, CoveringParams covering = {});

}  // namespace amod
