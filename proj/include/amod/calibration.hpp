#pragma once

namespace amod::calibration {

// Committed regression constants: twice the values observed on the first
// calibration run at the default desk grids (see README, "Calibration").

/// Lifting: max/min ratio spread over the standard family.
inline constexpr double kLiftingSpread = 3.579;

/// Boundedness: max ratio for hypothesis-satisfying configurations.
inline constexpr double kBoundednessRatio = 1.720;

/// Mixed maximal inequality: max ||M_theta f|| / ||f|| with theta < min p.
inline constexpr double kMaximalRatio = 9.106;

/// Hypoelliptic smoothing: ||(I - T_a T_l) f|| <= kSmoothing ||f||.
inline constexpr double kSmoothing = 0.1;

}  // namespace amod::calibration
