#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "amod/grid.hpp"

namespace amod {

enum class PatchShape { Cube, Ball, Shell };

/// One frequency patch. Cubes come from the alpha family (alpha < 1); the
/// dyadic family uses a central ball plus annular shells.
struct FrequencyPatch {
  std::vector<int> index;       ///< k for cubes, {j} for dyadic pieces
  std::vector<double> center;   ///< xi_k; nominal (2^j, 0, ...) for shells
  double scale = 1.0;           ///< a_k = <xi_k>
  double radius = 0.0;          ///< cube half-side rho_k, or outer radius
  double inner_radius = 0.0;    ///< shells only
  PatchShape shape = PatchShape::Cube;
  bool interior = false;        ///< window support lies inside the covered ball

  double measure() const;
  /// Closed-set membership.
  bool contains(std::span<const double> xi) const;
  /// Interiors intersect.
  bool overlaps(const FrequencyPatch& other) const;
  double distance(std::span<const double> xi) const;
  /// Raw (unnormalized) window phi_k(xi); zero outside the patch.
  double bump(std::span<const double> xi) const;
  /// Axis-aligned bounds of the window support, used to enumerate nodes.
  std::pair<std::vector<double>, std::vector<double>> bounds() const;
  std::string label() const;
};

struct CoveringParams {
  double alpha = 0.5;
  double radius_factor = 0.0;  ///< A; <= 0 requests auto-calibration
  int kmax = 0;                ///< |k|_inf bound; <= 0 means "whatever the margin allows"
  double margin = 0.9;         ///< centers kept while |xi_k| <= margin * Nyquist
  double delta = 0.1;          ///< minimum partition denominator on covered nodes
};

struct Covering {
  CoveringParams params;
  GridSpec grid;
  double radius_factor = 0.0;  ///< A actually used
  double covered_radius = 0.0; ///< margin * Nyquist
  bool dyadic = false;
  std::vector<FrequencyPatch> patches;
  std::vector<std::vector<std::size_t>> neighbors;  ///< overlapping patches, self included
  int calibration_steps = 0;

  double alpha() const { return dyadic ? 1.0 : params.alpha; }
  std::optional<std::size_t> find(std::span<const int> index) const;
  /// Nodes inside the covered ball, in flat order.
  std::vector<std::size_t> covered_nodes() const;
};

/// All k in Z^n \ {0} with |k|_inf <= kmax paired with xi_k = k <k>^{alpha/(1-alpha)}.
std::vector<std::pair<std::vector<int>, std::vector<double>>> centers(double alpha, int kmax, int dim);

/// Cube patches with the given radius factor (no calibration).
Covering build_covering(const CoveringParams& params, const GridSpec& grid);

/// Dyadic central ball + shells {2^{j-1} < |xi| < 2^{j+1}} reaching the covered ball.
Covering dyadic_covering(const GridSpec& grid, double margin = 0.9);

struct AdmissibilityReport {
  int overlap_max = 0;            ///< n0
  double measure_comparability = 0.0;
  double eccentricity = 0.0;      ///< K = max R_Q / r_Q
  double coverage_deficit = 0.0;
  std::optional<std::vector<double>> uncovered_node;  ///< a witness when deficit > 0
};

AdmissibilityReport admissibility_check(const Covering& covering);

/// Sum of raw windows at every frequency node of the covering's grid.
std::vector<double> partition_denominator(const Covering& covering);

/// Smallest denominator over covered nodes and the node where it occurs.
std::pair<double, std::size_t> min_covered_denominator(const Covering& covering);

/// Grow A from 0.75 by factors of 1.25 until coverage is complete and the
/// partition denominator stays >= delta on the covered ball.
Covering calibrate_covering(const CoveringParams& params, const GridSpec& grid);

/// Dispatch: alpha == 1 -> dyadic; radius_factor <= 0 -> calibrated; else fixed.
Covering make_covering(const CoveringParams& params, const GridSpec& grid);

}  // namespace amod
