#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "amod/covering.hpp"
#include "amod/grid.hpp"
#include "amod/mixed_norm.hpp"
#include "amod/modspace.hpp"
#include "amod/pdo.hpp"
#include "amod/symbols.hpp"

namespace amod {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Boundary samples must stay below this fraction of the sup.
inline constexpr double kBoundaryDecayTolerance = 1e-12;

enum class MemberRole { Standard, Control, DeadZone };

std::string to_string(MemberRole role);

struct FamilyMember {
  std::string label;
  std::string kind;            ///< "dilated", "modulated", "chirp", "rough", ...
  double lambda = kNaN;        ///< Gaussian rate
  double omega = kNaN;         ///< |omega| of the modulation
  double chirp = kNaN;         ///< c in e^{ic|x|^2}
  std::vector<double> center;  ///< spectral center (Peetre checks)
  MemberRole role = MemberRole::Standard;
  Generator generator;

  SampledField sample(const GridSpec& grid) const;
};

/// Measured guard quantities of a sampled member.
struct MemberGuards {
  double boundary = 0.0;       ///< max boundary |f| / sup |f|
  double spectral_tail = 0.0;  ///< energy fraction outside the covered ball
};

MemberGuards member_guards(const SampledField& f, double covered_radius);

/// Fixed list of Schwartz test functions on one grid.
struct TestFamily {
  GridSpec grid;
  double covered_radius = 0.0;
  std::vector<FamilyMember> members;
  std::vector<std::string> notes;  ///< parameter clamps applied at construction

  std::size_t size() const { return members.size(); }

  /// Throws GuardViolation naming the first member whose boundary decay or
  /// spectral margin fails. `spectral` = false skips the margin test.
  void check_guards(bool spectral = true) const;

  /// Twelve members: 4 dilated Gaussians, 5 modulated Gaussians, 3 chirps.
  /// Rates, modulations and chirp parameters are clamped so every member
  /// keeps an energy fraction below 1e-10 outside radius
  /// `covered_radius - headroom`.
  static TestFamily standard(const GridSpec& grid, double margin = 0.9, double headroom = 1.0);

  /// Twenty members with dilations up to lambda = 64; only boundary decay is enforced.
  static TestFamily maximal(const GridSpec& grid);

  /// Rough members (Gaussian + high modulation), an eta = 1 control and a
  /// low-frequency dead-zone member on a (1+1)-dimensional grid.
  static TestFamily hypoelliptic(const GridSpec& grid, double margin = 0.9);
};

/// Clamp limits used by `standard`.
struct FamilyLimits {
  double lambda_max = 0.0;
  double omega_max = 0.0;
  double chirp_max = 0.0;
};

FamilyLimits family_limits(const GridSpec& grid, double margin = 0.9, double headroom = 1.0);

struct ExperimentRow {
  std::string member;
  std::string kind;
  double lambda = kNaN;
  double omega = kNaN;
  double chirp = kNaN;
  double theta = kNaN;
  std::vector<double> p;  ///< empty -> report p
  int order = 0;          ///< composition order N
  double input_norm = 0.0;
  double output_norm = 0.0;
  double ratio = 0.0;
  bool asserted = true;
  std::string note;
};

struct ExperimentCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = true;
  bool asserted = true;
};

struct ExperimentReport {
  std::string experiment;
  std::string symbol;
  double alpha = kNaN;
  double s = kNaN;
  std::vector<double> p;
  double q = kNaN;
  double b = kNaN;
  double rho = kNaN;

  std::vector<ExperimentRow> rows;
  double min_ratio = kNaN;
  double median_ratio = kNaN;
  double max_ratio = kNaN;
  std::vector<std::string> guards;
  std::vector<ExperimentCheck> checks;
  double seconds = 0.0;

  /// Aggregates over the asserted rows (all rows when none are asserted).
  void summarize();
  double spread() const { return max_ratio / min_ratio; }
  bool passed() const;
  /// First failing asserted check, empty if none.
  std::string first_failure() const;
  std::string summary_text() const;
};

struct ExperimentOptions {
  int jobs = 1;
  CoveringParams covering;
  ApplyPath path = ApplyPath::Auto;
  double general_limit = kGeneralCostLimit;
  double bound = kNaN;  ///< overrides the committed calibration constant
};

/// Ratios ||J^b f||_{M^{s-b}} / ||f||_{M^s}; asserts max/min <= S_cal.
ExperimentReport lifting_experiment(const TestFamily& family, double b, const SpaceParams& params,
                                    const ExperimentOptions& opt = {});

/// Ratios ||T_sigma f||_{M^{s-b}} / ||f||_{M^s} with b = sigma.order. Rows are
/// asserted (max ratio <= C_cal) when alpha <= sigma.rho, exploratory otherwise.
ExperimentReport boundedness_experiment(const SymbolSpec& sigma, const TestFamily& family, const SpaceParams& params,
                                        const ExperimentOptions& opt = {});

/// Max relative difference between the separable and dense paths for a
/// modulated Gaussian on `grid`.
double path_equivalence_check(const SymbolSpec& sigma, const GridSpec& grid);

struct MaximalOptions {
  int jobs = 1;
  std::vector<double> thetas = {0.5, 1.0, 2.0};
  std::vector<MixedExponents> ps = {MixedExponents{2.0, 4.0}, MixedExponents{4.0, 2.0}, MixedExponents{1.0, 2.0}};
  std::vector<double> peetre_thetas = {0.5, 1.0};
  bool peetre = true;
  double bound = kNaN;
};

/// mixed_norm(M_theta f) / mixed_norm(f) per member, theta and p; rows with
/// theta < min p are asserted against the committed constant.
ExperimentReport maximal_experiment(const TestFamily& family, const MaximalOptions& opt = {});

/// r_N = ||T_{s1}(T_{s2} f) - T_{s1 # s2, N} f||; ratio is r_N relative to ||T_{s1} T_{s2} f||.
ExperimentReport composition_experiment(const SymbolSpec& sigma1, const SymbolSpec& sigma2, const SampledField& f,
                                        const std::vector<int>& orders = {1, 2}, const ExperimentOptions& opt = {});

/// Default composition input: modulated Gaussian on the 1D desk grid.
SampledField composition_input(const GridSpec& grid);

struct HypoellipticOptions {
  int jobs = 1;
  double cutoff = 1.0;  ///< c in eta
  double smoothing = kNaN;
  double control_tolerance = 1e-6;
  CoveringParams covering;
};

/// g = (I - T_a T_l) f for the heat symbol l and its parametrix a.
ExperimentReport hypoelliptic_experiment(const TestFamily& family, const SpaceParams& params,
                                         const HypoellipticOptions& opt = {});

/// Runs fn(i) for i < n on up to `jobs` threads; results in index order.
/// The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace amod
