#pragma once

#include <span>
#include <string>
#include <vector>

#include "amod/covering.hpp"
#include "amod/grid.hpp"
#include "amod/mixed_norm.hpp"

namespace amod {

/// psi_k sampled on the frequency nodes of the covering grid, stored sparsely
/// over the nodes of its support box.
struct Window {
  std::size_t patch = 0;
  std::vector<std::size_t> nodes;
  std::vector<double> values;

  std::vector<double> dense(std::size_t grid_size) const;
  double max_value() const;
};

/// Smooth partition of unity subordinate to a covering. Normalization divides
/// each raw bump by the sampled denominator at every node, so the identity
/// sum_k psi_k = 1 holds on the grid up to rounding; the closed form
/// `evaluate` gives the same values at nodes and is used off-grid.
class BapuFamily {
 public:
  BapuFamily() = default;
  BapuFamily(Covering covering, std::vector<Window> windows, double min_denominator);

  const Covering& covering() const { return covering_; }
  const GridSpec& grid() const { return covering_.grid; }
  const std::vector<Window>& windows() const { return windows_; }
  std::size_t size() const { return windows_.size(); }
  const FrequencyPatch& patch(std::size_t w) const { return covering_.patches[windows_[w].patch]; }
  double min_denominator() const { return min_denominator_; }

  /// Closed-form psi_k(xi) = phi_k(xi) / sum_{j ~ k} phi_j(xi).
  double evaluate(std::size_t w, std::span<const double> xi) const;

  /// Copy with window w set to zero everywhere (negative control).
  BapuFamily without(std::size_t w) const;

  /// Indices of windows whose support sits inside the covered ball.
  std::vector<std::size_t> interior_windows() const;

 private:
  Covering covering_;
  std::vector<Window> windows_;
  double min_denominator_ = 0.0;
};

/// Throws GuardViolation if the denominator falls below covering.params.delta
/// at a node of the covered ball.
BapuFamily build_bapu(const Covering& covering);

/// Max |sum_k psi_k - 1| over the covered nodes.
double partition_sum(const BapuFamily& bapu);

/// Per-(window, multi-index) constants with a factor-of-median uniformity summary.
struct UniformityRow {
  std::size_t window = 0;
  std::string label;
  std::vector<int> order;  ///< beta, or {m} for decay constants
  double value = 0.0;
};

struct UniformityReport {
  std::vector<UniformityRow> rows;
  /// max over rows of max(v / median, median / v), median taken per order.
  double worst_factor = 0.0;
  double tolerance = 4.0;
  bool passed() const { return worst_factor <= tolerance; }
};

void summarize_uniformity(UniformityReport& report);

struct DerivativeCheckOptions {
  int max_order = 2;
  int samples_per_axis = 0;                 ///< 0 -> 201 in 1D, 41 in 2D, 13 in 3D
  std::vector<std::size_t> windows;          ///< empty -> interior windows
};

/// sup_xi <xi>^{|beta| alpha} |d^beta psi_k(xi)| per k and beta (central
/// differences on the closed form, step 1e-3 rho_k).
UniformityReport derivative_bound_check(const BapuFamily& bapu, const DerivativeCheckOptions& opt = {});

struct RescaledReport {
  UniformityReport derivatives;
  std::vector<double> support_radius;  ///< per checked window, rescaled coordinates
  double common_radius = 0.0;          ///< r with every support inside B(0, r)
};

/// Checks psi~_k(xi) = psi_k(|xi_k|^alpha xi + xi_k).
RescaledReport rescaled_window_check(const BapuFamily& bapu, const DerivativeCheckOptions& opt = {});

struct DecayCheckOptions {
  std::vector<int> m_values = {2, 4};
  int samples = 0;              ///< mu grid samples per axis; 0 -> 4096 (1D), 512 (2D), 64 (3D)
  double frequency_extent = 4.0;
  double noise_floor = 1e-12;   ///< ignore |mu^| below this fraction of its max
  std::vector<std::size_t> windows;
};

struct DecayReport {
  UniformityReport constants;          ///< order = {m}
  std::vector<double> mu_hat_zero;     ///< per window, from the transform
  std::vector<double> mu_hat_zero_quadrature;  ///< (2pi)^{-n/2} a_k^{-n} int psi_k, direct quadrature
};

/// mu_k(xi) = psi_k(a_k xi) transformed on a fine grid;
/// C = sup_y |mu^_k(y)| <y>^m / a_k^{(m-n)(1-alpha)}.
DecayReport dilated_window_decay_check(const BapuFamily& bapu, const DecayCheckOptions& opt = {});

struct NormConditionOptions {
  double tail_tolerance = 1e-6;
  std::size_t max_nodes = std::size_t{1} << 22;
  std::vector<std::size_t> windows;
};

struct NormConditionRow {
  std::size_t window = 0;
  std::string label;
  double chi_norm = 0.0;
  double inverse_norm = 0.0;
  double value = 0.0;
  double tail_fraction = 0.0;
  int grid_samples = 0;
};

struct NormConditionReport {
  std::vector<NormConditionRow> rows;
  double sup = 0.0;
  double median = 0.0;
  double worst_factor = 0.0;
};

/// |Q_k|^{-1} ||chi_Q||_{p~} ||F^{-1} psi_k||_{p~} per window. The inverse
/// transform runs on the window's grid refined in space (same Nyquist) until
/// the L1 mass outside |x|_inf < L/2 is below tail_tolerance.
NormConditionReport bapu_norm_condition(const BapuFamily& bapu, const MixedExponents& p,
                                        const NormConditionOptions& opt = {});

/// Same for several exponent vectors, sharing the refined transforms.
std::vector<NormConditionReport> bapu_norm_condition(const BapuFamily& bapu, const std::vector<MixedExponents>& ps,
                                                     const NormConditionOptions& opt = {});

double median(std::vector<double> v);

}  // namespace amod
