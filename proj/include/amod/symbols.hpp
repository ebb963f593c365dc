#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amod/grid.hpp"

namespace amod {

enum class SymbolKind { Multiplier, Separable, General };

std::string to_string(SymbolKind kind);

using SymbolFn = std::function<cplx(std::span<const double> x, std::span<const double> xi)>;
using MultiplierFn = std::function<cplx(std::span<const double> xi)>;
using CoefficientFn = std::function<cplx(std::span<const double> x)>;
/// Analytic d^alpha_xi d^beta_x sigma(x, xi), or nullopt to fall back to finite differences.
using DerivativeFn = std::function<std::optional<cplx>(std::span<const int> alpha, std::span<const int> beta,
                                                       std::span<const double> x, std::span<const double> xi)>;

struct SeparableTerm {
  CoefficientFn a;
  MultiplierFn m;
};

/// sigma(x, xi) with declared order b and type rho.
struct SymbolSpec {
  std::string name;
  int dim = 1;
  double order = 0.0;
  double rho = 1.0;
  SymbolKind kind = SymbolKind::General;
  SymbolFn eval;
  MultiplierFn multiplier;           ///< Multiplier kind
  std::vector<SeparableTerm> terms;  ///< Separable kind
  DerivativeFn derivative;           ///< optional

  cplx operator()(std::span<const double> x, std::span<const double> xi) const { return eval(x, xi); }

  /// d^alpha_xi d^beta_x sigma. Analytic when available, else nested central
  /// differences with xi-step 1e-3 <xi>^rho and x-step 1e-3.
  cplx partial(std::span<const int> alpha, std::span<const int> beta, std::span<const double> x,
               std::span<const double> xi) const;

  static SymbolSpec make_multiplier(std::string name, int dim, double order, double rho, MultiplierFn m,
                                    DerivativeFn derivative = {});
  static SymbolSpec make_separable(std::string name, int dim, double order, double rho,
                                   std::vector<SeparableTerm> terms);
  static SymbolSpec make_general(std::string name, int dim, double order, double rho, SymbolFn fn,
                                 DerivativeFn derivative = {});
};

/// Sampling lattice for symbol estimates: |xi| log-spaced in [xi_min, xi_max]
/// along fixed directions, x on a subset of the grid nodes.
struct SymbolLattice {
  GridSpec grid;
  double xi_min = 1.0;
  double xi_max = 0.0;          ///< 0 -> range_factor * Nyquist
  double range_factor = 10.0;
  int points_per_decade = 20;
  int x_points = 8;             ///< per axis; must divide the grid samples

  double upper() const { return xi_max > 0.0 ? xi_max : range_factor * grid.nyquist(); }
  /// Radii anchored at the upper end, so a tenfold larger range contains this one.
  std::vector<double> radii() const;
  /// Unit directions: +-1 in 1D, 16 angles in 2D, the 26 neighbour directions in 3D.
  std::vector<std::vector<double>> directions() const;
  std::vector<std::vector<double>> xi_points() const;
  std::vector<std::vector<double>> x_points_list() const;
};

struct SeminormEstimate {
  int N = 0;
  int M = 0;
  double value = 0.0;
  std::vector<double> x_star, xi_star;
  std::vector<int> alpha_star, beta_star;
};

/// max over |alpha| <= N, |beta| <= M of sup <xi>^{rho|alpha| - b} |d^alpha_xi d^beta_x sigma|.
SeminormEstimate seminorm_estimate(const SymbolSpec& sigma, int N, int M, const SymbolLattice& lattice);

/// Estimate with `rho` replacing the declared type.
SeminormEstimate seminorm_estimate(const SymbolSpec& sigma, int N, int M, const SymbolLattice& lattice, double rho);

struct MembershipReport {
  SeminormEstimate base;      ///< xi range [1, 10 Nyquist]
  SeminormEstimate extended;  ///< xi range [1, 100 Nyquist]
  double change = 0.0;        ///< relative change between the two
  bool member = false;        ///< change < tolerance
};

/// Range-stability test for sigma in S^b_rho at the declared (or given) rho.
MembershipReport membership_check(const SymbolSpec& sigma, int N, int M, const SymbolLattice& lattice,
                                  std::optional<double> rho = std::nullopt, double tolerance = 0.1);

struct HypoellipticSpec {
  double b = 0.0;
  double b0 = 0.0;
  double c = 1.0;  ///< checks run on <xi> >= c
  double a = 0.0;  ///< claimed lower constant; 0 means "any positive value"
  void validate() const;
};

struct HypoellipticRow {
  std::vector<int> alpha, beta;
  double base = 0.0;      ///< C_{alpha,beta} over [.., 10 Nyquist]
  double extended = 0.0;  ///< C_{alpha,beta} over [.., 100 Nyquist]
  bool stable = false;
};

struct HypoellipticReport {
  double a_est = 0.0;
  std::vector<HypoellipticRow> rows;
  bool passed(double claimed_a = 0.0) const;
};

/// a_est = inf |sigma| / <xi>^{b0} and C_{alpha,beta} = sup |d sigma| <xi>^{rho|alpha|} / |sigma| on <xi> >= c.
/// Throws GuardViolation if sigma vanishes at a lattice point.
HypoellipticReport hypoelliptic_check(const SymbolSpec& sigma, const HypoellipticSpec& spec, int N, int M,
                                      const SymbolLattice& lattice, double tolerance = 0.1);

/// sum_{|alpha| < N} 1/(i^{|alpha|} alpha!) d^alpha_xi sigma1 * d^alpha_x sigma2 as a general symbol.
SymbolSpec composition_leading(const SymbolSpec& sigma1, const SymbolSpec& sigma2, int N);

namespace catalog {

SymbolSpec identity(int dim);
/// <xi>^b.
SymbolSpec bessel(int dim, double b);
/// l(tau, xi) = i tau + |xi|^2 on R^{1+n}; axis 0 carries tau.
SymbolSpec heat(int dim);
/// (i tau + |xi|^2)^{-1} eta, eta vanishing on <zeta> <= c and 1 on <zeta> >= 2c.
SymbolSpec heat_parametrix(int dim, double c = 1.0);
/// eta(xi) exp(i <xi>^{1 - rho}), declared S^0_rho.
SymbolSpec oscillatory(int dim, double rho, double c = 1.0);
/// (1 + sin(nu x_1))/2 * m(xi) for a multiplier m.
SymbolSpec modulated(const SymbolSpec& m, double nu = 1.0);
/// Multiple of pi/L closest to nu (at least pi/L): sin(nu x) is then smooth on the periodic box.
double periodic_frequency(const GridSpec& grid, double nu = 1.0);
/// sigma(x, xi) = a(x) with a = (1 + sin x_1)/2 + 1.
SymbolSpec smooth_coefficient(int dim);
/// sigma(x, xi) = exp(i x . xi0).
SymbolSpec plane_wave(std::vector<double> xi0);

/// Lookup by name with parameters b, rho, c, and m, nu for "modulated".
SymbolSpec by_name(const std::string& name, int dim, const std::map<std::string, std::string>& params);
std::vector<std::string> names();

}  // namespace catalog

}  // namespace amod
