#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "amod/covering.hpp"
#include "amod/grid.hpp"
#include "amod/modspace.hpp"
#include "amod/pdo.hpp"
#include "amod/symbols.hpp"

namespace amod {

/// Desk-scale default grid: L=16, N=256 in 1D; L=12, N=128 in 2D; L=8, N=32 in 3D.
GridSpec desk_grid(int dim);

/// Catalog symbol plus its parameters, e.g. "oscillatory(rho=0.5)".
struct SymbolRef {
  std::string name = "identity";
  std::map<std::string, std::string> params;

  /// Resolves nu = auto to the grid-periodic frequency. Throws ConfigError.
  SymbolSpec build(const GridSpec& grid) const;
  std::string text() const;
};

/// Throws ConfigError on malformed text.
SymbolRef parse_symbol_ref(const std::string& text);

struct ExperimentConfig {
  std::string name = "all";  ///< lifting, boundedness, maximal, composition, hypoelliptic or all
  std::vector<double> b = {-1.0, 0.0, 1.0, 2.0};
  double headroom = 1.0;
  std::vector<double> thetas = {0.5, 1.0, 2.0};
  std::vector<std::vector<double>> p_grid;  ///< empty -> experiment default
  bool peetre = true;
  std::vector<int> orders = {1, 2};
  SymbolRef sigma1{"bessel", {{"b", "2"}}};
  SymbolRef sigma2{"smooth_coefficient", {}};
  std::vector<double> exploratory_alpha = {0.75, 0.9};
  double cutoff = 1.0;
  std::optional<double> bound;
};

struct SweepConfig {
  std::vector<double> alpha, s, q, b, rho;
  std::vector<std::vector<double>> p;

  /// Product of the non-empty list lengths (1 when every list is empty).
  double points() const;
};

struct OutputConfig {
  std::string directory = ".";
  std::string format = "csv";  ///< csv or json
};

struct RunConfig {
  std::optional<GridSpec> grid;
  SpaceParams space;
  CoveringParams covering;
  bool dyadic = false;
  std::vector<std::vector<double>> norm_p;  ///< bapu-check norm condition; empty -> (1,..,1) and (0.5, 2, ..)
  SymbolRef symbol;
  ApplyPath path = ApplyPath::Auto;
  double general_limit = kGeneralCostLimit;
  ExperimentConfig experiment;
  SweepConfig sweep;
  OutputConfig output;
  std::set<std::string> explicit_keys;

  bool has(const std::string& key) const { return explicit_keys.count(key) != 0; }

  /// Configured grid or the desk grid of `default_dim`.
  GridSpec grid_or(int default_dim) const;

  /// Space parameters with p defaulted to the grid dimension: (2, 4) in 2D, all 2 otherwise.
  SpaceParams space_for(const GridSpec& grid) const;

  static RunConfig parse(std::istream& is, const std::string& source = "config");
  static RunConfig parse_string(const std::string& text);
  static RunConfig load(const std::string& path);
  static const std::vector<std::string>& known_keys();
};

/// Parsers shared with the CLI; all throw ConfigError.
double parse_number(const std::string& text, const std::string& key);
std::vector<double> parse_list(const std::string& text, const std::string& key);
std::vector<std::vector<double>> parse_vector_list(const std::string& text, const std::string& key);

}  // namespace amod
