#pragma once

#include <string>

#include "amod/grid.hpp"
#include "amod/symbols.hpp"

namespace amod {

enum class ApplyPath { Auto, Multiplier, Separable, General };

std::string to_string(ApplyPath path);
/// Throws ConfigError on an unknown name.
ApplyPath parse_apply_path(const std::string& name);

inline constexpr double kGeneralCostLimit = 4294967296.0;  // 2^32 symbol samples

struct ApplicationPlan {
  SymbolKind kind = SymbolKind::General;
  GridSpec grid;
  ApplyPath path = ApplyPath::General;
  double cost = 0.0;  ///< symbol samples: N^n for multipliers, R N^n for separable, N^{2n} dense
};

/// Chooses (Auto) or validates the path. Throws std::invalid_argument when the
/// path cannot represent the symbol and ResourceGuard when the dense cost
/// exceeds `general_limit`.
ApplicationPlan plan_application(const SymbolSpec& sigma, const GridSpec& grid, ApplyPath requested = ApplyPath::Auto,
                                 double general_limit = kGeneralCostLimit);

/// m(xi) sampled on the frequency nodes. Throws std::domain_error on a non-finite value.
std::vector<cplx> sample_multiplier(const MultiplierFn& m, const GridSpec& grid);

/// inverse_transform(m(xi) f^(xi)).
SampledField apply_multiplier(const SymbolSpec& m, const SampledField& f);
SampledField apply_multiplier(const MultiplierFn& m, const SampledField& f);

/// sum_r a_r(x) (m_r(D) f)(x); a multiplier counts as one term with a = 1.
SampledField apply_separable(const SymbolSpec& sigma, const SampledField& f);

/// Dense Kohn-Nirenberg sum, one x row at a time.
SampledField apply_general(const SymbolSpec& sigma, const SampledField& f, double general_limit = kGeneralCostLimit);

/// Runs the planned path.
SampledField apply(const SymbolSpec& sigma, const SampledField& f, ApplyPath path = ApplyPath::Auto,
                   double general_limit = kGeneralCostLimit);

/// J^b f = (<xi>^b f^)^v.
SampledField bessel_lift(const SampledField& f, double b);

}  // namespace amod
