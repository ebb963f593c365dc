#include "amod/pdo.hpp"

#include <cmath>
#include <sstream>

#include "amod/errors.hpp"

namespace amod {

std::string to_string(ApplyPath path) {
  switch (path) {
    case ApplyPath::Auto:
      return "auto";
    case ApplyPath::Multiplier:
      return "multiplier";
    case ApplyPath::Separable:
      return "separable";
    case ApplyPath::General:
      return "general";
  }
  return "auto";
}

ApplyPath parse_apply_path(const std::string& name) {
  if (name == "auto") return ApplyPath::Auto;
  if (name == "multiplier") return ApplyPath::Multiplier;
  if (name == "separable") return ApplyPath::Separable;
  if (name == "general") return ApplyPath::General;
  throw ConfigError("path must be auto, multiplier, separable or general (got '" + name + "')");
}

namespace {

void check_symbol_grid(const SymbolSpec& sigma, const GridSpec& grid) {
  grid.validate();
  if (sigma.dim != grid.dim) throw std::invalid_argument("symbol dimension differs from the field grid");
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ApplicationPlan plan_application(const SymbolSpec& sigma, const GridSpec& grid, ApplyPath requested,
                                 double general_limit) {
  check_symbol_grid(sigma, grid);
  ApplicationPlan plan;
  plan.kind = sigma.kind;
  plan.grid = grid;
  plan.path = requested;
  if (requested == ApplyPath::Auto) {
    plan.path = sigma.kind == SymbolKind::Multiplier  ? ApplyPath::Multiplier
                : sigma.kind == SymbolKind::Separable ? ApplyPath::Separable
                                                      : ApplyPath::General;
  }
  if (plan.path == ApplyPath::Multiplier && sigma.kind != SymbolKind::Multiplier)
    throw std::invalid_argument("multiplier path needs an x-independent symbol (" + sigma.name + " is " +
                                to_string(sigma.kind) + ")");
  if (plan.path == ApplyPath::Separable && sigma.kind == SymbolKind::General)
    throw std::invalid_argument("separable path needs a separable or multiplier symbol (" + sigma.name + ")");

  const double nodes = static_cast<double>(grid.size());
  switch (plan.path) {
    case ApplyPath::Multiplier:
      plan.cost = nodes;
      break;
    case ApplyPath::Separable:
      plan.cost = std::max<std::size_t>(1, sigma.terms.size()) * nodes;
      break;
    default:
      plan.cost = nodes * nodes;
      if (plan.cost > general_limit) {
        std::ostringstream os;
        os << "dense symbol quadrature needs N^{2n} = " << plan.cost << " samples, above the limit " << general_limit;
        throw ResourceGuard(os.str());
      }
  }
  return plan;
}

std::vector<cplx> sample_multiplier(const MultiplierFn& m, const GridSpec& grid) {
  std::vector<cplx> w(grid.size());
  std::vector<double> xi(grid.dim);
  for (std::size_t i = 0; i < w.size(); ++i) {
    grid.frequency(i, xi);
    w[i] = m(xi);
    if (!finite(w[i])) throw std::domain_error("multiplier is not finite at a frequency node");
  }
  return w;
}

SampledField apply_multiplier(const MultiplierFn& m, const SampledField& f) {
  const Spectrum F = forward_transform(f);
  return inverse_transform(band_multiply(F, sample_multiplier(m, f.grid)));
}

SampledField apply_multiplier(const SymbolSpec& m, const SampledField& f) {
  check_symbol_grid(m, f.grid);
  if (m.kind != SymbolKind::Multiplier) throw std::invalid_argument("apply_multiplier: symbol depends on x");
  return apply_multiplier(m.multiplier, f);
}

SampledField apply_separable(const SymbolSpec& sigma, const SampledField& f) {
  check_symbol_grid(sigma, f.grid);
  if (sigma.kind == SymbolKind::Multiplier) return apply_multiplier(sigma, f);
  if (sigma.kind != SymbolKind::Separable) throw std::invalid_argument("apply_separable: symbol is not separable");

  const GridSpec& g = f.grid;
  const Spectrum F = forward_transform(f);
  SampledField out(g);
  std::vector<double> x(g.dim);
  for (const auto& term : sigma.terms) {
    const SampledField part = inverse_transform(band_multiply(F, sample_multiplier(term.m, g)));
    for (std::size_t j = 0; j < out.size(); ++j) {
      g.position(j, x);
      const cplx a = term.a(x);
      if (!finite(a)) throw std::domain_error("apply_separable: coefficient is not finite");
      out.values[j] += a * part.values[j];
    }
  }
  return out;
}

SampledField apply_general(const SymbolSpec& sigma, const SampledField& f, double general_limit) {
  plan_application(sigma, f.grid, ApplyPath::General, general_limit);
  const GridSpec& g = f.grid;
  const Spectrum F = forward_transform(f);
  const std::size_t n = g.size();

  std::vector<std::vector<double>> xis(n, std::vector<double>(g.dim));
  for (std::size_t m = 0; m < n; ++m) g.frequency(m, xis[m]);
  const double scale = std::pow(g.freq_step() / std::sqrt(2.0 * kPi), g.dim);

  SampledField out(g);
  std::vector<double> x(g.dim);
  for (std::size_t j = 0; j < n; ++j) {
    g.position(j, x);
    cplx acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (F.values[m] == cplx(0.0)) continue;
      const cplx s = sigma(x, xis[m]);
      if (!finite(s)) throw std::domain_error("apply_general: symbol is not finite at a quadrature node");
      double phase = 0.0;
      for (int a = 0; a < g.dim; ++a) phase += x[a] * xis[m][a];
      acc += s * F.values[m] * std::polar(1.0, phase);
    }
    out.values[j] = scale * acc;
  }
  return out;
}

SampledField apply(const SymbolSpec& sigma, const SampledField& f, ApplyPath path, double general_limit) {
  const ApplicationPlan plan = plan_application(sigma, f.grid, path, general_limit);
  switch (plan.path) {
    case ApplyPath::Multiplier:
      return apply_multiplier(sigma, f);
    case ApplyPath::Separable:
      return apply_separable(sigma, f);
    default:
      return apply_general(sigma, f, general_limit);
  }
}

SampledField bessel_lift(const SampledField& f, double b) { return apply_multiplier(catalog::bessel(f.grid.dim, b), f); }

}  // namespace amod
