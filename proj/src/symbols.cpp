#include "amod/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "amod/bump.hpp"
#include "amod/errors.hpp"
#include "finite_diff.hpp"

namespace amod {

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Multiplier:
      return "multiplier";
    case SymbolKind::Separable:
      return "separable";
    case SymbolKind::General:
      return "general";
  }
  return "general";
}

namespace {

bool all_zero(std::span<const int> v) {
  return std::all_of(v.begin(), v.end(), [](int a) { return a == 0; });
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

cplx SymbolSpec::partial(std::span<const int> alpha, std::span<const int> beta, std::span<const double> x,
                         std::span<const double> xi) const {
  const bool no_alpha = all_zero(alpha), no_beta = all_zero(beta);
  if (no_alpha && no_beta) return eval(x, xi);
  if (kind == SymbolKind::Multiplier && !no_beta) return 0.0;
  if (derivative) {
    if (auto v = derivative(alpha, beta, x, xi)) return *v;
  }
  const int n = dim;
  std::vector<double> point(2 * n), steps(2 * n);
  std::vector<int> order(2 * n);
  const double xi_step = 1e-3 * std::pow(bracket(xi), rho);
  for (int a = 0; a < n; ++a) {
    point[a] = xi[a];
    point[n + a] = x[a];
    order[a] = alpha[a];
    order[n + a] = beta[a];
    steps[a] = xi_step;
    steps[n + a] = 1e-3;
  }
  auto f = [&](std::span<const double> p) { return eval(p.subspan(n, n), p.first(n)); };
  return detail::nested_central(f, point, order, steps);
}

SymbolSpec SymbolSpec::make_multiplier(std::string name, int dim, double order, double rho, MultiplierFn m,
                                       DerivativeFn derivative) {
  SymbolSpec s;
  s.name = std::move(name);
  s.dim = dim;
  s.order = order;
  s.rho = rho;
  s.kind = SymbolKind::Multiplier;
  s.multiplier = m;
  s.eval = [m](std::span<const double>, std::span<const double> xi) { return m(xi); };
  s.derivative = std::move(derivative);
  return s;
}

SymbolSpec SymbolSpec::make_separable(std::string name, int dim, double order, double rho,
                                      std::vector<SeparableTerm> terms) {
  SymbolSpec s;
  s.name = std::move(name);
  s.dim = dim;
  s.order = order;
  s.rho = rho;
  s.kind = SymbolKind::Separable;
  s.terms = terms;
  s.eval = [terms](std::span<const double> x, std::span<const double> xi) {
    cplx acc = 0.0;
    for (const auto& t : terms) acc += t.a(x) * t.m(xi);
    return acc;
  };
  return s;
}

SymbolSpec SymbolSpec::make_general(std::string name, int dim, double order, double rho, SymbolFn fn,
                                    DerivativeFn derivative) {
  SymbolSpec s;
  s.name = std::move(name);
  s.dim = dim;
  s.order = order;
  s.rho = rho;
  s.kind = SymbolKind::General;
  s.eval = std::move(fn);
  s.derivative = std::move(derivative);
  return s;
}

std::vector<double> SymbolLattice::radii() const {
  const double hi = upper();
  if (!(xi_min > 0.0) || !(hi > xi_min)) throw std::invalid_argument("lattice: need 0 < xi_min < xi_max");
  std::vector<double> r;
  for (int i = 0;; ++i) {
    const double v = hi * std::pow(10.0, -static_cast<double>(i) / points_per_decade);
    if (v <= xi_min) break;
    r.push_back(v);
  }
  r.push_back(xi_min);
  std::reverse(r.begin(), r.end());
  return r;
}

std::vector<std::vector<double>> SymbolLattice::directions() const {
  std::vector<std::vector<double>> d;
  switch (grid.dim) {
    case 1:
      d = {{1.0}, {-1.0}};
      break;
    case 2:
      for (int k = 0; k < 16; ++k) d.push_back({std::cos(k * kPi / 8.0), std::sin(k * kPi / 8.0)});
      break;
    default:
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
          for (int c = -1; c <= 1; ++c) {
            if (!a && !b && !c) continue;
            const double nrm = std::sqrt(static_cast<double>(a * a + b * b + c * c));
            d.push_back({a / nrm, b / nrm, c / nrm});
          }
  }
  return d;
}

std::vector<std::vector<double>> SymbolLattice::xi_points() const {
  std::vector<std::vector<double>> out;
  const auto dirs = directions();
  for (double r : radii())
    for (const auto& d : dirs) {
      std::vector<double> p(d.size());
      for (std::size_t a = 0; a < d.size(); ++a) p[a] = r * d[a];
      out.push_back(std::move(p));
    }
  return out;
}

std::vector<std::vector<double>> SymbolLattice::x_points_list() const {
  if (x_points < 1 || grid.samples % x_points != 0)
    throw std::invalid_argument("lattice: x_points must divide the grid samples");
  const int stride = grid.samples / x_points;
  std::vector<std::vector<double>> out;
  std::vector<int> t(grid.dim, 0);
  while (true) {
    std::vector<double> x(grid.dim);
    for (int a = 0; a < grid.dim; ++a) x[a] = grid.node(t[a] * stride);
    out.push_back(std::move(x));
    int a = grid.dim - 1;
    while (a >= 0 && ++t[a] == x_points) {
      t[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

namespace {

std::vector<std::vector<double>> x_samples(const SymbolSpec& s, const SymbolLattice& lat) {
  if (s.kind == SymbolKind::Multiplier) return {std::vector<double>(lat.grid.dim, 0.0)};
  return lat.x_points_list();
}

void check_dims(const SymbolSpec& s, const SymbolLattice& lat) {
  if (s.dim != lat.grid.dim) throw std::invalid_argument("symbol: dimension differs from the lattice grid");
}

}  // namespace

SeminormEstimate seminorm_estimate(const SymbolSpec& sigma, int N, int M, const SymbolLattice& lattice, double rho) {
  check_dims(sigma, lattice);
  if (N < 0 || M < 0 || N + M > 4) throw std::invalid_argument("seminorm_estimate: need N, M >= 0 and N + M <= 4");
  const auto alphas = detail::multi_indices(sigma.dim, N);
  const auto betas = detail::multi_indices(sigma.dim, M);
  const auto xs = x_samples(sigma, lattice);

  SeminormEstimate est;
  est.N = N;
  est.M = M;
  est.value = -1.0;
  for (const auto& xi : lattice.xi_points()) {
    const double br = bracket(xi);
    for (const auto& x : xs)
      for (const auto& al : alphas)
        for (const auto& be : betas) {
          if (sigma.kind == SymbolKind::Multiplier && !all_zero(be)) continue;
          const cplx d = sigma.partial(al, be, x, xi);
          if (!finite(d)) throw std::domain_error("seminorm_estimate: non-finite derivative sample");
          const double v = std::pow(br, rho * detail::order_of(al) - sigma.order) * std::abs(d);
          if (v > est.value) {
            est.value = v;
            est.x_star = x;
            est.xi_star = xi;
            est.alpha_star = al;
            est.beta_star = be;
          }
        }
  }
  return est;
}

SeminormEstimate seminorm_estimate(const SymbolSpec& sigma, int N, int M, const SymbolLattice& lattice) {
  return seminorm_estimate(sigma, N, M, lattice, sigma.rho);
}

namespace {

double relative_change(double base, double ext) {
  if (base == 0.0) return ext == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(ext - base) / base;
}

SymbolLattice with_range(SymbolLattice lat, double factor) {
  lat.xi_max = 0.0;
  lat.range_factor = factor;
  return lat;
}

}  // namespace

MembershipReport membership_check(const SymbolSpec& sigma, int N, int M, const SymbolLattice& lattice,
                                  std::optional<double> rho, double tolerance) {
  const double r = rho.value_or(sigma.rho);
  MembershipReport rep;
  rep.base = seminorm_estimate(sigma, N, M, with_range(lattice, 10.0), r);
  rep.extended = seminorm_estimate(sigma, N, M, with_range(lattice, 100.0), r);
  rep.change = relative_change(rep.base.value, rep.extended.value);
  rep.member = rep.change < tolerance;
  return rep;
}

void HypoellipticSpec::validate() const {
  if (b0 > b) throw std::invalid_argument("hypoelliptic: need b0 <= b");
  if (!(c > 0.0)) throw std::invalid_argument("hypoelliptic: c must be positive");
  if (a < 0.0) throw std::invalid_argument("hypoelliptic: a must be non-negative");
}

bool HypoellipticReport::passed(double claimed_a) const {
  if (!(a_est > 0.0) || a_est < claimed_a) return false;
  return std::all_of(rows.begin(), rows.end(), [](const HypoellipticRow& r) { return r.stable; });
}

HypoellipticReport hypoelliptic_check(const SymbolSpec& sigma, const HypoellipticSpec& spec, int N, int M,
                                      const SymbolLattice& lattice, double tolerance) {
  spec.validate();
  check_dims(sigma, lattice);
  if (N < 0 || M < 0 || N + M > 4) throw std::invalid_argument("hypoelliptic_check: need N + M <= 4");
  const auto alphas = detail::multi_indices(sigma.dim, N);
  const auto betas = detail::multi_indices(sigma.dim, M);
  const auto xs = x_samples(sigma, lattice);

  HypoellipticReport rep;
  for (const auto& al : alphas)
    for (const auto& be : betas) {
      if (all_zero(al) && all_zero(be)) continue;
      rep.rows.push_back({al, be, 0.0, 0.0, false});
    }

  rep.a_est = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 2; ++pass) {
    SymbolLattice lat = with_range(lattice, pass == 0 ? 10.0 : 100.0);
    lat.xi_min = std::max(lat.xi_min, std::sqrt(std::max(0.0, spec.c * spec.c - 1.0)));
    for (const auto& xi : lat.xi_points()) {
      const double br = bracket(xi);
      for (const auto& x : xs) {
        const double mag = std::abs(sigma(x, xi));
        if (!(mag > 0.0)) throw GuardViolation("hypoelliptic_check: symbol vanishes at a lattice point with <xi> >= c");
        rep.a_est = std::min(rep.a_est, mag / std::pow(br, spec.b0));
        for (auto& row : rep.rows) {
          if (sigma.kind == SymbolKind::Multiplier && !all_zero(row.beta)) continue;
          const double v = std::abs(sigma.partial(row.alpha, row.beta, x, xi)) *
                           std::pow(br, sigma.rho * detail::order_of(row.alpha)) / mag;
          double& slot = pass == 0 ? row.base : row.extended;
          slot = std::max(slot, v);
        }
      }
    }
  }
  for (auto& row : rep.rows) row.stable = relative_change(row.base, row.extended) < tolerance;
  return rep;
}

SymbolSpec composition_leading(const SymbolSpec& s1, const SymbolSpec& s2, int N) {
  if (s1.dim != s2.dim) throw std::invalid_argument("composition_leading: dimension mismatch");
  if (N < 1) throw std::invalid_argument("composition_leading: N must be at least 1");
  if (N - 1 > 4) throw std::invalid_argument("composition_leading: derivatives above order 4 are unavailable");

  struct Term {
    std::vector<int> alpha;
    cplx coef;
  };
  std::vector<Term> terms;
  for (const auto& a : detail::multi_indices(s1.dim, N - 1)) {
    double fact = 1.0;
    for (int v : a) fact *= factorial(v);
    const int k = detail::order_of(a);
    // 1 / i^k = (-i)^k
    terms.push_back({a, std::pow(cplx(0.0, -1.0), k) / fact});
  }
  const std::vector<int> zero(s1.dim, 0);
  auto fn = [s1, s2, terms, zero](std::span<const double> x, std::span<const double> xi) {
    cplx acc = 0.0;
    for (const auto& t : terms) acc += t.coef * s1.partial(t.alpha, zero, x, xi) * s2.partial(zero, t.alpha, x, xi);
    return acc;
  };
  return SymbolSpec::make_general(s1.name + "#" + s2.name + "_N" + std::to_string(N), s1.dim, s1.order + s2.order,
                                  std::min(s1.rho, s2.rho), fn);
}

namespace catalog {

namespace {

double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return s;
}

}  // namespace

SymbolSpec identity(int dim) {
  return SymbolSpec::make_multiplier(
      "identity", dim, 0.0, 1.0, [](std::span<const double>) { return cplx(1.0); },
      [](std::span<const int>, std::span<const int>, std::span<const double>, std::span<const double>) {
        return std::optional<cplx>(0.0);
      });
}

SymbolSpec bessel(int dim, double b) {
  if (b == 0.0) {
    SymbolSpec s = identity(dim);
    s.name = "bessel";
    return s;
  }
  auto deriv = [b](std::span<const int> alpha, std::span<const int> beta, std::span<const double>,
                   std::span<const double> xi) -> std::optional<cplx> {
    if (!all_zero(beta)) return 0.0;
    const int k = detail::order_of(alpha);
    const double w = 1.0 + sq_norm(xi);
    if (k == 1) {
      const auto j = std::find(alpha.begin(), alpha.end(), 1) - alpha.begin();
      return b * xi[j] * std::pow(w, 0.5 * b - 1.0);
    }
    if (k == 2) {
      std::vector<std::size_t> ax;
      for (std::size_t a = 0; a < alpha.size(); ++a)
        for (int t = 0; t < alpha[a]; ++t) ax.push_back(a);
      const double diag = ax[0] == ax[1] ? b * std::pow(w, 0.5 * b - 1.0) : 0.0;
      return diag + b * (b - 2.0) * xi[ax[0]] * xi[ax[1]] * std::pow(w, 0.5 * b - 2.0);
    }
    return std::nullopt;
  };
  return SymbolSpec::make_multiplier(
      "bessel", dim, b, 1.0, [b](std::span<const double> xi) { return cplx(std::pow(1.0 + sq_norm(xi), 0.5 * b)); },
      deriv);
}

SymbolSpec heat(int dim) {
  if (dim < 2) throw std::invalid_argument("heat: needs a time axis plus at least one space axis");
  auto l = [](std::span<const double> z) { return cplx(sq_norm(z.subspan(1)), z[0]); };
  auto deriv = [](std::span<const int> alpha, std::span<const int> beta, std::span<const double>,
                  std::span<const double> z) -> std::optional<cplx> {
    if (!all_zero(beta)) return 0.0;
    const int k = detail::order_of(alpha);
    if (k == 1) {
      if (alpha[0] == 1) return cplx(0.0, 1.0);
      const auto j = std::find(alpha.begin(), alpha.end(), 1) - alpha.begin();
      return 2.0 * z[j];
    }
    if (k == 2) {
      for (std::size_t j = 1; j < alpha.size(); ++j)
        if (alpha[j] == 2) return 2.0;
    }
    return 0.0;
  };
  return SymbolSpec::make_multiplier("heat", dim, 2.0, 1.0, l, deriv);
}

SymbolSpec heat_parametrix(int dim, double c) {
  if (dim < 2) throw std::invalid_argument("heat_parametrix: needs a time axis plus at least one space axis");
  return SymbolSpec::make_multiplier("heat_parametrix", dim, -1.0, 1.0, [c](std::span<const double> z) {
    const double eta = radial_cutoff(z, c);
    if (eta == 0.0) return cplx(0.0);
    return eta / cplx(sq_norm(z.subspan(1)), z[0]);
  });
}

SymbolSpec oscillatory(int dim, double rho, double c) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("oscillatory: rho must lie in (0, 1]");
  return SymbolSpec::make_multiplier("oscillatory", dim, 0.0, rho, [rho, c](std::span<const double> xi) {
    const double eta = radial_cutoff(xi, c);
    if (eta == 0.0) return cplx(0.0);
    return std::polar(eta, std::pow(bracket(xi), 1.0 - rho));
  });
}

SymbolSpec modulated(const SymbolSpec& m, double nu) {
  if (m.kind != SymbolKind::Multiplier) throw std::invalid_argument("modulated: inner symbol must be a multiplier");
  std::vector<SeparableTerm> terms = {
      {[](std::span<const double>) { return cplx(0.5); }, m.multiplier},
      {[nu](std::span<const double> x) { return cplx(0.5 * std::sin(nu * x[0])); }, m.multiplier},
  };
  return SymbolSpec::make_separable("modulated_" + m.name, m.dim, m.order, m.rho, std::move(terms));
}

double periodic_frequency(const GridSpec& grid, double nu) {
  const double base = kPi / grid.half_width;
  return base * std::max(1.0, std::round(nu / base));
}

SymbolSpec smooth_coefficient(int dim) {
  std::vector<SeparableTerm> terms = {
      {[](std::span<const double> x) { return cplx(1.5 + 0.5 * std::sin(x[0])); },
       [](std::span<const double>) { return cplx(1.0); }},
  };
  SymbolSpec s = SymbolSpec::make_separable("smooth_coefficient", dim, 0.0, 1.0, std::move(terms));
  s.derivative = [](std::span<const int> alpha, std::span<const int> beta, std::span<const double> x,
                    std::span<const double>) -> std::optional<cplx> {
    if (!all_zero(alpha)) return 0.0;
    for (std::size_t a = 1; a < beta.size(); ++a)
      if (beta[a] != 0) return 0.0;
    // d^k sin = sin(x + k pi/2)
    return 0.5 * std::sin(x[0] + 0.5 * kPi * beta[0]);
  };
  return s;
}

SymbolSpec plane_wave(std::vector<double> xi0) {
  const int dim = static_cast<int>(xi0.size());
  return SymbolSpec::make_general("plane_wave", dim, 0.0, 1.0,
                                  [xi0](std::span<const double> x, std::span<const double>) {
                                    double ph = 0.0;
                                    for (std::size_t a = 0; a < xi0.size(); ++a) ph += x[a] * xi0[a];
                                    return std::polar(1.0, ph);
                                  });
}

namespace {

double param(const std::map<std::string, std::string>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size()) throw ConfigError("symbol." + key + ": not a number: " + it->second);
  return v;
}

}  // namespace

std::vector<std::string> names() {
  return {"identity", "bessel", "heat", "heat_parametrix", "oscillatory", "modulated", "smooth_coefficient"};
}

SymbolSpec by_name(const std::string& name, int dim, const std::map<std::string, std::string>& params) {
  if (name == "identity") return identity(dim);
  if (name == "bessel") return bessel(dim, param(params, "b", 0.0));
  if (name == "heat") return heat(dim);
  if (name == "heat_parametrix") return heat_parametrix(dim, param(params, "c", 1.0));
  if (name == "oscillatory") return oscillatory(dim, param(params, "rho", 0.5), param(params, "c", 1.0));
  if (name == "smooth_coefficient") return smooth_coefficient(dim);
  if (name == "modulated") {
    auto it = params.find("m");
    const std::string inner = it == params.end() ? "oscillatory" : it->second;
    if (inner == "modulated" || inner == "smooth_coefficient")
      throw ConfigError("symbol.m: modulated needs a multiplier, got " + inner);
    return modulated(by_name(inner, dim, params), param(params, "nu", 1.0));
  }
  std::string known;
  for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("symbol.name: unknown symbol '" + name + "' (known: " + known + ")");
}

}  // namespace catalog

}  // namespace amod
