#include "amod/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

#include "amod/bapu.hpp"
#include "amod/calibration.hpp"
#include "amod/errors.hpp"

namespace amod {

namespace {

// 2 ln(1e10): Gaussian energy e^{-r^2 / (2 lambda)} falls below 1e-10 at r^2 = kTailExponent * lambda.
const double kTailExponent = 2.0 * std::log(1e10);

double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out + ")";
}

std::vector<double> unit_direction(int dim) {
  std::vector<double> d(dim);
  double w = 1.0;
  for (int a = 0; a < dim; ++a, w *= 0.5) d[a] = w;
  const double n = std::sqrt(sq_norm(d));
  for (auto& v : d) v /= n;
  return d;
}

FamilyMember gaussian(std::string label, double lambda, std::vector<double> x0) {
  FamilyMember m;
  m.label = std::move(label);
  m.kind = "dilated";
  m.lambda = lambda;
  m.center.assign(x0.size(), 0.0);
  m.generator = [lambda, x0](std::span<const double> x) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - x0[a]) * (x[a] - x0[a]);
    return cplx(std::exp(-lambda * r2));
  };
  return m;
}

FamilyMember modulated_gaussian(std::string label, std::vector<double> omega, double lambda = 1.0) {
  FamilyMember m;
  m.label = std::move(label);
  m.kind = "modulated";
  m.lambda = lambda;
  m.omega = std::sqrt(sq_norm(omega));
  m.center = omega;
  m.generator = [omega, lambda](std::span<const double> x) {
    double ph = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) ph += omega[a] * x[a];
    return std::polar(std::exp(-lambda * sq_norm(x)), ph);
  };
  return m;
}

FamilyMember chirp(std::string label, double c, int dim) {
  FamilyMember m;
  m.label = std::move(label);
  m.kind = "chirp";
  m.lambda = 1.0;
  m.chirp = c;
  m.center.assign(dim, 0.0);
  m.generator = [c](std::span<const double> x) {
    const double r2 = sq_norm(x);
    return std::polar(std::exp(-r2), c * r2);
  };
  return m;
}

ExperimentRow row_for(const FamilyMember& m) {
  ExperimentRow r;
  r.member = m.label;
  r.kind = m.kind;
  r.lambda = m.lambda;
  r.omega = m.omega;
  r.chirp = m.chirp;
  return r;
}

double safe_ratio(double num, double den) { return den == 0.0 ? (num == 0.0 ? 0.0 : kInf) : num / den; }

double bound_or(double override_value, double committed) {
  return std::isnan(override_value) ? committed : override_value;
}

// Runs fn on each member, tagging guard violations with the member label.
template <class Fn>
std::vector<ExperimentRow> map_members(const TestFamily& family, int jobs, Fn&& fn) {
  std::vector<ExperimentRow> rows(family.size());
  parallel_for(family.size(), jobs, [&](std::size_t i) {
    const FamilyMember& m = family.members[i];
    try {
      rows[i] = fn(m);
    } catch (const GuardViolation& e) {
      throw GuardViolation("member " + m.label + ": " + e.what());
    }
  });
  return rows;
}

void fill_space(ExperimentReport& rep, const SpaceParams& params) {
  rep.alpha = params.alpha;
  rep.s = params.s;
  rep.p = params.p.values();
  rep.q = params.q;
}

}  // namespace

std::string to_string(MemberRole role) {
  switch (role) {
    case MemberRole::Standard: return "standard";
    case MemberRole::Control: return "control";
    case MemberRole::DeadZone: return "dead_zone";
  }
  return "standard";
}

SampledField FamilyMember::sample(const GridSpec& grid) const {
  if (!generator) throw std::invalid_argument("family member " + label + " has no generator");
  return sample_function(grid, generator);
}

MemberGuards member_guards(const SampledField& f, double covered_radius) {
  MemberGuards out;
  const GridSpec& g = f.grid;
  const double sup = sup_norm(f.values);
  if (sup == 0.0) return out;
  double edge = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const auto idx = g.unflatten(i);
    if (std::find(idx.begin(), idx.end(), 0) != idx.end()) edge = std::max(edge, std::abs(f.values[i]));
  }
  out.boundary = edge / sup;
  out.spectral_tail = spectral_tail_fraction(forward_transform(f), covered_radius);
  return out;
}

void TestFamily::check_guards(bool spectral) const {
  for (const auto& m : members) {
    const MemberGuards gd = member_guards(m.sample(grid), covered_radius);
    if (gd.boundary > kBoundaryDecayTolerance)
      throw GuardViolation("member " + m.label + ": boundary value " + fmt(gd.boundary) + " of the sup exceeds " +
                           fmt(kBoundaryDecayTolerance));
    if (spectral && gd.spectral_tail > kSpectralTailTolerance)
      throw GuardViolation("member " + m.label + ": spectral energy fraction " + fmt(gd.spectral_tail) +
                           " outside the covered ball exceeds " + fmt(kSpectralTailTolerance));
  }
}

FamilyLimits family_limits(const GridSpec& grid, double margin, double headroom) {
  grid.validate();
  const double R = margin * grid.nyquist() - headroom;
  FamilyLimits lim;
  if (R <= 0.0) return lim;
  lim.lambda_max = std::min(64.0, R * R / kTailExponent);
  lim.omega_max = std::clamp(R - std::sqrt(kTailExponent), 0.0, 0.7 * grid.nyquist());
  lim.chirp_max = std::sqrt(std::max(0.0, lim.lambda_max - 1.0));
  return lim;
}

TestFamily TestFamily::standard(const GridSpec& grid, double margin, double headroom) {
  const FamilyLimits lim = family_limits(grid, margin, headroom);
  if (lim.lambda_max < 1.0)
    throw GuardViolation("test family: grid too coarse for a unit Gaussian (lambda_max " + fmt(lim.lambda_max) + ")");
  TestFamily fam;
  fam.grid = grid;
  fam.covered_radius = margin * grid.nyquist();
  const int n = grid.dim;

  for (int i = 0; i < 4; ++i) {
    const double lambda = std::pow(lim.lambda_max, i / 3.0);
    fam.members.push_back(gaussian("dilated_" + std::to_string(i), lambda, std::vector<double>(n, 0.5 * (i - 1.5))));
  }
  const auto dir = unit_direction(n);
  for (int j = 1; j <= 5; ++j) {
    std::vector<double> omega(n);
    for (int a = 0; a < n; ++a) omega[a] = lim.omega_max * j / 5.0 * dir[a];
    fam.members.push_back(modulated_gaussian("modulated_" + std::to_string(j - 1), omega));
  }
  int k = 0;
  for (double c : {0.5, 1.0, 2.0}) {
    const double used = std::min(c, lim.chirp_max);
    if (used != c) fam.notes.push_back("chirp c=" + fmt(c) + " clamped to " + fmt(used));
    fam.members.push_back(chirp("chirp_" + std::to_string(k++), used, n));
  }
  if (lim.lambda_max < 64.0) fam.notes.push_back("dilation clamped to lambda <= " + fmt(lim.lambda_max));
  if (lim.omega_max < 0.7 * grid.nyquist())
    fam.notes.push_back("modulation clamped to |omega| <= " + fmt(lim.omega_max));
  fam.check_guards(true);
  return fam;
}

TestFamily TestFamily::maximal(const GridSpec& grid) {
  grid.validate();
  TestFamily fam;
  fam.grid = grid;
  fam.covered_radius = 0.9 * grid.nyquist();
  const int n = grid.dim;
  for (int k = 0; k <= 6; ++k)
    fam.members.push_back(gaussian("dilated_" + std::to_string(k), std::ldexp(1.0, k), std::vector<double>(n, 0.0)));
  std::vector<double> x0(n);
  for (int a = 0; a < n; ++a) x0[a] = a % 2 == 0 ? 2.0 : -1.5;
  int k = 0;
  for (double lambda : {1.0, 2.0, 4.0, 16.0, 64.0})
    fam.members.push_back(gaussian("shifted_" + std::to_string(k++), lambda, x0));
  const auto dir = unit_direction(n);
  for (int j = 1; j <= 5; ++j) {
    std::vector<double> omega(n);
    for (int a = 0; a < n; ++a) omega[a] = 0.7 * grid.nyquist() * j / 5.0 * dir[a];
    fam.members.push_back(modulated_gaussian("modulated_" + std::to_string(j - 1), omega));
  }
  k = 0;
  for (double c : {0.5, 1.0, 2.0}) fam.members.push_back(chirp("chirp_" + std::to_string(k++), c, n));
  fam.check_guards(false);
  return fam;
}

TestFamily TestFamily::hypoelliptic(const GridSpec& grid, double margin) {
  if (grid.dim != 2) throw std::invalid_argument("hypoelliptic family: needs a (1+1)-dimensional grid");
  const FamilyLimits lim = family_limits(grid, margin, 1.0);
  TestFamily fam;
  fam.grid = grid;
  fam.covered_radius = margin * grid.nyquist();

  auto rough = [&](std::string label, std::vector<double> dir) {
    const double w = lim.omega_max / std::sqrt(sq_norm(dir));
    for (auto& v : dir) v *= w;
    FamilyMember m = modulated_gaussian(std::move(label), dir);
    m.kind = "rough";
    auto hi = m.generator;
    m.generator = [hi](std::span<const double> x) { return std::exp(-sq_norm(x)) + hi(x); };
    return m;
  };
  fam.members.push_back(rough("rough_diagonal", {1.0, 1.0}));
  fam.members.push_back(rough("rough_space", {0.0, 1.0}));
  fam.members.push_back(rough("rough_time", {1.0, 0.0}));

  FamilyMember control = modulated_gaussian("control", {lim.omega_max / std::sqrt(2.0), lim.omega_max / std::sqrt(2.0)}, 0.25);
  control.role = MemberRole::Control;
  fam.members.push_back(control);

  FamilyMember dead = gaussian("dead_zone", 0.2, {0.0, 0.0});
  dead.kind = "low_frequency";
  dead.role = MemberRole::DeadZone;
  fam.members.push_back(dead);

  fam.check_guards(true);
  return fam;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------

void ExperimentReport::summarize() {
  std::vector<double> r;
  for (const auto& row : rows)
    if (row.asserted) r.push_back(row.ratio);
  if (r.empty())
    for (const auto& row : rows) r.push_back(row.ratio);
  if (r.empty()) return;
  min_ratio = *std::min_element(r.begin(), r.end());
  max_ratio = *std::max_element(r.begin(), r.end());
  median_ratio = median(r);
}

bool ExperimentReport::passed() const { return first_failure().empty(); }

std::string ExperimentReport::first_failure() const {
  for (const auto& c : checks)
    if (c.asserted && !c.passed) return c.name + " = " + fmt(c.value) + " (bound " + fmt(c.bound) + ")";
  return {};
}

std::string ExperimentReport::summary_text() const {
  std::ostringstream os;
  std::size_t asserted = 0;
  for (const auto& r : rows) asserted += r.asserted;
  os << "experiment: " << experiment << "\n";
  if (!symbol.empty()) os << "symbol: " << symbol << "\n";
  os << "params: alpha=" << fmt(alpha) << " s=" << fmt(s) << " p=" << fmt_list(p) << " q=" << fmt(q)
     << " b=" << fmt(b) << " rho=" << fmt(rho) << "\n";
  os << "rows: " << rows.size() << " (asserted " << asserted << ")\n";
  os << "ratio: min=" << fmt(min_ratio) << " median=" << fmt(median_ratio) << " max=" << fmt(max_ratio)
     << " spread=" << fmt(spread()) << "\n";
  for (const auto& c : checks)
    os << "check " << c.name << ": value=" << fmt(c.value) << " bound=" << fmt(c.bound) << " "
       << (c.passed ? "pass" : "FAIL") << (c.asserted ? "" : " (exploratory)") << "\n";
  for (const auto& g : guards) os << "guard: " << g << "\n";
  os << "seconds: " << fmt(seconds) << "\n";
  os << "status: " << (passed() ? "pass" : "FAIL") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

ExperimentReport lifting_experiment(const TestFamily& family, double b, const SpaceParams& params,
                                    const ExperimentOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  params.validate();
  ExperimentReport rep;
  rep.experiment = "lifting";
  rep.symbol = "bessel";
  fill_space(rep, params);
  rep.b = b;
  rep.guards = family.notes;

  const BapuFamily bapu = make_bapu(params, family.grid, opt.covering);
  SpaceParams shifted = params;
  shifted.s = params.s - b;
  const bool assert_rows = std::isfinite(params.q);

  rep.rows = map_members(family, opt.jobs, [&](const FamilyMember& m) {
    const SampledField f = m.sample(family.grid);
    ExperimentRow r = row_for(m);
    r.input_norm = modulation_norm(f, bapu, params);
    r.output_norm = modulation_norm(bessel_lift(f, b), bapu, shifted);
    r.ratio = safe_ratio(r.output_norm, r.input_norm);
    r.asserted = assert_rows;
    return r;
  });
  rep.summarize();

  const double bound = bound_or(opt.bound, calibration::kLiftingSpread);
  rep.checks.push_back({"ratio_spread", rep.spread(), bound, rep.spread() <= bound, assert_rows});
  if (b == 0.0) {
    double dev = 0.0;
    for (const auto& r : rep.rows) dev = std::max(dev, std::abs(r.ratio - 1.0));
    rep.checks.push_back({"identity_ratios", dev, 1e-10, dev <= 1e-10, true});
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

ExperimentReport boundedness_experiment(const SymbolSpec& sigma, const TestFamily& family, const SpaceParams& params,
                                        const ExperimentOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  params.validate();
  if (sigma.dim != family.grid.dim) throw std::invalid_argument("boundedness: symbol and grid dimensions differ");
  ExperimentReport rep;
  rep.experiment = "boundedness";
  rep.symbol = sigma.name;
  fill_space(rep, params);
  rep.b = sigma.order;
  rep.rho = sigma.rho;
  rep.guards = family.notes;

  // Fails fast on the cost guard before any member runs.
  const ApplicationPlan plan = plan_application(sigma, family.grid, opt.path, opt.general_limit);
  const BapuFamily bapu = make_bapu(params, family.grid, opt.covering);
  SpaceParams shifted = params;
  shifted.s = params.s - sigma.order;
  const bool hypothesis = params.alpha <= sigma.rho;
  const bool assert_rows = hypothesis && std::isfinite(params.q);
  if (!hypothesis) rep.guards.push_back("alpha > rho: rows exploratory");

  rep.rows = map_members(family, opt.jobs, [&](const FamilyMember& m) {
    const SampledField f = m.sample(family.grid);
    ExperimentRow r = row_for(m);
    r.input_norm = modulation_norm(f, bapu, params);
    r.output_norm = modulation_norm(apply(sigma, f, plan.path, opt.general_limit), bapu, shifted);
    r.ratio = safe_ratio(r.output_norm, r.input_norm);
    r.asserted = assert_rows;
    return r;
  });
  rep.summarize();

  const double bound = bound_or(opt.bound, calibration::kBoundednessRatio);
  rep.checks.push_back({"max_ratio", rep.max_ratio, bound, rep.max_ratio <= bound, assert_rows});
  if (sigma.name == "identity") {
    double dev = 0.0;
    for (const auto& r : rep.rows) dev = std::max(dev, std::abs(r.ratio - 1.0));
    rep.checks.push_back({"identity_ratios", dev, 1e-10, dev <= 1e-10, true});
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

double path_equivalence_check(const SymbolSpec& sigma, const GridSpec& grid) {
  if (sigma.kind != SymbolKind::Separable && sigma.kind != SymbolKind::Multiplier)
    throw std::invalid_argument("path_equivalence_check: symbol has no separable form");
  std::vector<double> omega(grid.dim, 0.0);
  omega[0] = 3.0;
  const SampledField f = modulated_gaussian("probe", omega).sample(grid);
  const SampledField fast = apply_separable(sigma, f);
  const SampledField dense = apply_general(sigma, f);
  double diff = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) diff = std::max(diff, std::abs(fast.values[i] - dense.values[i]));
  const double scale = sup_norm(dense.values);
  return scale == 0.0 ? diff : diff / scale;
}

ExperimentReport maximal_experiment(const TestFamily& family, const MaximalOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec& g = family.grid;
  ExperimentReport rep;
  rep.experiment = "maximal";
  rep.guards = family.notes;
  for (const auto& p : opt.ps)
    if (static_cast<int>(p.size()) != g.dim) throw std::invalid_argument("maximal: exponent count differs from grid dimension");

  const std::size_t per_member = opt.thetas.size() * opt.ps.size();
  std::vector<ExperimentRow> rows(family.size() * per_member);
  std::vector<std::size_t> violations(family.size(), 0);

  parallel_for(family.size(), opt.jobs, [&](std::size_t i) {
    const FamilyMember& m = family.members[i];
    const SampledField f = m.sample(g);
    std::vector<double> mag(f.size());
    for (std::size_t j = 0; j < mag.size(); ++j) mag[j] = std::abs(f.values[j]);
    std::size_t out = i * per_member;
    for (double theta : opt.thetas) {
      const SampledField M = iterated_maximal(f, theta);
      std::vector<double> mm(M.size());
      for (std::size_t j = 0; j < mm.size(); ++j) {
        mm[j] = M.values[j].real();
        if (mm[j] < mag[j]) ++violations[i];
      }
      for (const auto& p : opt.ps) {
        ExperimentRow r = row_for(m);
        r.theta = theta;
        r.p = p.values();
        r.input_norm = mixed_norm(g, mag, p);
        r.output_norm = mixed_norm(g, mm, p);
        r.ratio = safe_ratio(r.output_norm, r.input_norm);
        r.asserted = theta < p.min();
        if (!r.asserted) r.note = "theta >= min p";
        rows[out++] = std::move(r);
      }
    }
  });
  rep.rows = std::move(rows);
  rep.summarize();

  std::size_t total_violations = 0;
  for (auto v : violations) total_violations += v;
  rep.checks.push_back({"pointwise_domination_violations", static_cast<double>(total_violations), 0.0,
                        total_violations == 0, true});
  double min_all = kInf;
  for (const auto& r : rep.rows) min_all = std::min(min_all, r.ratio);
  rep.checks.push_back({"min_ratio_all_rows", min_all, 1.0, min_all >= 1.0, true});
  const double bound = bound_or(opt.bound, calibration::kMaximalRatio);
  rep.checks.push_back({"max_asserted_ratio", rep.max_ratio, bound, rep.max_ratio <= bound, true});
  bool finite = true;
  for (const auto& r : rep.rows) finite = finite && std::isfinite(r.ratio);
  rep.checks.push_back({"finite_ratios", finite ? 1.0 : 0.0, 1.0, finite, true});

  // Plateau (lambda = 1) against spike (lambda = 64), reported per theta.
  auto find_ratio = [&](const std::string& label, double theta) {
    for (const auto& r : rep.rows)
      if (r.member == label && r.theta == theta) return r.ratio;
    return kNaN;
  };
  for (double theta : opt.thetas) {
    const double plateau = find_ratio("dilated_0", theta), spike = find_ratio("dilated_6", theta);
    if (std::isnan(plateau) || std::isnan(spike)) continue;
    rep.checks.push_back({"spike_over_plateau_theta" + fmt(theta), spike / plateau, 1.0, spike > plateau, false});
  }

  if (opt.peetre) {
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (family.members[i].kind == "modulated") targets.push_back(i);
    const std::size_t per = opt.peetre_thetas.size();
    std::vector<double> worst(targets.size() * per, kNaN);
    std::vector<std::string> notes(targets.size());
    parallel_for(targets.size(), opt.jobs, [&](std::size_t t) {
      const FamilyMember& m = family.members[targets[t]];
      const SampledField f = m.sample(g);
      for (double R : {1.0, 2.0, 4.0, 8.0}) {
        try {
          for (std::size_t k = 0; k < per; ++k)
            worst[t * per + k] = peetre_check(f, m.center, R, opt.peetre_thetas[k]).worst_ratio;
          notes[t] = "R=" + fmt(R);
          return;
        } catch (const GuardViolation&) {
        }
      }
      notes[t] = "spectrum not inside center + R[-2,2]^n for R <= 8";
    });
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto& label = family.members[targets[t]].label;
      for (std::size_t k = 0; k < per; ++k) {
        const double v = worst[t * per + k];
        if (std::isnan(v)) {
          rep.guards.push_back("peetre " + label + ": " + notes[t]);
          break;
        }
        rep.checks.push_back({"peetre_" + label + "_theta" + fmt(opt.peetre_thetas[k]) + "_" + notes[t], v, kInf,
                              std::isfinite(v), true});
      }
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

SampledField composition_input(const GridSpec& grid) {
  std::vector<double> omega(grid.dim, 0.0);
  omega[0] = 3.0;
  return modulated_gaussian("composition_input", omega).sample(grid);
}

ExperimentReport composition_experiment(const SymbolSpec& sigma1, const SymbolSpec& sigma2, const SampledField& f,
                                        const std::vector<int>& orders, const ExperimentOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  if (sigma1.dim != f.grid.dim || sigma2.dim != f.grid.dim)
    throw std::invalid_argument("composition: symbol and grid dimensions differ");
  ExperimentReport rep;
  rep.experiment = "composition";
  rep.symbol = sigma1.name + "#" + sigma2.name;
  rep.b = sigma1.order + sigma2.order;
  rep.rho = std::min(sigma1.rho, sigma2.rho);

  for (int N : orders) plan_application(composition_leading(sigma1, sigma2, N), f.grid, ApplyPath::General,
                                        opt.general_limit);
  const SampledField exact = apply(sigma1, apply(sigma2, f, ApplyPath::Auto, opt.general_limit), ApplyPath::Auto,
                                   opt.general_limit);
  const double scale = l2_norm(exact);

  rep.rows.resize(orders.size());
  parallel_for(orders.size(), opt.jobs, [&](std::size_t i) {
    const SymbolSpec comp = composition_leading(sigma1, sigma2, orders[i]);
    const SampledField approx = apply_general(comp, f, opt.general_limit);
    SampledField diff = exact;
    for (std::size_t j = 0; j < diff.size(); ++j) diff.values[j] -= approx.values[j];
    ExperimentRow r;
    r.member = "f";
    r.kind = "composition";
    r.order = orders[i];
    r.input_norm = scale;
    r.output_norm = l2_norm(diff);
    r.ratio = safe_ratio(r.output_norm, scale);
    rep.rows[i] = std::move(r);
  });
  rep.summarize();

  const bool x_independent = sigma2.kind == SymbolKind::Multiplier;
  if (x_independent) {
    double worst = 0.0;
    for (const auto& r : rep.rows) worst = std::max(worst, r.ratio);
    rep.checks.push_back({"relative_residual_multiplier", worst, 1e-10, worst <= 1e-10, true});
  } else {
    auto residual = [&](int N) {
      for (const auto& r : rep.rows)
        if (r.order == N) return r.output_norm;
      return kNaN;
    };
    const double r1 = residual(1), r2 = residual(2);
    if (!std::isnan(r1) && !std::isnan(r2))
      rep.checks.push_back({"r2_over_r1", safe_ratio(r2, r1), 1.0, r2 < r1 || (r1 == 0.0 && r2 == 0.0), true});
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

ExperimentReport hypoelliptic_experiment(const TestFamily& family, const SpaceParams& params,
                                         const HypoellipticOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  params.validate();
  if (family.grid.dim != 2) throw std::invalid_argument("hypoelliptic: needs a (1+1)-dimensional grid");
  ExperimentReport rep;
  rep.experiment = "hypoelliptic";
  rep.symbol = "heat";
  fill_space(rep, params);
  rep.b = 2.0;
  rep.rho = 1.0;
  rep.guards = family.notes;

  const SymbolSpec l = catalog::heat(2);
  const SymbolSpec a = catalog::heat_parametrix(2, opt.cutoff);
  const BapuFamily bapu = make_bapu(params, family.grid, opt.covering);

  rep.rows = map_members(family, opt.jobs, [&](const FamilyMember& m) {
    const SampledField f = m.sample(family.grid);
    const SampledField af = apply_multiplier(a, apply_multiplier(l, f));
    SampledField g = f;
    for (std::size_t j = 0; j < g.size(); ++j) g.values[j] -= af.values[j];
    ExperimentRow r = row_for(m);
    r.asserted = m.role == MemberRole::Standard;
    if (m.role == MemberRole::Control) {
      r.input_norm = l2_norm(f);
      r.output_norm = l2_norm(g);
      r.note = "l2 residual";
    } else {
      r.input_norm = modulation_norm(f, bapu, params);
      r.output_norm = modulation_norm(g, bapu, params);
      if (m.role == MemberRole::DeadZone) r.note = "cutoff dead zone";
    }
    r.ratio = safe_ratio(r.output_norm, r.input_norm);
    return r;
  });
  rep.summarize();

  const double bound = bound_or(opt.smoothing, calibration::kSmoothing);
  double worst = 0.0, control = 0.0;
  bool has_rough = false, has_control = false;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& r = rep.rows[i];
    if (family.members[i].role == MemberRole::Standard) {
      worst = std::max(worst, r.ratio);
      has_rough = true;
    } else if (family.members[i].role == MemberRole::Control) {
      control = std::max(control, r.ratio);
      has_control = true;
    }
  }
  if (has_rough) rep.checks.push_back({"smoothing_ratio", worst, bound, worst <= bound, std::isfinite(params.q)});
  if (has_control)
    rep.checks.push_back({"control_residual", control, opt.control_tolerance, control <= opt.control_tolerance, true});
  rep.seconds = seconds_since(t0);
  return rep;
}

}  // namespace amod
