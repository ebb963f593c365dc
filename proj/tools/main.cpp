#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "amod/config.hpp"
#include "amod/errors.hpp"
#include "amod/field_io.hpp"
#include "amod/report.hpp"

namespace fs = std::filesystem;
using namespace amod;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr double kMaxSweepPoints = 1e4;
constexpr double kPartitionTolerance = 1e-12;
constexpr double kUniformityFactor = 4.0;

struct Flags {
  std::string config;
  std::string input;
  std::string output;
  std::string format;
  int jobs = 1;
  std::string symbol;
  std::string path;
  std::string experiment;
};

struct Context {
  RunConfig cfg;
  Flags flags;

  std::string out_dir() const { return flags.output.empty() ? cfg.output.directory : flags.output; }
  std::string format() const { return flags.format.empty() ? cfg.output.format : flags.format; }
  SymbolRef symbol() const { return flags.symbol.empty() ? cfg.symbol : parse_symbol_ref(flags.symbol); }
  ApplyPath path() const { return flags.path.empty() ? cfg.path : parse_apply_path(flags.path); }
};

Context load_context(const Flags& flags) {
  Context ctx;
  ctx.flags = flags;
  ctx.cfg = flags.config.empty() ? RunConfig::parse_string("") : RunConfig::load(flags.config);
  if (!flags.format.empty() && flags.format != "csv" && flags.format != "json")
    throw ConfigError("--format: expected csv or json");
  if (flags.jobs < 1) throw ConfigError("--jobs: must be at least 1");
  if (!flags.experiment.empty())
    ctx.cfg.experiment.name = RunConfig::parse_string("experiment.name = " + flags.experiment).experiment.name;
  return ctx;
}

std::ofstream open_file(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

Covering covering_for(const Context& ctx, const GridSpec& grid, const SpaceParams& space) {
  if (ctx.cfg.dyadic) return dyadic_covering(grid, ctx.cfg.covering.margin);
  CoveringParams cp = ctx.cfg.covering;
  cp.alpha = space.alpha;
  return make_covering(cp, grid);
}

std::vector<MixedExponents> norm_exponents(const Context& ctx, int dim) {
  std::vector<MixedExponents> out;
  for (const auto& p : ctx.cfg.norm_p) {
    if (static_cast<int>(p.size()) != dim)
      throw ConfigError("covering.norm_p: " + std::to_string(p.size()) + " exponents for a " + std::to_string(dim) +
                        "-dimensional grid");
    out.emplace_back(p);
  }
  if (out.empty()) {
    std::vector<double> ones(dim, 1.0), mixed(dim, 2.0);
    mixed[0] = 0.5;
    out.emplace_back(ones);
    out.emplace_back(mixed);
  }
  return out;
}

void print_check(const std::string& name, double value, double bound, bool ok) {
  std::printf("%-34s value=%-12.6g bound=%-10.4g %s\n", name.c_str(), value, bound, ok ? "pass" : "FAIL");
}

int cmd_bapu_check(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid_or(1);
  const SpaceParams space = ctx.cfg.space_for(grid);
  const fs::path dir = ctx.out_dir();

  const Covering cov = covering_for(ctx, grid, space);
  {
    auto os = open_file(dir / "covering.csv");
    write_covering_csv(os, cov);
  }
  const AdmissibilityReport adm = admissibility_check(cov);
  std::printf("covering: %zu patches, A=%.6g, overlap n0=%d, eccentricity=%.6g\n", cov.patches.size(),
              cov.radius_factor, adm.overlap_max, adm.eccentricity);
  if (adm.coverage_deficit > 0.0) {
    std::string node = adm.uncovered_node ? "(" + join_numbers(*adm.uncovered_node) + ")" : "unknown";
    std::fprintf(stderr, "coverage failure: deficit %.6g, uncovered node xi = %s\n", adm.coverage_deficit,
                 node.c_str());
    return kExitFailure;
  }

  const BapuFamily bapu = build_bapu(cov);
  {
    auto os = open_file(dir / "windows.csv");
    write_windows_csv(os, bapu);
  }
  bool ok = true;
  const double dev = partition_sum(bapu);
  ok &= dev <= kPartitionTolerance;
  print_check("partition_deviation", dev, kPartitionTolerance, dev <= kPartitionTolerance);

  const UniformityReport deriv = derivative_bound_check(bapu);
  const RescaledReport rescaled = rescaled_window_check(bapu);
  const DecayReport decay = dilated_window_decay_check(bapu);
  {
    auto os = open_file(dir / "uniformity.csv");
    write_uniformity_csv(os, "derivative", deriv, true);
    write_uniformity_csv(os, "rescaled", rescaled.derivatives, false);
    write_uniformity_csv(os, "decay", decay.constants, false);
  }
  for (const auto& [name, rep] : {std::pair{"derivative_uniformity", &deriv},
                                  std::pair{"rescaled_uniformity", &rescaled.derivatives},
                                  std::pair{"decay_uniformity", &decay.constants}}) {
    ok &= rep->passed();
    print_check(name, rep->worst_factor, rep->tolerance, rep->passed());
  }

  const auto ps = norm_exponents(ctx, grid.dim);
  const auto norm_reports = bapu_norm_condition(bapu, ps);
  auto os = open_file(dir / "norm_condition.csv");
  os << "p,window,k,chi_norm,inverse_norm,value,tail_fraction,grid_samples\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::string p;
    for (std::size_t j = 0; j < ps[i].size(); ++j) p += (j ? ";" : "") + format_number(ps[i][j]);
    for (const auto& r : norm_reports[i].rows)
      os << p << "," << r.window << "," << r.label << "," << format_number(r.chi_norm) << ","
         << format_number(r.inverse_norm) << "," << format_number(r.value) << "," << format_number(r.tail_fraction)
         << "," << r.grid_samples << "\n";
    const bool pass = norm_reports[i].worst_factor <= kUniformityFactor;
    ok &= pass;
    print_check("norm_condition_p=(" + join_numbers(ps[i].values()) + ")", norm_reports[i].worst_factor,
                kUniformityFactor, pass);
  }
  std::printf("status: %s\n", ok ? "pass" : "FAIL");
  return ok ? kExitOk : kExitFailure;
}

SampledField read_input(const Context& ctx) {
  if (ctx.flags.input.empty()) throw ConfigError("--input is required");
  SampledField f = read_field(ctx.flags.input);
  if (ctx.cfg.grid && !(*ctx.cfg.grid == f.grid))
    throw ConfigError("input grid (dim " + std::to_string(f.grid.dim) + ", L " + format_number(f.grid.half_width) +
                      ", N " + std::to_string(f.grid.samples) + ") does not match the configured grid");
  return f;
}

int cmd_norm(const Context& ctx) {
  const SampledField f = read_input(ctx);
  const SpaceParams space = ctx.cfg.space_for(f.grid);
  const BapuFamily bapu = build_bapu(covering_for(ctx, f.grid, space));
  const BandProfile profile = band_profile(f, bapu, space);
  const double norm = profile.combine();
  std::printf("%s\n", format_number(norm).c_str());
  const fs::path dir = ctx.out_dir();
  const bool json = ctx.format() == "json";
  auto os = open_file(dir / (json ? "band_profile.json" : "band_profile.csv"));
  json ? write_band_profile_json(os, profile) : write_band_profile_csv(os, profile);
  return kExitOk;
}

int cmd_apply(const Context& ctx) {
  if (ctx.flags.output.empty()) throw ConfigError("--output is required");
  const SampledField f = read_input(ctx);
  const SymbolRef ref = ctx.symbol();
  const SymbolSpec sigma = ref.build(f.grid);
  ApplicationPlan plan;
  try {
    plan = plan_application(sigma, f.grid, ctx.path(), ctx.cfg.general_limit);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto t0 = std::chrono::steady_clock::now();
  const SampledField g = apply(sigma, f, plan.path, ctx.cfg.general_limit);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path out(ctx.flags.output);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_field(out.string(), g);
  auto meta = open_file(out.string() + ".meta");
  write_key_values(meta, {{"symbol", ref.text()},
                          {"kind", to_string(sigma.kind)},
                          {"path", to_string(plan.path)},
                          {"cost", format_number(plan.cost)},
                          {"input", ctx.flags.input}});
  std::printf("applied %s via %s path (cost %s) in %.3f s\n", ref.text().c_str(), to_string(plan.path).c_str(),
              format_number(plan.cost).c_str(), seconds);
  return kExitOk;
}

const ExperimentRow* extreme_row(const ExperimentReport& rep) {
  const ExperimentRow* worst = nullptr;
  for (const auto& r : rep.rows)
    if (r.asserted && (!worst || r.ratio > worst->ratio || std::isnan(r.ratio))) worst = &r;
  return worst;
}

bool report_status(const std::vector<ExperimentReport>& reports) {
  bool ok = true;
  for (const auto& rep : reports) {
    const std::string label = rep.symbol + (std::isfinite(rep.b) ? " b=" + short_number(rep.b) : "") + " alpha=" +
                              short_number(rep.alpha);
    std::printf("%-24s %-44s rows=%-4zu max_ratio=%-12.6g %s (%.2f s)\n", rep.experiment.c_str(), label.c_str(),
                rep.rows.size(), rep.max_ratio, rep.passed() ? "pass" : "FAIL", rep.seconds);
    if (rep.passed()) continue;
    ok = false;
    std::fprintf(stderr, "%s failed: %s\n", rep.experiment.c_str(), rep.first_failure().c_str());
    if (rep.rows.empty())
      for (const auto& g : rep.guards) std::fprintf(stderr, "  guard: %s\n", g.c_str());
    if (const ExperimentRow* r = extreme_row(rep))
      std::fprintf(stderr, "  extreme row: member=%s kind=%s theta=%s order=%d ratio=%s\n", r->member.c_str(),
                   r->kind.c_str(), format_number(r->theta).c_str(), r->order, format_number(r->ratio).c_str());
  }
  return ok;
}

SymbolRef default_boundedness_symbol() { return {"modulated", {{"m", "oscillatory"}, {"rho", "0.5"}}}; }

ExperimentOptions experiment_options(const Context& ctx) {
  ExperimentOptions opt;
  opt.jobs = ctx.flags.jobs;
  opt.covering = ctx.cfg.covering;
  opt.path = ctx.path();
  opt.general_limit = ctx.cfg.general_limit;
  if (ctx.cfg.experiment.bound) opt.bound = *ctx.cfg.experiment.bound;
  return opt;
}

TestFamily standard_family(const Context& ctx, const GridSpec& grid) {
  return TestFamily::standard(grid, ctx.cfg.covering.margin, ctx.cfg.experiment.headroom);
}

std::vector<ExperimentReport> run_lifting(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid_or(2);
  const SpaceParams space = ctx.cfg.space_for(grid);
  const TestFamily family = standard_family(ctx, grid);
  std::vector<ExperimentReport> out;
  for (double b : ctx.cfg.experiment.b) out.push_back(lifting_experiment(family, b, space, experiment_options(ctx)));
  return out;
}

SymbolRef boundedness_symbol(const Context& ctx) {
  if (!ctx.flags.symbol.empty() || ctx.cfg.has("symbol.name")) return ctx.symbol();
  return default_boundedness_symbol();
}

std::vector<ExperimentReport> run_boundedness(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid_or(2);
  const SpaceParams space = ctx.cfg.space_for(grid);
  const TestFamily family = standard_family(ctx, grid);
  const SymbolRef ref = boundedness_symbol(ctx);
  const SymbolSpec sigma = ref.build(grid);
  const ExperimentOptions opt = experiment_options(ctx);

  std::vector<ExperimentReport> out;
  out.push_back(boundedness_experiment(sigma, family, space, opt));
  ExperimentReport& main = out.front();
  if (sigma.kind == SymbolKind::Separable || sigma.kind == SymbolKind::Multiplier) {
    const GridSpec line(1, 16.0, 128);
    const double dev = path_equivalence_check(ref.build(line), line);
    main.checks.push_back({"path_equivalence_1d_n128", dev, 1e-10, dev <= 1e-10, true});
  }
  for (double a : ctx.cfg.experiment.exploratory_alpha) {
    if (a == space.alpha) continue;
    SpaceParams ex = space;
    ex.alpha = a;
    try {
      ExperimentReport rep = boundedness_experiment(sigma, family, ex, opt);
      rep.experiment = "boundedness_exploratory";
      for (auto& r : rep.rows) r.asserted = false;
      for (auto& c : rep.checks) c.asserted = false;
      rep.summarize();
      out.push_back(std::move(rep));
    } catch (const std::invalid_argument& e) {
      out.front().guards.push_back("exploratory alpha=" + short_number(a) + " not representable: " + e.what());
    }
  }
  return out;
}

std::vector<ExperimentReport> run_maximal(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid_or(2);
  MaximalOptions opt;
  opt.jobs = ctx.flags.jobs;
  opt.thetas = ctx.cfg.experiment.thetas;
  opt.peetre = ctx.cfg.experiment.peetre;
  if (!ctx.cfg.experiment.p_grid.empty()) {
    opt.ps.clear();
    for (const auto& p : ctx.cfg.experiment.p_grid) {
      if (static_cast<int>(p.size()) != grid.dim) throw ConfigError("experiment.p_grid: exponent count != grid dim");
      opt.ps.emplace_back(p);
    }
  }
  if (ctx.cfg.experiment.bound) opt.bound = *ctx.cfg.experiment.bound;
  return {maximal_experiment(TestFamily::maximal(grid), opt)};
}

std::vector<ExperimentReport> run_composition(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid_or(1);
  const SampledField f = composition_input(grid);
  const ExperimentOptions opt = experiment_options(ctx);
  const auto& e = ctx.cfg.experiment;
  std::vector<ExperimentReport> out;
  out.push_back(composition_experiment(e.sigma1.build(grid), e.sigma2.build(grid), f, e.orders, opt));
  if (!ctx.cfg.has("experiment.sigma2")) {
    const SymbolSpec flat = catalog::oscillatory(grid.dim, 0.5);
    out.push_back(composition_experiment(catalog::smooth_coefficient(grid.dim), flat, f, e.orders, opt));
  }
  return out;
}

std::vector<ExperimentReport> run_hypoelliptic(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid_or(2);
  if (grid.dim != 2) throw ConfigError("hypoelliptic: the heat demo runs on a 2-dimensional (time, space) grid");
  SpaceParams space = ctx.cfg.space_for(grid);
  if (!ctx.cfg.has("space.p")) space.p = MixedExponents{2.0, 2.0};
  HypoellipticOptions opt;
  opt.jobs = ctx.flags.jobs;
  opt.cutoff = ctx.cfg.experiment.cutoff;
  opt.covering = ctx.cfg.covering;
  if (ctx.cfg.experiment.bound) opt.smoothing = *ctx.cfg.experiment.bound;
  return {hypoelliptic_experiment(TestFamily::hypoelliptic(grid, ctx.cfg.covering.margin), space, opt)};
}

std::vector<ExperimentReport> run_experiment(const Context& ctx, const std::string& name) {
  if (name == "lifting") return run_lifting(ctx);
  if (name == "boundedness") return run_boundedness(ctx);
  if (name == "maximal") return run_maximal(ctx);
  if (name == "composition") return run_composition(ctx);
  if (name == "hypoelliptic") return run_hypoelliptic(ctx);
  throw ConfigError("unknown experiment '" + name + "'");
}

int cmd_verify(const Context& ctx) {
  const std::string name = ctx.cfg.experiment.name;
  std::vector<std::string> names;
  if (name == "all")
    names = {"lifting", "boundedness", "maximal", "composition", "hypoelliptic"};
  else
    names = {name};
  bool ok = true;
  for (const auto& n : names) {
    const auto reports = run_experiment(ctx, n);
    write_experiment_files(ctx.out_dir(), "verify_" + n, reports, ctx.format());
    ok &= report_status(reports);
  }
  std::printf("status: %s\n", ok ? "pass" : "FAIL");
  return ok ? kExitOk : kExitFailure;
}

template <class T>
std::vector<T> or_single(const std::vector<T>& v, T fallback) {
  return v.empty() ? std::vector<T>{fallback} : v;
}

int cmd_sweep(const Context& ctx) {
  const SweepConfig& sw = ctx.cfg.sweep;
  const double points = sw.points();
  if (points > kMaxSweepPoints)
    throw ResourceGuard("sweep: " + format_number(points) + " points exceed the limit of " +
                        format_number(kMaxSweepPoints));
  std::string name = ctx.cfg.experiment.name;
  if (name == "all") name = "lifting";
  if (name != "lifting" && name != "boundedness")
    throw ConfigError("sweep: experiment.name must be lifting or boundedness, got '" + name + "'");

  const GridSpec grid = ctx.cfg.grid_or(2);
  const SpaceParams base = ctx.cfg.space_for(grid);
  const TestFamily family = standard_family(ctx, grid);
  const SymbolRef ref = boundedness_symbol(ctx);
  ExperimentOptions opt = experiment_options(ctx);

  const auto alphas = or_single(sw.alpha, base.alpha);
  const auto ss = or_single(sw.s, base.s);
  const auto ps = or_single(sw.p, base.p.values());
  const auto qs = or_single(sw.q, base.q);
  const auto bs = or_single(sw.b, name == "lifting" ? ctx.cfg.experiment.b.front() : 0.0);
  const auto rhos = or_single(sw.rho, 0.5);

  std::vector<ExperimentReport> reports;
  for (double a : alphas)
    for (double s : ss)
      for (const auto& p : ps)
        for (double q : qs)
          for (double b : bs)
            for (double rho : rhos) {
              if (static_cast<int>(p.size()) != grid.dim) throw ConfigError("sweep.p: exponent count != grid dim");
              SpaceParams sp{a, s, MixedExponents(p), q};
              try {
                sp.validate();
              } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("sweep: ") + e.what());
              }
              SymbolRef point = ref;
              if (!sw.b.empty()) point.params["b"] = format_number(b);
              if (!sw.rho.empty()) point.params["rho"] = format_number(rho);
              try {
                reports.push_back(name == "lifting" ? lifting_experiment(family, b, sp, opt)
                                                    : boundedness_experiment(point.build(grid), family, sp, opt));
              } catch (const GuardViolation& e) {
                ExperimentReport rep;
                rep.experiment = name;
                rep.symbol = name == "lifting" ? "bessel" : point.text();
                rep.alpha = a;
                rep.s = s;
                rep.p = p;
                rep.q = q;
                rep.b = b;
                rep.rho = name == "lifting" ? kNaN : rho;
                rep.guards.push_back(e.what());
                rep.checks.push_back({"guard_violation", kNaN, kNaN, false, true});
                reports.push_back(std::move(rep));
              }
            }
  write_experiment_files(ctx.out_dir(), "sweep", reports, ctx.format());
  const bool ok = report_status(reports);
  std::printf("points: %zu status: %s\n", reports.size(), ok ? "pass" : "FAIL");
  return ok ? kExitOk : kExitFailure;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Configuration file (section.key = value)");
  sub->add_option("--output", f.output, "Output directory (apply: output field file)");
  sub->add_option("--format", f.format, "Report format: csv or json");
  sub->add_option("--jobs", f.jobs, "Parallel experiment jobs");
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  CLI::App app{"Mixed-norm alpha-modulation spaces: coverings, norms and pseudodifferential operators"};
  app.require_subcommand(1);
  Flags flags;

  auto* bapu = app.add_subcommand("bapu-check", "Build the covering and partition of unity and run its checks");
  add_common(bapu, flags);
  auto* norm = app.add_subcommand("norm", "Print the modulation norm of a field and write its band profile");
  add_common(norm, flags);
  norm->add_option("--input", flags.input, "Field file (.csv or .bin)")->required();
  auto* apply_cmd = app.add_subcommand("apply", "Apply a catalog symbol to a field");
  add_common(apply_cmd, flags);
  apply_cmd->add_option("--input", flags.input, "Field file (.csv or .bin)")->required();
  apply_cmd->add_option("--symbol", flags.symbol, "Symbol, e.g. bessel(b=2) or oscillatory(rho=0.5)");
  apply_cmd->add_option("--path", flags.path, "auto, multiplier, separable or general");
  auto* verify = app.add_subcommand("verify", "Run verification experiments");
  add_common(verify, flags);
  verify->add_option("experiment", flags.experiment,
                     "lifting, boundedness, maximal, composition, hypoelliptic or all");
  verify->add_option("--symbol", flags.symbol, "Symbol for the boundedness experiment");
  verify->add_option("--path", flags.path, "Application path");
  auto* sweep = app.add_subcommand("sweep", "Run an experiment over the sweep lists of the configuration");
  add_common(sweep, flags);
  sweep->add_option("--symbol", flags.symbol, "Symbol for boundedness sweeps");
  sweep->add_option("--path", flags.path, "Application path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const Context ctx = load_context(flags);
    if (bapu->parsed()) return cmd_bapu_check(ctx);
    if (norm->parsed()) return cmd_norm(ctx);
    if (apply_cmd->parsed()) return cmd_apply(ctx);
    if (verify->parsed()) return cmd_verify(ctx);
    return cmd_sweep(ctx);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ResourceGuard& e) {
    std::fprintf(stderr, "resource guard: %s\n", e.what());
    return kExitResource;
  } catch (const GuardViolation& e) {
    std::fprintf(stderr, "guard violation: %s\n", e.what());
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
}
