#include "amod/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "amod/errors.hpp"
#include "amod/field_io.hpp"
#include "amod/report.hpp"

namespace amod {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

int parse_int(const std::string& text, const std::string& key) {
  const double v = parse_number(text, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

const std::vector<std::string> kKeys = {
    "grid.dim",          "grid.half_width",       "grid.samples",
    "space.alpha",       "space.s",               "space.p",
    "space.q",           "covering.A",            "covering.kmax",
    "covering.margin",   "covering.delta",        "covering.family",
    "covering.norm_p",   "symbol.name",           "symbol.b",
    "symbol.rho",        "symbol.c",              "symbol.m",
    "symbol.nu",         "symbol.path",           "symbol.general_limit",
    "experiment.name",   "experiment.b",          "experiment.headroom",
    "experiment.thetas", "experiment.p_grid",     "experiment.peetre",
    "experiment.orders", "experiment.sigma1",     "experiment.sigma2",
    "experiment.exploratory_alpha", "experiment.cutoff", "experiment.bound",
    "sweep.alpha",       "sweep.s",               "sweep.p",
    "sweep.q",           "sweep.b",               "sweep.rho",
    "output.directory",  "output.format",
};

const std::vector<std::string> kExperiments = {"all", "lifting", "boundedness", "maximal", "composition",
                                               "hypoelliptic"};

}  // namespace

GridSpec desk_grid(int dim) {
  switch (dim) {
    case 1: return GridSpec(1, 16.0, 256);
    case 2: return GridSpec(2, 12.0, 128);
    case 3: return GridSpec(3, 8.0, 32);
    default: throw ConfigError("grid.dim: must be 1, 2 or 3");
  }
}

double parse_number(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size() || std::isnan(v))
    throw ConfigError(key + ": not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number(item, key));
  return out;
}

std::vector<std::vector<double>> parse_vector_list(const std::string& text, const std::string& key) {
  std::vector<std::vector<double>> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ';')) {
    auto v = parse_list(item, key);
    if (v.empty()) throw ConfigError(key + ": empty exponent vector");
    out.push_back(std::move(v));
  }
  return out;
}

SymbolRef parse_symbol_ref(const std::string& text) {
  SymbolRef ref;
  const std::string t = trim(text);
  const auto open = t.find('(');
  ref.name = trim(t.substr(0, open));
  if (ref.name.empty()) throw ConfigError("symbol: empty name in '" + text + "'");
  if (open == std::string::npos) return ref;
  if (t.back() != ')') throw ConfigError("symbol: missing ')' in '" + text + "'");
  const std::string inner = t.substr(open + 1, t.size() - open - 2);
  for (const auto& item : split(inner, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("symbol: expected key=value in '" + text + "'");
    ref.params[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return ref;
}

SymbolSpec SymbolRef::build(const GridSpec& grid) const {
  auto p = params;
  auto it = p.find("nu");
  if (it == p.end() || it->second == "auto")
    p["nu"] = format_number(catalog::periodic_frequency(grid, 1.0));
  try {
    return catalog::by_name(name, grid.dim, p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("symbol " + text() + ": " + e.what());
  }
}

std::string SymbolRef::text() const {
  std::string out = name;
  if (params.empty()) return out;
  out += "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    out += (first ? "" : ",") + k + "=" + v;
    first = false;
  }
  return out + ")";
}

double SweepConfig::points() const {
  double n = 1.0;
  for (std::size_t len : {alpha.size(), s.size(), q.size(), b.size(), rho.size(), p.size()})
    if (len > 0) n *= static_cast<double>(len);
  return n;
}

GridSpec RunConfig::grid_or(int default_dim) const { return grid ? *grid : desk_grid(default_dim); }

SpaceParams RunConfig::space_for(const GridSpec& g) const {
  SpaceParams sp = space;
  if (!has("space.p")) {
    std::vector<double> p(g.dim, 2.0);
    if (g.dim == 2) p[1] = 4.0;
    sp.p = MixedExponents(p);
  }
  if (static_cast<int>(sp.p.size()) != g.dim)
    throw ConfigError("space.p: " + std::to_string(sp.p.size()) + " exponents for a " + std::to_string(g.dim) +
                      "-dimensional grid");
  return sp;
}

const std::vector<std::string>& RunConfig::known_keys() { return kKeys; }

RunConfig RunConfig::parse(std::istream& is, const std::string& source) {
  const auto kv = read_key_values(is, source);
  RunConfig cfg;
  cfg.space.s = 2.0;
  cfg.space.p = MixedExponents{2.0, 4.0};

  for (const auto& [key, value] : kv) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError(source + ": unknown key '" + key + "'");
    cfg.explicit_keys.insert(key);
  }
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (get("grid.dim") || get("grid.half_width") || get("grid.samples")) {
    const int dim = get("grid.dim") ? parse_int(*get("grid.dim"), "grid.dim") : 1;
    GridSpec g = desk_grid(dim);
    if (auto v = get("grid.half_width")) g.half_width = parse_number(*v, "grid.half_width");
    if (auto v = get("grid.samples")) g.samples = parse_int(*v, "grid.samples");
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
    cfg.grid = g;
  }

  if (auto v = get("space.alpha")) cfg.space.alpha = parse_number(*v, "space.alpha");
  if (auto v = get("space.s")) cfg.space.s = parse_number(*v, "space.s");
  if (auto v = get("space.q")) cfg.space.q = parse_number(*v, "space.q");
  try {
    if (auto v = get("space.p")) cfg.space.p = MixedExponents(parse_list(*v, "space.p"));
    SpaceParams probe = cfg.space;
    probe.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (auto v = get("covering.A")) cfg.covering.radius_factor = *v == "auto" ? 0.0 : parse_number(*v, "covering.A");
  if (auto v = get("covering.kmax")) cfg.covering.kmax = parse_int(*v, "covering.kmax");
  if (auto v = get("covering.margin")) cfg.covering.margin = parse_number(*v, "covering.margin");
  if (auto v = get("covering.delta")) cfg.covering.delta = parse_number(*v, "covering.delta");
  if (auto v = get("covering.family")) {
    if (*v != "alpha" && *v != "dyadic") throw ConfigError("covering.family: expected alpha or dyadic");
    cfg.dyadic = *v == "dyadic";
  }
  if (auto v = get("covering.norm_p")) cfg.norm_p = parse_vector_list(*v, "covering.norm_p");
  if (cfg.covering.radius_factor < 0.0) throw ConfigError("covering.A: must be positive or auto");
  if (!(cfg.covering.margin > 0.0 && cfg.covering.margin <= 1.0)) throw ConfigError("covering.margin: must lie in (0, 1]");
  if (!(cfg.covering.delta >= 0.0)) throw ConfigError("covering.delta: must be non-negative");
  cfg.covering.alpha = cfg.space.alpha;

  if (auto v = get("symbol.name")) cfg.symbol.name = *v;
  for (const char* k : {"b", "rho", "c", "m", "nu"})
    if (auto v = get(std::string("symbol.") + k)) cfg.symbol.params[k] = *v;
  if (auto v = get("symbol.path")) cfg.path = parse_apply_path(*v);
  if (auto v = get("symbol.general_limit")) cfg.general_limit = parse_number(*v, "symbol.general_limit");

  auto& ex = cfg.experiment;
  if (auto v = get("experiment.name")) {
    ex.name = *v;
    if (std::find(kExperiments.begin(), kExperiments.end(), ex.name) == kExperiments.end())
      throw ConfigError("experiment.name: unknown experiment '" + ex.name + "'");
  }
  if (auto v = get("experiment.b")) ex.b = parse_list(*v, "experiment.b");
  if (auto v = get("experiment.headroom")) ex.headroom = parse_number(*v, "experiment.headroom");
  if (auto v = get("experiment.thetas")) ex.thetas = parse_list(*v, "experiment.thetas");
  if (auto v = get("experiment.p_grid")) ex.p_grid = parse_vector_list(*v, "experiment.p_grid");
  if (auto v = get("experiment.peetre")) ex.peetre = parse_bool(*v, "experiment.peetre");
  if (auto v = get("experiment.orders")) {
    ex.orders.clear();
    for (const auto& item : split(*v, ',')) ex.orders.push_back(parse_int(item, "experiment.orders"));
    for (int o : ex.orders)
      if (o < 1 || o > 5) throw ConfigError("experiment.orders: each order must lie in 1..5");
  }
  if (auto v = get("experiment.sigma1")) ex.sigma1 = parse_symbol_ref(*v);
  if (auto v = get("experiment.sigma2")) ex.sigma2 = parse_symbol_ref(*v);
  if (auto v = get("experiment.exploratory_alpha")) ex.exploratory_alpha = parse_list(*v, "experiment.exploratory_alpha");
  if (auto v = get("experiment.cutoff")) ex.cutoff = parse_number(*v, "experiment.cutoff");
  if (auto v = get("experiment.bound")) ex.bound = parse_number(*v, "experiment.bound");
  for (double t : ex.thetas)
    if (!(t > 0.0)) throw ConfigError("experiment.thetas: every theta must be positive");
  if (!(ex.cutoff > 0.0)) throw ConfigError("experiment.cutoff: must be positive");

  auto& sw = cfg.sweep;
  if (auto v = get("sweep.alpha")) sw.alpha = parse_list(*v, "sweep.alpha");
  if (auto v = get("sweep.s")) sw.s = parse_list(*v, "sweep.s");
  if (auto v = get("sweep.q")) sw.q = parse_list(*v, "sweep.q");
  if (auto v = get("sweep.b")) sw.b = parse_list(*v, "sweep.b");
  if (auto v = get("sweep.rho")) sw.rho = parse_list(*v, "sweep.rho");
  if (auto v = get("sweep.p")) sw.p = parse_vector_list(*v, "sweep.p");
  for (double a : sw.alpha)
    if (!(a >= 0.0 && a < 1.0)) throw ConfigError("sweep.alpha: every alpha must lie in [0, 1)");
  for (double q : sw.q)
    if (!(q > 0.0)) throw ConfigError("sweep.q: every q must be positive");
  for (const auto& p : sw.p)
    for (double v : p)
      if (!(v > 0.0)) throw ConfigError("sweep.p: every exponent must be positive");
  for (double r : sw.rho)
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("sweep.rho: every rho must lie in (0, 1]");

  if (auto v = get("output.directory")) cfg.output.directory = *v;
  if (auto v = get("output.format")) {
    if (*v != "csv" && *v != "json") throw ConfigError("output.format: expected csv or json");
    cfg.output.format = *v;
  }
  return cfg;
}

RunConfig RunConfig::parse_string(const std::string& text) {
  std::istringstream is(text);
  return parse(is, "config");
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path);
  return parse(is, path);
}

}  // namespace amod
