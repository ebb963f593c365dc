#include "amod/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "amod/errors.hpp"

namespace amod {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto t = trim(s);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(what + ": not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto t = trim(s);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(what + ": not an integer: '" + s + "'");
  return v;
}

GridSpec grid_from(const std::map<std::string, std::string>& kv, const std::string& source) {
  for (const char* key : {"dim", "half_width", "samples"})
    if (!kv.count(key)) throw ConfigError(source + ": missing grid key '" + key + "'");
  GridSpec g;
  g.dim = to_int(kv.at("dim"), source + ": dim");
  g.half_width = to_double(kv.at("half_width"), source + ": half_width");
  g.samples = to_int(kv.at("samples"), source + ": samples");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return g;
}

std::map<std::string, std::string> grid_keys(const GridSpec& g) {
  return {{"dim", std::to_string(g.dim)}, {"half_width", g17(g.half_width)}, {"samples", std::to_string(g.samples)}};
}

}  // namespace

std::map<std::string, std::string> read_key_values(std::istream& is, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

void write_key_values(std::ostream& os, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
}

void write_field_csv(std::ostream& os, const SampledField& f) {
  const GridSpec& g = f.grid;
  for (const auto& [k, v] : grid_keys(g)) os << "# " << k << " = " << v << "\n";
  for (int a = 0; a < g.dim; ++a) os << "i" << a << ",";
  os << "re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (int idx : g.unflatten(i)) os << idx << ",";
    os << g17(f.values[i].real()) << "," << g17(f.values[i].imag()) << "\n";
  }
}

SampledField read_field_csv(std::istream& is) {
  std::map<std::string, std::string> header;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] != '#') break;
    std::istringstream one(line.substr(1));
    header.merge(read_key_values(one, "field header"));
  }
  const GridSpec g = grid_from(header, "field header");
  SampledField f(g);
  std::vector<bool> seen(f.size(), false);
  std::vector<int> idx(g.dim);
  std::size_t rows = 0;
  bool first = true;
  // `line` already holds the first line after the header.
  auto handle = [&](const std::string& raw) {
    const std::string row = trim(raw);
    if (row.empty()) return;
    if (first) {
      first = false;
      if (row.rfind("i0", 0) == 0) return;
    }
    std::vector<std::string> cells;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != g.dim + 2)
      throw ConfigError("field csv: expected " + std::to_string(g.dim + 2) + " columns, got " +
                        std::to_string(cells.size()));
    for (int a = 0; a < g.dim; ++a) {
      idx[a] = to_int(cells[a], "field csv index");
      if (idx[a] < 0 || idx[a] >= g.samples) throw ConfigError("field csv: index out of range: " + cells[a]);
    }
    const std::size_t flat = g.flatten(idx);
    if (seen[flat]) throw ConfigError("field csv: duplicate row for node " + std::to_string(flat));
    seen[flat] = true;
    f.values[flat] = cplx(to_double(cells[g.dim], "field csv re"), to_double(cells[g.dim + 1], "field csv im"));
    ++rows;
  };
  handle(line);
  while (std::getline(is, line)) handle(line);
  if (rows != f.size())
    throw ConfigError("field csv: " + std::to_string(rows) + " rows for a grid of " + std::to_string(f.size()) +
                      " nodes");
  return f;
}

void write_field(const std::string& path, const SampledField& f) {
  if (ends_with(path, ".bin")) {
    static_assert(std::endian::native == std::endian::little, "binary fields assume a little-endian host");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    std::ofstream hdr(path + ".hdr");
    write_key_values(hdr, grid_keys(f.grid));
    if (!os || !hdr) throw std::runtime_error("write failed: " + path);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_field_csv(os, f);
  if (!os) throw std::runtime_error("write failed: " + path);
}

SampledField read_field(const std::string& path) {
  if (ends_with(path, ".bin")) {
    std::ifstream hdr(path + ".hdr");
    if (!hdr) throw ConfigError("missing grid header " + path + ".hdr");
    const GridSpec g = grid_from(read_key_values(hdr, path + ".hdr"), path + ".hdr");
    SampledField f(g);
    std::ifstream is(path, std::ios::binary | std::ios::ate);
    if (!is) throw ConfigError("cannot read " + path);
    const auto bytes = static_cast<std::size_t>(is.tellg());
    if (bytes != f.size() * sizeof(cplx))
      throw ConfigError(path + ": " + std::to_string(bytes) + " bytes, expected " +
                        std::to_string(f.size() * sizeof(cplx)));
    is.seekg(0);
    is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(bytes));
    return f;
  }
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  return read_field_csv(is);
}

}  // namespace amod
