#include "amod/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

namespace amod {

namespace {

using ojson = nlohmann::ordered_json;

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + format_number(v[i]);
  return out;
}

std::string join(const std::vector<int>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return out;
}

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(format_number(v)); }

ojson numbers(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

const std::vector<double>& row_p(const ExperimentReport& rep, const ExperimentRow& row) {
  return row.p.empty() ? rep.p : row.p;
}

std::size_t asserted_rows(const ExperimentReport& rep) {
  std::size_t n = 0;
  for (const auto& r : rep.rows) n += r.asserted;
  return n;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_rows_csv(std::ostream& os, const std::vector<ExperimentReport>& reports) {
  os << "point,experiment,symbol,alpha,s,p,q,b,rho,member,kind,lambda,omega,chirp,theta,order,"
        "input_norm,output_norm,ratio,asserted,note\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    for (const auto& r : rep.rows) {
      os << i << "," << rep.experiment << "," << csv_text(rep.symbol) << "," << format_number(rep.alpha) << ","
         << format_number(rep.s) << "," << join(row_p(rep, r), ';') << "," << format_number(rep.q) << ","
         << format_number(rep.b) << "," << format_number(rep.rho) << "," << csv_text(r.member) << "," << r.kind << ","
         << format_number(r.lambda) << "," << format_number(r.omega) << "," << format_number(r.chirp) << ","
         << format_number(r.theta) << "," << r.order << "," << format_number(r.input_norm) << ","
         << format_number(r.output_norm) << "," << format_number(r.ratio) << "," << (r.asserted ? 1 : 0) << ","
         << csv_text(r.note) << "\n";
    }
  }
}

void write_rows_json(std::ostream& os, const std::vector<ExperimentReport>& reports) {
  ojson out = ojson::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    for (const auto& r : rep.rows) {
      out.push_back({{"point", i},
                     {"experiment", rep.experiment},
                     {"symbol", rep.symbol},
                     {"alpha", number(rep.alpha)},
                     {"s", number(rep.s)},
                     {"p", numbers(row_p(rep, r))},
                     {"q", number(rep.q)},
                     {"b", number(rep.b)},
                     {"rho", number(rep.rho)},
                     {"member", r.member},
                     {"kind", r.kind},
                     {"lambda", number(r.lambda)},
                     {"omega", number(r.omega)},
                     {"chirp", number(r.chirp)},
                     {"theta", number(r.theta)},
                     {"order", r.order},
                     {"input_norm", number(r.input_norm)},
                     {"output_norm", number(r.output_norm)},
                     {"ratio", number(r.ratio)},
                     {"asserted", r.asserted},
                     {"note", r.note}});
    }
  }
  os << out.dump(2) << "\n";
}

void write_aggregate_csv(std::ostream& os, const std::vector<ExperimentReport>& reports) {
  os << "point,experiment,symbol,alpha,s,p,q,b,rho,rows,asserted_rows,min_ratio,median_ratio,max_ratio,spread,status\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    os << i << "," << rep.experiment << "," << csv_text(rep.symbol) << "," << format_number(rep.alpha) << ","
       << format_number(rep.s) << "," << join(rep.p, ';') << "," << format_number(rep.q) << ","
       << format_number(rep.b) << "," << format_number(rep.rho) << "," << rep.rows.size() << ","
       << asserted_rows(rep) << "," << format_number(rep.min_ratio) << "," << format_number(rep.median_ratio) << ","
       << format_number(rep.max_ratio) << "," << format_number(rep.spread()) << ","
       << (rep.passed() ? "pass" : "fail") << "\n";
  }
}

void write_aggregate_json(std::ostream& os, const std::vector<ExperimentReport>& reports) {
  ojson out = ojson::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    out.push_back({{"point", i},
                   {"experiment", rep.experiment},
                   {"symbol", rep.symbol},
                   {"alpha", number(rep.alpha)},
                   {"s", number(rep.s)},
                   {"p", numbers(rep.p)},
                   {"q", number(rep.q)},
                   {"b", number(rep.b)},
                   {"rho", number(rep.rho)},
                   {"rows", rep.rows.size()},
                   {"asserted_rows", asserted_rows(rep)},
                   {"min_ratio", number(rep.min_ratio)},
                   {"median_ratio", number(rep.median_ratio)},
                   {"max_ratio", number(rep.max_ratio)},
                   {"spread", number(rep.spread())},
                   {"status", rep.passed() ? "pass" : "fail"}});
  }
  os << out.dump(2) << "\n";
}

void write_band_profile_csv(std::ostream& os, const BandProfile& profile) {
  os << "k,a_k,band_norm,weighted_term\n";
  for (const auto& r : profile.rows)
    os << join(r.index, ';') << "," << format_number(r.scale) << "," << format_number(r.band_norm) << ","
       << format_number(r.weighted) << "\n";
}

void write_band_profile_json(std::ostream& os, const BandProfile& profile) {
  ojson out = ojson::array();
  for (const auto& r : profile.rows)
    out.push_back({{"k", r.index},
                   {"a_k", number(r.scale)},
                   {"band_norm", number(r.band_norm)},
                   {"weighted_term", number(r.weighted)}});
  os << out.dump(2) << "\n";
}

void write_covering_csv(std::ostream& os, const Covering& covering) {
  const int n = covering.grid.dim;
  os << "k";
  for (int a = 0; a < n; ++a) os << ",xi_" << a + 1;
  os << ",a_k,rho_k,shape,interior\n";
  for (const auto& p : covering.patches) {
    os << join(p.index, ';');
    for (int a = 0; a < n; ++a) os << "," << format_number(p.center[a]);
    const char* shape = p.shape == PatchShape::Cube ? "cube" : p.shape == PatchShape::Ball ? "ball" : "shell";
    os << "," << format_number(p.scale) << "," << format_number(p.radius) << "," << shape << ","
       << (p.interior ? 1 : 0) << "\n";
  }
}

void write_windows_csv(std::ostream& os, const BapuFamily& bapu) {
  os << "k,node,value\n";
  for (std::size_t w = 0; w < bapu.size(); ++w) {
    const auto& win = bapu.windows()[w];
    const std::string k = join(bapu.patch(w).index, ';');
    for (std::size_t i = 0; i < win.nodes.size(); ++i)
      os << k << "," << win.nodes[i] << "," << format_number(win.values[i]) << "\n";
  }
}

void write_uniformity_csv(std::ostream& os, const std::string& check, const UniformityReport& report, bool header) {
  if (header) os << "check,window,k,order,value\n";
  for (const auto& r : report.rows)
    os << check << "," << r.window << "," << csv_text(r.label) << "," << join(r.order, ';') << ","
       << format_number(r.value) << "\n";
}

void write_experiment_files(const std::string& directory, const std::string& stem,
                            const std::vector<ExperimentReport>& reports, const std::string& format) {
  namespace fs = std::filesystem;
  const fs::path dir(directory);
  fs::create_directories(dir);
  const bool json = format == "json";
  const std::string ext = json ? ".json" : ".csv";
  {
    auto os = open_out(dir / (stem + "_rows" + ext));
    json ? write_rows_json(os, reports) : write_rows_csv(os, reports);
  }
  {
    auto os = open_out(dir / (stem + "_aggregate" + ext));
    json ? write_aggregate_json(os, reports) : write_aggregate_csv(os, reports);
  }
  auto os = open_out(dir / (stem + "_summary.txt"));
  for (std::size_t i = 0; i < reports.size(); ++i) os << (i ? "\n" : "") << "[point " << i << "]\n" << reports[i].summary_text();
}

}  // namespace amod
