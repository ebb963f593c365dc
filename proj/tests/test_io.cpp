#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "amod/config.hpp"
#include "amod/errors.hpp"
#include "amod/field_io.hpp"
#include "amod/report.hpp"

using namespace amod;
namespace fs = std::filesystem;

namespace {

SampledField sample_field(const GridSpec& g) {
  return sample_function(g, [](auto x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::polar(std::exp(-r2), 0.3 + x[0] / 3.0);
  });
}

fs::path scratch_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("amod_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("csv field round trip is exact") {
  const GridSpec g(2, 3.0, 8);
  const SampledField f = sample_field(g);
  std::stringstream ss;
  write_field_csv(ss, f);
  const std::string text = ss.str();
  CHECK(text.rfind("# dim = 2\n# half_width = 3\n# samples = 8\ni0,i1,re,im\n", 0) == 0);
  const SampledField back = read_field_csv(ss);
  CHECK(back.grid == g);
  CHECK(back.values == f.values);
}

TEST_CASE("binary field round trip with header sidecar") {
  const auto dir = scratch_dir("bin");
  const GridSpec g(1, 16.0, 64);
  const SampledField f = sample_field(g);
  write_field((dir / "f.bin").string(), f);
  CHECK(fs::exists(dir / "f.bin.hdr"));
  CHECK(fs::file_size(dir / "f.bin") == 64 * sizeof(cplx));
  const SampledField back = read_field((dir / "f.bin").string());
  CHECK(back.grid == g);
  CHECK(back.values == f.values);
  write_field((dir / "f.csv").string(), f);
  CHECK(read_field((dir / "f.csv").string()).values == f.values);
}

TEST_CASE("malformed fields are rejected") {
  std::istringstream missing("# dim = 1\n# samples = 4\ni0,re,im\n0,1,0\n");
  CHECK_THROWS_AS(read_field_csv(missing), ConfigError);
  std::istringstream short_rows("# dim = 1\n# half_width = 1\n# samples = 4\ni0,re,im\n0,1,0\n1,1,0\n");
  CHECK_THROWS_AS(read_field_csv(short_rows), ConfigError);
  std::istringstream bad_index("# dim = 1\n# half_width = 1\n# samples = 2\n0,1,0\n7,1,0\n");
  CHECK_THROWS_AS(read_field_csv(bad_index), ConfigError);
  std::istringstream dup("# dim = 1\n# half_width = 1\n# samples = 2\n0,1,0\n0,1,0\n");
  CHECK_THROWS_AS(read_field_csv(dup), ConfigError);
  CHECK_THROWS_AS(read_field("/nonexistent/field.csv"), ConfigError);
}

TEST_CASE("config parsing") {
  const RunConfig cfg = RunConfig::parse_string(R"(
# demo
grid.dim = 2
grid.samples = 64
space.alpha = 0.25
space.p = 2, 4
space.q = inf
covering.A = auto
symbol.name = oscillatory
symbol.rho = 0.5
experiment.name = lifting
experiment.b = -1, 1
experiment.p_grid = 2,4; 4,2
sweep.alpha = 0.25, 0.5, 0.75
sweep.b = 0, 1
output.format = json
)");
  REQUIRE(cfg.grid);
  CHECK(cfg.grid->dim == 2);
  CHECK(cfg.grid->half_width == 12.0);
  CHECK(cfg.grid->samples == 64);
  CHECK(cfg.space.alpha == 0.25);
  CHECK(cfg.covering.alpha == 0.25);
  CHECK(std::isinf(cfg.space.q));
  CHECK(cfg.covering.radius_factor == 0.0);
  CHECK(cfg.symbol.name == "oscillatory");
  CHECK(cfg.symbol.params.at("rho") == "0.5");
  CHECK(cfg.experiment.b == std::vector<double>{-1.0, 1.0});
  CHECK(cfg.experiment.p_grid.size() == 2);
  CHECK(cfg.sweep.points() == 6.0);
  CHECK(cfg.output.format == "json");
  CHECK(cfg.has("space.p"));
  CHECK_FALSE(cfg.has("space.s"));
}

TEST_CASE("config defaults") {
  const RunConfig cfg = RunConfig::parse_string("");
  CHECK_FALSE(cfg.grid);
  CHECK(cfg.grid_or(1) == GridSpec(1, 16.0, 256));
  CHECK(cfg.grid_or(2) == GridSpec(2, 12.0, 128));
  CHECK(cfg.space_for(GridSpec(2, 12.0, 128)).p.values() == std::vector<double>{2.0, 4.0});
  CHECK(cfg.space_for(GridSpec(1, 16.0, 256)).p.values() == std::vector<double>{2.0});
  CHECK(cfg.sweep.points() == 1.0);
  CHECK(cfg.experiment.name == "all");
}

TEST_CASE("config errors") {
  for (const char* text : {"space.q = 0", "bogus.key = 1", "grid.foo = 2", "space.alpha = 1.5", "grid.dim = 4",
                           "grid.samples = 101", "space.p = 2, x", "output.format = xml", "symbol.path = sideways",
                           "experiment.name = nope", "no equals sign", "space.q = 1\nspace.q = 2", "covering.A = -1",
                           "experiment.orders = 1.5", "sweep.rho = 0"})
    CHECK_THROWS_AS(RunConfig::parse_string(text), ConfigError);
  const RunConfig one_d = RunConfig::parse_string("space.p = 2, 4");
  CHECK_THROWS_AS(one_d.space_for(GridSpec(1, 16.0, 256)), ConfigError);
}

TEST_CASE("symbol references") {
  const SymbolRef ref = parse_symbol_ref("bessel(b=2, rho = 1)");
  CHECK(ref.name == "bessel");
  CHECK(ref.params.at("b") == "2");
  CHECK(ref.params.at("rho") == "1");
  CHECK(ref.text() == "bessel(b=2,rho=1)");
  CHECK(parse_symbol_ref("identity").params.empty());
  CHECK_THROWS_AS(parse_symbol_ref("bessel(b=2"), ConfigError);
  CHECK_THROWS_AS(parse_symbol_ref("bessel(b)"), ConfigError);
  CHECK_THROWS_AS(parse_symbol_ref("nope").build(GridSpec(1, 16.0, 64)), ConfigError);
  CHECK_THROWS_AS(parse_symbol_ref("oscillatory(rho=3)").build(GridSpec(1, 16.0, 64)), ConfigError);
  const SymbolSpec s = parse_symbol_ref("modulated(m=bessel,b=1)").build(GridSpec(1, 16.0, 64));
  CHECK(s.kind == SymbolKind::Separable);
  CHECK(s.name == "modulated_bessel");
}

TEST_CASE("report writers are deterministic and documented") {
  ExperimentReport rep;
  rep.experiment = "demo";
  rep.symbol = "identity";
  rep.alpha = 0.5;
  rep.s = 2.0;
  rep.p = {2.0, 4.0};
  rep.q = 2.0;
  ExperimentRow row;
  row.member = "m0";
  row.kind = "dilated";
  row.lambda = 1.0;
  row.input_norm = 3.0;
  row.output_norm = 1.0;
  row.ratio = 1.0 / 3.0;
  row.note = "a, b";
  rep.rows = {row};
  rep.summarize();

  std::ostringstream a, b;
  write_rows_csv(a, {rep});
  write_rows_csv(b, {rep});
  CHECK(a.str() == b.str());
  const std::string text = a.str();
  CHECK(text.rfind("point,experiment,symbol,alpha,s,p,q,b,rho,member,kind,lambda,omega,chirp,theta,order,input_norm,"
                   "output_norm,ratio,asserted,note\n",
                   0) == 0);
  CHECK(text.find("0,demo,identity,0.5,2,2;4,2,nan,nan,m0,dilated,1,nan,nan,nan,0,3,1,0.33333333333333331,1,\"a, b\"") !=
        std::string::npos);

  std::ostringstream js;
  write_rows_json(js, {rep});
  CHECK(js.str().find("\"ratio\": 0.3333333333333333") != std::string::npos);
  CHECK(js.str().find("\"b\": \"nan\"") != std::string::npos);

  std::ostringstream agg;
  write_aggregate_csv(agg, {rep, rep});
  int lines = 0;
  for (char c : agg.str()) lines += c == '\n';
  CHECK(lines == 3);

  const auto dir = scratch_dir("reports");
  write_experiment_files(dir.string(), "demo", {rep}, "csv");
  CHECK(slurp(dir / "demo_rows.csv") == text);
  CHECK(fs::exists(dir / "demo_aggregate.csv"));
  CHECK(slurp(dir / "demo_summary.txt").find("status: pass") != std::string::npos);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(-kInf) == "-inf");
  CHECK(format_number(kNaN) == "nan");
}
