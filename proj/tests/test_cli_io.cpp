#include <doctest.h>

#include "wavechannel/cli_io.hpp"
#include "wavechannel/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace wavechannel;
namespace fs = std::filesystem;

namespace {

// Small, fast transit: 128 x 40 box at h = 0.5.
const char* kSmallConfig = R"({
  "grid": {"nx": 256, "ny": 80, "dx": 0.5, "dy": 0.5},
  "packet": {"xc": 30, "yc": 20, "sx": 6, "sy": 4, "k0": 1.5},
  "geometry": {"x_in": 60, "ell": 20, "a": 8, "y_center": 20}
})";

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("wavechannel_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string config_error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

std::string config_error_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("empty config gives the documented defaults") {
  const RunConfig c = parse_config("{}");
  CHECK(c == RunConfig{});
  CHECK(c.grid.nx == 1024);
  CHECK(c.geometry.width == 10.0);
  CHECK(c.packet.k0 == 1.0);
  CHECK(c.stepper.sample_stride == 16);
  const RunConfig r = resolve_defaults(c);
  CHECK(*r.stepper.dt == doctest::Approx(0.015625));
  CHECK_FALSE(r.model.v0.has_value());  // hard wall has no height

  RunConfig step = c;
  step.model.kind = "smooth";
  const RunConfig rs = resolve_defaults(step);
  CHECK(*rs.model.v0 == doctest::Approx(20.0));  // 40 E at p = 1
  CHECK(*rs.model.w == doctest::Approx(0.5));
}

TEST_CASE("config errors name the field") {
  CHECK(config_error_path(R"({"geometry": {"a": -1}})") == "geometry.a");
  CHECK(config_error_path(R"({"grid": {"nx": 4}})") == "grid.nx");
  CHECK(config_error_path(R"({"grid": {"nx": 100.5}})") == "grid.nx");
  CHECK(config_error_path(R"({"packet": {"k0": "fast"}})") == "packet.k0");
  CHECK(config_error_path(R"({"model": {"kind": "squishy"}})") == "model.kind");
  CHECK(config_error_path(R"({"stepper": {"sample_stride": 0}})") == "stepper.sample_stride");
  CHECK(config_error_path(R"({"output": {"formats": ["csv", "xml"]}})") == "output.formats");

  const std::string typo = config_error_message(R"({"geometry": {"lenght": 40}})");
  CHECK(typo.find("geometry.lenght") != std::string::npos);
  CHECK(typo.find("did you mean \"ell\"") != std::string::npos);
  CHECK(config_error_message(R"({"packet": {"sigma_x": 4}})").find("\"sx\"") != std::string::npos);
  CHECK(config_error_path(R"({"bogus": 1})") == "bogus");

  const std::string syntax = config_error_message("{\n  \"grid\": {\n    \"nx\": 12,,\n  }\n}");
  CHECK(syntax.find("line 3") != std::string::npos);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("config round-trips through its JSON echo") {
  RunConfig c = parse_config(kSmallConfig);
  c.model = {"smooth", 12.5, 1.0};
  c.stepper.dt = 0.03;
  c.stepper.n_steps = 320;
  c.stepper.cap = AbsorbingLayer{6.0, 0.4};
  c.experiment.kind = ExperimentKind::sweep;
  c.experiment.p = {1.2, 1.5, 1.8, 2.2, 2.6};
  c.experiment.w = {1.0, 2.0};
  c.output.formats = {"csv"};
  const std::string text = config_to_json(c);
  CHECK(parse_config(text) == c);
  CHECK(config_to_json(parse_config(text)) == text);
  CHECK(content_hash(text) == content_hash(config_to_json(parse_config(text))));
}

TEST_CASE("number and hash formatting") {
  for (double v : {0.1, 1.0 / 3.0, -2.53149, 1e-300, 6.02214076e23, 0.0}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  // FNV-1a 64 reference values
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("series CSV layout") {
  std::vector<ObservableRecord> rows(2);
  rows[0] = {0.0, 1.0, 30.0, 1.5, 0.0, -0.25, std::nullopt, 0.0};
  rows[1] = {1.0, 1.0, 31.5, 1.5, 0.0, std::nullopt, 0.125, 0.5};
  const std::string csv = series_csv(rows);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == kSeriesHeader);
  std::getline(is, line);
  CHECK(line == "0,1,30,1.5,0,-0.25,,0");
  std::getline(is, line);
  CHECK(line == "1,1,31.5,1.5,0,,0.125,0.5");
}

TEST_CASE("transit through the command line") {
  const fs::path dir = scratch_dir("transit");
  {
    std::ofstream(dir / "cfg.json") << kSmallConfig;
  }
  const std::string out = (dir / "out").string();
  REQUIRE(run_cli({"wavechannel", "transit", "--config", (dir / "cfg.json").string(), "--out", out, "--quiet"}) == 0);
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  const std::string series = slurp(dir / "out" / "series.csv");
  const std::string summary = slurp(dir / "out" / "summary.json");

  const RunConfig echo = parse_config(kSmallConfig);
  const long n = estimate_transit_steps(echo);
  long lines = 0;
  for (char ch : series) lines += ch == '\n';
  CHECK(lines == n / 16 + 2);  // header, t = 0 and one row per stride
  CHECK(series.rfind(std::string(kSeriesHeader) + "\n", 0) == 0);

  // same inputs, more threads: identical bytes
  REQUIRE(run_cli({"wavechannel", "transit", "--config", (dir / "cfg.json").string(), "--out", out, "--quiet",
                   "--threads", "3"}) == 0);
  CHECK(slurp(dir / "out" / "series.csv") == series);
  CHECK(slurp(dir / "out" / "summary.json") == summary);
  fs::remove_all(dir);
}

TEST_CASE("command-line failures map to exit codes") {
  const fs::path dir = scratch_dir("codes");
  {
    std::ofstream(dir / "bad.json") << R"({"geometry": {"a": -1}})";
    std::ofstream(dir / "syntax.json") << "{";
    std::ofstream(dir / "cutoff.json") << R"({"packet": {"k0": 0.2}, "stepper": {"n_steps": 16}})";
  }
  CHECK(run_cli({"wavechannel", "transit", "--config", (dir / "bad.json").string(), "--quiet"}) == 1);
  CHECK(run_cli({"wavechannel", "transit", "--config", (dir / "syntax.json").string(), "--quiet"}) == 1);
  CHECK(run_cli({"wavechannel", "transit", "--config", (dir / "missing.json").string(), "--quiet"}) == 1);
  CHECK(run_cli({"wavechannel", "transit", "--config", (dir / "cutoff.json").string(), "--quiet", "--out",
                 (dir / "o").string()}) == 1);
  CHECK(run_cli({"wavechannel", "transit"}) == 1);
  CHECK(run_cli({"wavechannel", "teleport"}) == 1);
  CHECK(run_cli({"wavechannel", "oracle", "--p", "1,2", "--a", "10", "--ell", "50"}) == 0);
  CHECK(run_cli({"wavechannel", "oracle", "--p", "-1", "--a", "10", "--ell", "50"}) == 1);
  fs::remove_all(dir);
}

TEST_CASE("unwritable output is refused before any work") {
  CHECK_THROWS_AS(preflight_output("/proc/wavechannel_cannot_write_here"), IoError);
  const fs::path dir = scratch_dir("preflight");
  CHECK_NOTHROW(preflight_output((dir / "nested" / "deeper").string()));
  CHECK(fs::is_directory(dir / "nested" / "deeper"));
  fs::remove_all(dir);
}
