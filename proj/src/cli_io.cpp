#include "wavechannel/cli_io.hpp"

#include "wavechannel/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace wavechannel {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Optimal string alignment distance (adjacent transpositions cost 1).
std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
    }
  return d[a.size()][b.size()];
}

// Longer names people reach for, mapped to the config key.
const std::map<std::string, std::string>& key_aliases() {
  static const std::map<std::string, std::string> aliases{
      {"length", "ell"},      {"width", "a"},         {"sigma_x", "sx"}, {"sigma_y", "sy"},
      {"momentum", "k0"},     {"stride", "sample_stride"}, {"steps", "n_steps"}, {"edge_width", "w"},
      {"height", "v0"},       {"ycenter", "y_center"}};
  return aliases;
}

std::string suggest(const std::string& key, const std::vector<std::string>& allowed) {
  std::string best;
  std::size_t best_d = std::string::npos;
  auto consider = [&](const std::string& candidate, const std::string& target) {
    const std::size_t d = edit_distance(key, candidate);
    if (d < best_d) {
      best_d = d;
      best = target;
    }
  };
  for (const auto& k : allowed) consider(k, k);
  for (const auto& [alias, target] : key_aliases())
    if (std::find(allowed.begin(), allowed.end(), target) != allowed.end()) consider(alias, target);
  const std::size_t limit = std::max<std::size_t>(2, key.size() / 3);
  return best_d <= limit ? best : std::string{};
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// A JSON object being read, with its dotted path and the keys it may hold.
class Section {
 public:
  Section(const json& node, std::string path, std::vector<std::string> allowed)
      : node_(node), path_(std::move(path)), allowed_(std::move(allowed)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
    for (const auto& item : node_.items()) {
      if (std::find(allowed_.begin(), allowed_.end(), item.key()) != allowed_.end()) continue;
      std::string msg = "unknown key \"" + item.key() + "\"";
      const std::string hint = suggest(item.key(), allowed_);
      if (!hint.empty()) msg += "; did you mean \"" + hint + "\"?";
      throw ConfigError(join(path_, item.key()), msg);
    }
  }

  bool has(const std::string& key) const { return node_.contains(key) && !node_.at(key).is_null(); }
  const json& at(const std::string& key) const { return node_.at(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  void number(const std::string& key, double& out) const {
    if (!has(key)) return;
    if (!at(key).is_number()) throw ConfigError(path(key), "expected a number");
    out = at(key).get<double>();
  }
  void number(const std::string& key, std::optional<double>& out) const {
    if (!has(key)) return;
    double v = 0.0;
    number(key, v);
    out = v;
  }
  template <typename Int>
  void integer(const std::string& key, Int& out) const {
    if (!has(key)) return;
    if (!at(key).is_number_integer()) throw ConfigError(path(key), "expected an integer");
    out = at(key).get<Int>();
  }
  void integer(const std::string& key, std::optional<long>& out) const {
    if (!has(key)) return;
    long v = 0;
    integer(key, v);
    out = v;
  }
  void text(const std::string& key, std::string& out) const {
    if (!has(key)) return;
    if (!at(key).is_string()) throw ConfigError(path(key), "expected a string");
    out = at(key).get<std::string>();
  }
  void numbers(const std::string& key, std::vector<double>& out) const {
    if (!has(key)) return;
    if (!at(key).is_array()) throw ConfigError(path(key), "expected an array of numbers");
    out.clear();
    for (const auto& v : at(key)) {
      if (!v.is_number()) throw ConfigError(path(key), "expected an array of numbers");
      out.push_back(v.get<double>());
    }
  }
  void texts(const std::string& key, std::vector<std::string>& out) const {
    if (!has(key)) return;
    if (!at(key).is_array()) throw ConfigError(path(key), "expected an array of strings");
    out.clear();
    for (const auto& v : at(key)) {
      if (!v.is_string()) throw ConfigError(path(key), "expected an array of strings");
      out.push_back(v.get<std::string>());
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string> allowed_;
};

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col > 1 ? col - 1 : 1};
}

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json config_node(const RunConfig& c) {
  ordered_json j;
  j["grid"] = {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"dx", c.grid.dx},
               {"dy", c.grid.dy}, {"x0", c.grid.x0}, {"y0", c.grid.y0}};
  j["packet"] = {{"xc", c.packet.xc},
                 {"yc", c.packet.yc},
                 {"sx", c.packet.sigma_x},
                 {"sy", c.packet.sigma_y},
                 {"k0", c.packet.k0}};
  j["geometry"] = {{"x_in", c.geometry.x_in},
                   {"ell", c.geometry.length},
                   {"a", c.geometry.width},
                   {"y_center", c.geometry.y_center}};
  j["model"] = {{"kind", c.model.kind}, {"v0", opt(c.model.v0)}, {"w", opt(c.model.w)}};
  ordered_json stepper;
  stepper["dt"] = opt(c.stepper.dt);
  stepper["n_steps"] = c.stepper.n_steps ? ordered_json(*c.stepper.n_steps) : ordered_json(nullptr);
  stepper["sample_stride"] = c.stepper.sample_stride;
  stepper["cap"] = c.stepper.cap ? ordered_json{{"width", c.stepper.cap->width}, {"strength", c.stepper.cap->strength}}
                                 : ordered_json(nullptr);
  j["stepper"] = stepper;
  j["experiment"] = {{"kind", to_string(c.experiment.kind)}, {"p", c.experiment.p},
                     {"ell", c.experiment.ell},                 {"a", c.experiment.a},
                     {"w", c.experiment.w},                     {"v0_scale", c.experiment.v0_scale}};
  j["output"] = {{"dir", c.output.dir}, {"formats", c.output.formats}};
  return j;
}

ordered_json run_node(const RunResult& r) {
  ordered_json j;
  j["model"] = r.config.model.kind;
  j["dphi_sim"] = opt(r.dphi_sim);
  j["dphi_exact_mode"] = opt(r.dphi_exact_mode);
  j["dphi_approx"] = opt(r.dphi_approx);
  j["dphi_oracle_1d"] = opt(r.dphi_oracle_1d);
  j["phase_overlap"] = opt(r.phase_overlap);
  j["p_plateau"] = opt(r.p_plateau);
  j["t_plateau"] = opt(r.t_plateau);
  j["p_channel_region"] = opt(r.p_channel_region);
  j["ground_mode_fraction"] = opt(r.ground_mode_fraction);
  j["p_exit"] = opt(r.p_exit);
  j["ehrenfest_residual"] = r.ehrenfest_residual;
  j["momentum_budget"] = {{"entry_impulse", r.momentum_budget.entry_impulse},
                          {"exit_impulse", r.momentum_budget.exit_impulse},
                          {"net", r.momentum_budget.net}};
  j["entry_impulse_early"] = opt(r.entry_impulse_early);
  j["entry_impulse_late"] = opt(r.entry_impulse_late);
  j["momentum_change"] = r.momentum_change;
  j["transmitted_final"] = r.transmitted_final;
  j["max_norm_drift"] = r.max_norm_drift;
  j["peak_force"] = r.peak_force;
  j["coarse_time_step"] = r.coarse_time_step;
  j["samples"] = r.series.size();
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << content;
  os.close();
  if (!os) throw IoError("failed writing " + path.string());
}

bool wants(const OutputSpec& out, const std::string& format) {
  return std::find(out.formats.begin(), out.formats.end(), format) != out.formats.end();
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::ostringstream os;
    os << "syntax error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError("", os.str());
  }
  RunConfig c;
  const Section top(root, "", {"grid", "packet", "geometry", "model", "stepper", "experiment", "output"});
  if (top.has("grid")) {
    const Section s(top.at("grid"), "grid", {"nx", "ny", "dx", "dy", "x0", "y0"});
    s.integer("nx", c.grid.nx);
    s.integer("ny", c.grid.ny);
    s.number("dx", c.grid.dx);
    s.number("dy", c.grid.dy);
    s.number("x0", c.grid.x0);
    s.number("y0", c.grid.y0);
  }
  if (top.has("packet")) {
    const Section s(top.at("packet"), "packet", {"xc", "yc", "sx", "sy", "k0"});
    s.number("xc", c.packet.xc);
    s.number("yc", c.packet.yc);
    s.number("sx", c.packet.sigma_x);
    s.number("sy", c.packet.sigma_y);
    s.number("k0", c.packet.k0);
  }
  if (top.has("geometry")) {
    const Section s(top.at("geometry"), "geometry", {"x_in", "ell", "a", "y_center"});
    s.number("x_in", c.geometry.x_in);
    s.number("ell", c.geometry.length);
    s.number("a", c.geometry.width);
    s.number("y_center", c.geometry.y_center);
  }
  if (top.has("model")) {
    const Section s(top.at("model"), "model", {"kind", "v0", "w"});
    s.text("kind", c.model.kind);
    s.number("v0", c.model.v0);
    s.number("w", c.model.w);
  }
  if (top.has("stepper")) {
    const Section s(top.at("stepper"), "stepper", {"dt", "n_steps", "sample_stride", "cap"});
    s.number("dt", c.stepper.dt);
    s.integer("n_steps", c.stepper.n_steps);
    s.integer("sample_stride", c.stepper.sample_stride);
    if (s.has("cap")) {
      const Section cap(s.at("cap"), "stepper.cap", {"width", "strength"});
      AbsorbingLayer layer;
      cap.number("width", layer.width);
      cap.number("strength", layer.strength);
      c.stepper.cap = layer;
    }
  }
  if (top.has("experiment")) {
    const Section s(top.at("experiment"), "experiment", {"kind", "p", "ell", "a", "w", "v0_scale"});
    if (s.has("kind")) {
      std::string name;
      s.text("kind", name);
      const auto kind = parse_experiment_kind(name);
      if (!kind) throw ConfigError("experiment.kind", "must be one of transit, reflect, sweep, model-compare, oracle");
      c.experiment.kind = *kind;
    }
    s.numbers("p", c.experiment.p);
    s.numbers("ell", c.experiment.ell);
    s.numbers("a", c.experiment.a);
    s.numbers("w", c.experiment.w);
    s.number("v0_scale", c.experiment.v0_scale);
  }
  if (top.has("output")) {
    const Section s(top.at("output"), "output", {"dir", "formats"});
    s.text("dir", c.output.dir);
    s.texts("formats", c.output.formats);
  }
  validate(c);
  return c;
}

std::string config_to_json(const RunConfig& cfg) { return dump(config_node(cfg)); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string series_csv(const std::vector<ObservableRecord>& rows) {
  std::string out = std::string(kSeriesHeader) + "\n";
  for (const auto& r : rows) {
    out += format_double(r.t) + ',' + format_double(r.norm2) + ',' + format_double(r.mean_x) + ',' +
           format_double(r.mean_p) + ',' + format_double(r.dpdt) + ',' + cell(r.f_boundary) + ',' +
           cell(r.f_potential) + ',' + format_double(r.transmitted) + '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out =
      "axis,value,energy,dphi_sim,dphi_exact_mode,dphi_approx,dphi_oracle_1d,overlap,transmitted_final,error\n";
  for (const auto& p : sweep.points) {
    std::string err = p.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out += p.axis + ',' + format_double(p.value) + ',' + format_double(p.energy) + ',' + cell(p.dphi_sim) + ',' +
           format_double(p.dphi_exact_mode) + ',' + format_double(p.dphi_approx) + ',' +
           format_double(p.dphi_oracle_1d) + ',' + cell(p.overlap) + ',' + cell(p.transmitted_final) + ',' + err +
           '\n';
  }
  return out;
}

std::string models_csv(const ModelComparison& cmp) {
  std::string out =
      "label,kind,v0,w,dphi_sim,p_plateau,entry_impulse,exit_impulse,entry_impulse_early,entry_impulse_late,"
      "ehrenfest_residual,peak_force,transmitted_final\n";
  for (const auto& row : cmp.rows) {
    const RunResult& r = row.result;
    out += row.label + ',' + row.kind + ',' + cell(row.v0) + ',' + cell(row.w) + ',' + cell(r.dphi_sim) + ',' +
           cell(r.p_plateau) + ',' + format_double(r.momentum_budget.entry_impulse) + ',' +
           format_double(r.momentum_budget.exit_impulse) + ',' + cell(r.entry_impulse_early) + ',' +
           cell(r.entry_impulse_late) + ',' + format_double(r.ehrenfest_residual) + ',' +
           format_double(r.peak_force) + ',' + format_double(r.transmitted_final) + '\n';
  }
  return out;
}

std::string summary_json(const RunResult& result) {
  ordered_json j = run_node(result);
  j["config"] = config_node(result.config);
  return dump(j);
}

std::string summary_json(const SweepResult& sweep, const RunConfig& cfg) {
  ordered_json j;
  ordered_json fits = ordered_json::array();
  for (const auto& f : sweep.fits)
    fits.push_back({{"axis", f.axis},
                    {"variable", f.variable},
                    {"points", f.points},
                    {"exponent_sim", opt(f.exponent_sim)},
                    {"exponent_exact_mode", f.exponent_exact_mode},
                    {"exponent_approx", f.exponent_approx}});
  j["fits"] = fits;
  j["errors"] = sweep.errors;
  j["config"] = config_node(cfg);
  return dump(j);
}

std::string summary_json(const ModelComparison& cmp, const RunConfig& cfg) {
  ordered_json j;
  j["entry_impulse_spread"] = cmp.entry_impulse_spread;
  j["dphi_spread"] = cmp.dphi_spread;
  j["dphi_change_high_v0"] = cmp.dphi_change_high_v0;
  j["smooth_impulse_spread"] = cmp.smooth_impulse_spread;
  j["smooth_peak_decreasing"] = cmp.smooth_peak_decreasing;
  ordered_json rows = ordered_json::array();
  for (const auto& row : cmp.rows) {
    ordered_json r = run_node(row.result);
    r["label"] = row.label;
    r["v0"] = opt(row.v0);
    r["w"] = opt(row.w);
    rows.push_back(r);
  }
  j["models"] = rows;
  j["config"] = config_node(cfg);
  return dump(j);
}

std::string manifest_json(const Manifest& m, const RunConfig& cfg) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["started_utc"] = m.started_utc;
  j["wall_seconds"] = m.wall_seconds;
  j["files"] = m.files;
  j["config"] = config_node(cfg);
  return dump(j);
}

void preflight_output(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path probe = fs::path(dir) / ".write-probe";
  {
    std::ofstream os(probe);
    if (!os) throw IoError("output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
}

std::vector<std::string> emit_results(const RunResult& result, const OutputSpec& out) {
  const std::filesystem::path dir(out.dir);
  std::vector<std::string> files;
  if (wants(out, "csv")) {
    write_text(dir / "series.csv", series_csv(result.series));
    files.push_back("series.csv");
  }
  if (wants(out, "json")) {
    write_text(dir / "summary.json", summary_json(result));
    files.push_back("summary.json");
  }
  return files;
}

std::vector<std::string> emit_results(const SweepResult& sweep, const RunConfig& cfg, const OutputSpec& out) {
  const std::filesystem::path dir(out.dir);
  std::vector<std::string> files;
  if (wants(out, "csv")) {
    write_text(dir / "sweep.csv", sweep_csv(sweep));
    files.push_back("sweep.csv");
  }
  if (wants(out, "json")) {
    write_text(dir / "summary.json", summary_json(sweep, cfg));
    files.push_back("summary.json");
  }
  return files;
}

std::vector<std::string> emit_results(const ModelComparison& cmp, const RunConfig& cfg, const OutputSpec& out) {
  const std::filesystem::path dir(out.dir);
  std::vector<std::string> files;
  if (wants(out, "csv")) {
    write_text(dir / "models.csv", models_csv(cmp));
    files.push_back("models.csv");
    for (const auto& row : cmp.rows) {
      const std::string name = "series-" + row.label + ".csv";
      write_text(dir / name, series_csv(row.result.series));
      files.push_back(name);
    }
  }
  if (wants(out, "json")) {
    write_text(dir / "summary.json", summary_json(cmp, cfg));
    files.push_back("summary.json");
  }
  return files;
}

void write_manifest(const Manifest& m, const RunConfig& cfg, const OutputSpec& out) {
  write_text(std::filesystem::path(out.dir) / "manifest.json", manifest_json(m, cfg));
}

}  // namespace wavechannel
