#include "wavechannel/analytic.hpp"
#include "wavechannel/cli_io.hpp"
#include "wavechannel/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace wavechannel {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("", "cannot read config file " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string cell(const std::optional<double>& v, const char* fmt) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

int run_oracle(const std::vector<double>& ps, const std::vector<double>& as, const std::vector<double>& ells) {
  std::printf("%10s %10s %10s %12s %12s %16s %12s %14s\n", "p", "a", "ell", "p_exact", "p_approx", "dphi_exact_mode",
              "dphi_approx", "dphi_oracle_1d");
  for (double p : ps)
    for (double a : as)
      for (double ell : ells) {
        if (!(p > 0.0) || !(a > 0.0) || !(ell >= 0.0)) throw ConfigError("oracle", "p, a must be positive and ell >= 0");
        const auto pr = reduced_momentum_exact(p, a);
        std::optional<double> approx, exact, dphi_approx, oracle;
        if (pr) {
          exact = *pr;
          approx = reduced_momentum_approx(p, a);
          dphi_approx = phase_shift_approx(p, ell, a);
          oracle = step_transmission_1d(p, effective_step_height(a), ell).phase_lag;
        }
        const std::optional<double> dphi_exact = pr ? std::optional<double>(phase_shift_exact_mode(p, ell, a)) : std::nullopt;
        std::printf("%10g %10g %10g %12s %12s %16s %12s %14s%s\n", p, a, ell, cell(exact, "%.6g").c_str(),
                    cell(approx, "%.6g").c_str(), cell(dphi_exact, "%.6g").c_str(), cell(dphi_approx, "%.6g").c_str(),
                    cell(oracle, "%.6g").c_str(), pr ? "" : "  (below cutoff pi/a: evanescent)");
      }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Wave-packet transit through a channel in a reflecting barrier"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  bool quiet = false;
  int threads = 1;
  std::vector<double> ps, as, ells;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_flag("--quiet", quiet, "suppress progress messages");
    sub->add_option("--threads", threads, "worker bound; never changes results")->check(CLI::PositiveNumber);
  };
  CLI::App* transit = app.add_subcommand("transit", "channel arm plus free reference arm");
  CLI::App* reflect = app.add_subcommand("reflect", "packet against a wall, impulse budget");
  CLI::App* sweep = app.add_subcommand("sweep", "phase shift against p, ell and a");
  CLI::App* compare = app.add_subcommand("model-compare", "hard wall, finite step and smoothed barriers");
  for (CLI::App* sub : {transit, reflect, sweep, compare}) add_common(sub);
  CLI::App* oracle = app.add_subcommand("oracle", "closed-form values for lists of p, a, ell");
  oracle->add_option("--p", ps, "beam momenta")->required()->delimiter(',');
  oracle->add_option("--a", as, "channel widths")->required()->delimiter(',');
  oracle->add_option("--ell", ells, "channel lengths")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (oracle->parsed()) return run_oracle(ps, as, ells);

    ExperimentKind kind = ExperimentKind::transit;
    if (reflect->parsed()) kind = ExperimentKind::reflect;
    if (sweep->parsed()) kind = ExperimentKind::sweep;
    if (compare->parsed()) kind = ExperimentKind::model_compare;

    const std::string text = read_file(config_path);
    RunConfig cfg = parse_config(text);
    cfg.experiment.kind = kind;
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    preflight_output(cfg.output.dir);

    RunOptions options;
    options.threads = threads;
    if (!quiet) options.log = [](const std::string& m) { std::cerr << m << std::endl; };

    Manifest manifest;
    manifest.command = to_string(kind);
    manifest.started_utc = utc_now();
    const auto start = std::chrono::steady_clock::now();
    RunConfig echo = resolve_defaults(cfg);
    std::vector<std::string> files;
    if (kind == ExperimentKind::transit || kind == ExperimentKind::reflect) {
      const RunResult r = kind == ExperimentKind::transit ? run_transit(cfg, options) : run_reflection(cfg, options);
      echo = r.config;
      files = emit_results(r, cfg.output);
    } else if (kind == ExperimentKind::sweep) {
      const SweepResult s = run_sweep(cfg, options);
      files = emit_results(s, echo, cfg.output);
      for (const auto& e : s.errors) std::cerr << "sweep member failed: " << e << "\n";
    } else {
      const ModelComparison m = run_model_comparison(cfg, options);
      files = emit_results(m, echo, cfg.output);
    }
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.config_hash = content_hash(config_to_json(echo));
    manifest.files = files;
    write_manifest(manifest, echo, cfg.output);
    if (!quiet) std::cerr << "wrote " << files.size() + 1 << " files to " << cfg.output.dir << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace wavechannel
