#include "wavechannel/config.hpp"

#include "wavechannel/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wavechannel {

namespace {

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

double spacing(const GridSpec& g) { return std::max(g.dx, g.dy); }

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::transit: return "transit";
    case ExperimentKind::reflect: return "reflect";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::model_compare: return "model-compare";
    case ExperimentKind::oracle: return "oracle";
  }
  return "transit";
}

std::optional<ExperimentKind> parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::transit, ExperimentKind::reflect, ExperimentKind::sweep, ExperimentKind::model_compare,
                 ExperimentKind::oracle})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

void validate(const RunConfig& cfg) {
  const GridSpec& g = cfg.grid;
  require(g.nx >= 8, "grid.nx", "must be at least 8");
  require(g.ny >= 8, "grid.ny", "must be at least 8");
  require(g.dx > 0.0 && std::isfinite(g.dx), "grid.dx", "must be positive");
  require(g.dy > 0.0 && std::isfinite(g.dy), "grid.dy", "must be positive");
  require(std::isfinite(g.x0), "grid.x0", "must be finite");
  require(std::isfinite(g.y0), "grid.y0", "must be finite");

  const PacketSpec& p = cfg.packet;
  require(std::isfinite(p.xc), "packet.xc", "must be finite");
  require(std::isfinite(p.yc), "packet.yc", "must be finite");
  require(p.sigma_x > 0.0, "packet.sx", "must be positive");
  require(p.sigma_y > 0.0, "packet.sy", "must be positive");
  require(p.k0 > 0.0 && std::isfinite(p.k0), "packet.k0", "must be positive");

  const ChannelGeometry& c = cfg.geometry;
  require(c.length > 0.0 && std::isfinite(c.length), "geometry.ell", "must be positive");
  require(c.width >= 0.0 && std::isfinite(c.width), "geometry.a", "must be non-negative");
  const double x_last = g.x0 + (g.nx - 1) * g.dx;
  require(c.x_in >= g.x0 && c.x_in + c.length <= x_last, "geometry.x_in", "barrier slab must lie inside the grid");
  const double y_last = g.y0 + (g.ny - 1) * g.dy;
  require(c.y_center >= g.y0 && c.y_center <= y_last, "geometry.y_center", "must lie inside the grid");

  const ModelSpec& m = cfg.model;
  require(m.kind == "hard" || m.kind == "step" || m.kind == "smooth" || m.kind == "none", "model.kind",
          "must be one of hard, step, smooth, none");
  if (m.v0) require(*m.v0 > 0.0 && std::isfinite(*m.v0), "model.v0", "must be positive");
  if (m.w) require(*m.w >= 2.0 * spacing(g) * (1.0 - 1e-9), "model.w", "must be at least two grid spacings");

  const StepperSpec& s = cfg.stepper;
  if (s.dt) require(*s.dt > 0.0 && std::isfinite(*s.dt), "stepper.dt", "must be positive");
  if (s.n_steps) require(*s.n_steps >= 0, "stepper.n_steps", "must be non-negative");
  require(s.sample_stride >= 1, "stepper.sample_stride", "must be at least 1");
  if (s.cap) {
    require(s.cap->width > 0.0, "stepper.cap.width", "must be positive");
    require(s.cap->strength >= 0.0, "stepper.cap.strength", "must be non-negative");
  }

  const ExperimentSpec& e = cfg.experiment;
  for (double v : e.p) require(v > 0.0 && std::isfinite(v), "experiment.p", "momenta must be positive");
  for (double v : e.ell) require(v > 0.0 && std::isfinite(v), "experiment.ell", "lengths must be positive");
  for (double v : e.a) require(v > 0.0 && std::isfinite(v), "experiment.a", "widths must be positive");
  for (double v : e.w)
    require(v >= 2.0 * spacing(g) * (1.0 - 1e-9), "experiment.w", "edge widths must be at least two grid spacings");
  require(e.v0_scale > 0.0 && std::isfinite(e.v0_scale), "experiment.v0_scale", "must be positive");

  require(!cfg.output.dir.empty(), "output.dir", "must not be empty");
  for (const auto& f : cfg.output.formats)
    require(f == "csv" || f == "json", "output.formats", "entries must be \"csv\" or \"json\"");
}

RunConfig resolve_defaults(const RunConfig& cfg) {
  validate(cfg);
  RunConfig out = cfg;
  const double energy = 0.5 * cfg.packet.k0 * cfg.packet.k0;
  if (out.model.kind == "step" || out.model.kind == "smooth") {
    if (!out.model.v0) out.model.v0 = 40.0 * energy;
  }
  if (out.model.kind == "smooth" && !out.model.w) out.model.w = 2.0 * spacing(cfg.grid);
  if (!out.stepper.dt) out.stepper.dt = 0.25 * std::pow(std::min(cfg.grid.dx, cfg.grid.dy), 2);
  return out;
}

Grid make_grid(const RunConfig& cfg) {
  const GridSpec& g = cfg.grid;
  try {
    return build_grid(g.nx, g.ny, g.dx, g.dy, g.x0, g.y0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid", e.what());
  }
}

BarrierModel make_model(const RunConfig& cfg) {
  const RunConfig r = resolve_defaults(cfg);
  if (r.model.kind == "step") return FiniteStep{*r.model.v0};
  if (r.model.kind == "smooth") return Smoothed{*r.model.v0, *r.model.w};
  return HardWall{};
}

}  // namespace wavechannel
