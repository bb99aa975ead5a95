#include "wavechannel/experiments.hpp"

#include "wavechannel/analytic.hpp"
#include "wavechannel/errors.hpp"
#include "wavechannel/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

namespace wavechannel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void say(const RunOptions& o, const std::string& msg) {
  if (o.log) o.log(msg);
}

double sigma_at(double sigma0, double t) {
  const double s = t / (2.0 * sigma0 * sigma0);
  return sigma0 * std::sqrt(1.0 + s * s);
}

long round_to_stride(double t, double dt, int stride) {
  const long n = static_cast<long>(std::ceil(t / dt - 1e-9));
  return (n + stride - 1) / stride * stride;
}

// Solves t = (distance + k sigma_x(t)) / speed by fixed-point iteration (the
// map is a contraction for speeds of order one).
double travel_time(double distance, double k, double sigma0, double speed) {
  double t = distance / speed;
  for (int it = 0; it < 200; ++it) t = (distance + k * sigma_at(sigma0, t)) / speed;
  return t;
}

Barrier make_barrier(const RunConfig& r, const Grid& g) {
  if (r.model.kind == "none") return free_space(g);
  try {
    return build_barrier(g, r.geometry, make_model(r));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("geometry", e.what());
  }
}

ComplexField make_packet(const Grid& g, const PacketSpec& spec) {
  try {
    return init_gaussian(g, spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("packet", e.what());
  }
}

// Packet with its (tiny) tail inside wall material removed and the norm
// restored, so the sampled norm starts where the stepper keeps it.
ComplexField make_packet(const Grid& g, const PacketSpec& spec, const Barrier& barrier) {
  ComplexField psi = make_packet(g, spec);
  psi.values() = barrier.mask.values().select(Complex(0.0), psi.values());
  psi.values() /= std::sqrt(norm_squared(psi));
  return psi;
}

// Trapezoid integral of samples (t, f) over [t0, t1], linear in between.
double integrate(const std::vector<double>& t, const std::vector<double>& f, double t0, double t1) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double a = std::max(t[k], t0), b = std::min(t[k + 1], t1);
    if (!(b > a)) continue;
    const double h = t[k + 1] - t[k];
    auto at = [&](double s) { return f[k] + (f[k + 1] - f[k]) * (s - t[k]) / h; };
    sum += 0.5 * (at(a) + at(b)) * (b - a);
  }
  return sum;
}

// First time the sampled series rises through `level`, linearly interpolated.
std::optional<double> first_crossing(const std::vector<double>& t, const std::vector<double>& v, double level) {
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (std::isnan(v[k]) || std::isnan(v[k + 1])) continue;
    if (v[k] < level && v[k + 1] >= level) return t[k] + (level - v[k]) / (v[k + 1] - v[k]) * (t[k + 1] - t[k]);
  }
  return std::nullopt;
}

std::optional<double> interpolate(const std::vector<double>& t, const std::vector<double>& v, double s) {
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (s < t[k] || s > t[k + 1]) continue;
    if (std::isnan(v[k]) || std::isnan(v[k + 1])) return std::nullopt;
    return v[k] + (v[k + 1] - v[k]) * (s - t[k]) / (t[k + 1] - t[k]);
  }
  return std::nullopt;
}

// Reference arm: the separable free stepper when the box is plain, a full 2D
// stepper when an absorbing layer breaks separability.
class ReferenceArm {
 public:
  ReferenceArm(const Grid& g, const PacketSpec& packet, const StepperConfig& sc) {
    if (sc.cap) {
      free_ = std::make_unique<AdiStepper>(free_space(g), sc);
      field_ = make_packet(g, packet);
    } else {
      product_ = std::make_unique<FreeProductStepper>(g, packet, sc.dt);
    }
  }

  // State after `step` steps (monotonically increasing calls).
  ComplexField at(long step) {
    if (product_) {
      product_->advance(step - product_->steps_taken());
      return product_->state();
    }
    for (; steps_ < step; ++steps_) free_->step(*field_, steps_ + 1);
    return *field_;
  }

 private:
  std::unique_ptr<FreeProductStepper> product_;
  std::unique_ptr<AdiStepper> free_;
  std::optional<ComplexField> field_;
  long steps_ = 0;
};

struct Oracles {
  std::optional<double> exact, approx, oracle_1d;
};

Oracles channel_oracles(const RunConfig& r) {
  Oracles o;
  const double p = r.packet.k0, a = r.geometry.width, ell = r.geometry.length;
  if (r.model.kind == "none") return {0.0, 0.0, 0.0};
  if (!(a > 0.0) || !reduced_momentum_exact(p, a)) return o;
  o.exact = phase_shift_exact_mode(p, ell, a);
  o.approx = phase_shift_approx(p, ell, a);
  o.oracle_1d = step_transmission_1d(p, effective_step_height(a), ell).phase_lag;
  return o;
}

StepperConfig stepper_config(const RunConfig& r, int threads) {
  return {*r.stepper.dt, r.stepper.cap, threads};
}

std::vector<double> force_column(const SampledSeries& s) {
  for (const char* name : {"f_boundary", "f_potential"})
    for (std::size_t k = 0; k < s.names.size(); ++k)
      if (s.names[k] == name) return s.columns[k];
  return std::vector<double>(s.t.size(), 0.0);
}

// Fields shared by transits and reflections: series, residual, budget.
void fill_common(RunResult& out, const SampledSeries& s, const ComplexField& final_state) {
  out.series = to_records(s);
  const std::vector<double> f = force_column(s);
  double max_f = 0.0, max_dev = 0.0, drift = 0.0;
  for (std::size_t k = 0; k < out.series.size(); ++k) {
    max_f = std::max(max_f, std::abs(f[k]));
    max_dev = std::max(max_dev, std::abs(out.series[k].dpdt - f[k]));
    drift = std::max(drift, std::abs(out.series[k].norm2 - out.series.front().norm2));
  }
  out.ehrenfest_residual = max_f > 0.0 ? max_dev / max_f : max_dev;
  out.peak_force = max_f;
  out.max_norm_drift = drift;
  if (!out.series.empty()) out.momentum_change = out.series.back().mean_p - out.series.front().mean_p;
  out.transmitted_final = out.config.model.kind == "none" ? 0.0 : transmitted_fraction(final_state, out.config.geometry);
}

RunConfig prepare(const RunConfig& cfg, long (*estimate)(const RunConfig&)) {
  RunConfig r = resolve_defaults(cfg);
  if (!r.stepper.n_steps) r.stepper.n_steps = estimate(r);
  return r;
}

}  // namespace

long estimate_transit_steps(const RunConfig& cfg) {
  const RunConfig r = resolve_defaults(cfg);
  const double p = r.packet.k0;
  double speed = p;
  if (r.model.kind != "none") {
    if (!(r.geometry.width > 0.0)) throw ConfigError("geometry.a", "a transit needs an open channel (a > 0)");
    const auto pr = reduced_momentum_exact(p, r.geometry.width);
    if (!pr) throw ConfigError("packet.k0", "beam momentum is at or below the channel cutoff pi/a");
    speed = *pr;
  }
  const double t_clear = travel_time(r.geometry.x_exit() - r.packet.xc, 3.0, r.packet.sigma_x, speed);
  // Stop before the free packet's leading edge reaches the far end of the box;
  // its reflection would feed back into both arms.
  const Grid g = make_grid(r);
  const double t_box = travel_time(g.x(g.nx - 1) - r.packet.xc, -3.0, r.packet.sigma_x, p);
  if (t_clear <= t_box) return round_to_stride(t_clear, *r.stepper.dt, r.stepper.sample_stride);
  const long stride = r.stepper.sample_stride;
  return std::max(stride, static_cast<long>(std::floor(t_box / *r.stepper.dt)) / stride * stride);
}

long estimate_reflection_steps(const RunConfig& cfg) {
  const RunConfig r = resolve_defaults(cfg);
  const double t = travel_time(r.geometry.x_in - r.packet.xc, 4.0, r.packet.sigma_x, r.packet.k0);
  return round_to_stride(t, *r.stepper.dt, r.stepper.sample_stride);
}

RunResult run_transit(const RunConfig& cfg, const RunOptions& options) {
  const RunConfig r = prepare(cfg, estimate_transit_steps);
  const Grid g = make_grid(r);
  const ChannelGeometry& geom = r.geometry;
  if (r.packet.xc + 4.0 * r.packet.sigma_x > geom.x_in)
    throw ConfigError("packet.xc", "packet overlaps the barrier; keep xc + 4 sx <= geometry.x_in");
  if (r.model.kind != "none") {
    if (!(geom.width > 0.0)) throw ConfigError("geometry.a", "a transit needs an open channel (a > 0)");
    if (!reduced_momentum_exact(r.packet.k0, geom.width))
      throw ConfigError("packet.k0", "beam momentum is at or below the channel cutoff pi/a");
  }
  const Barrier barrier = make_barrier(r, g);
  const StepperConfig sc = stepper_config(r, options.threads);
  const AdiStepper stepper(barrier, sc);
  const ComplexField psi0 = make_packet(g, r.packet, barrier);
  ReferenceArm reference(g, r.packet, sc);

  std::vector<Observer> observers = standard_observers(barrier);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto region = [geom](const ComplexField& f) { return region_moments(f, geom.x_in, geom.x_exit()); };
  observers.push_back({"channel_x", [=](const ComplexField& f, double) {
                         const auto m = region(f);
                         return m ? m->mean_x : nan;
                       }});
  observers.push_back({"channel_p", [=](const ComplexField& f, double) {
                         const auto m = region(f);
                         return m ? m->mean_p : nan;
                       }});
  const bool open = geom.width > 0.0;
  observers.push_back({"mode1_p", [=](const ComplexField& f, double) {
                         if (!open) return nan;
                         return mode_momentum(f, geom, 1).value_or(nan);
                       }});
  // |c_1|^2 over the weight in every mode the opening resolves, at mid-channel.
  const int n_modes = open ? std::max(1, static_cast<int>(std::ceil(geom.width / g.dy)) - 1) : 1;
  observers.push_back({"mode1_fraction", [=](const ComplexField& f, double) {
                         if (!open) return nan;
                         const auto c = mode_coefficients(f, geom, geom.x_in + 0.5 * geom.length, n_modes);
                         double total = 0.0;
                         for (const Complex& z : c) total += std::norm(z);
                         return total > 0.0 ? std::norm(c[0]) / total : nan;
                       }});
  // The reference arm is advanced in lockstep from inside the sampler; the
  // magnitude observer reuses the overlap computed for the phase.
  auto overlap = std::make_shared<Complex>();
  const double dt = sc.dt;
  observers.push_back({"ref_phase", [&reference, overlap, dt](const ComplexField& f, double t) {
                         const ComplexField ref = reference.at(std::lround(t / dt));
                         const double scale = std::sqrt(norm_squared(ref) * norm_squared(f));
                         *overlap = inner_product(ref, f) / scale;
                         return std::arg(*overlap);
                       }});
  observers.push_back({"ref_overlap", [overlap](const ComplexField&, double) { return std::abs(*overlap); }});

  say(options, "transit: " + std::to_string(*r.stepper.n_steps) + " steps, model " + r.model.kind);
  Propagation prop = propagate(psi0, stepper, *r.stepper.n_steps, r.stepper.sample_stride, observers,
                               [&](long n, long total) {
                                 if (n % 4000 == 0)
                                   say(options, "  step " + std::to_string(n) + " / " + std::to_string(total));
                               });
  const SampledSeries& s = prop.series;

  RunResult out;
  out.config = r;
  out.coarse_time_step = stepper.coarse_for_potential();
  fill_common(out, s, prop.final_state);
  const Oracles o = channel_oracles(r);
  out.dphi_exact_mode = o.exact;
  out.dphi_approx = o.approx;
  out.dphi_oracle_1d = o.oracle_1d;
  if (s.t.empty()) return out;

  // Phase: the final principal value, on the branch reached by following the
  // overlap continuously from t = 0.
  const ComplexField ref_final = reference.at(*r.stepper.n_steps);
  const PhaseReading reading = phase_shift_overlap(prop.final_state, ref_final);
  const std::vector<double> tracked = unwrap_by_continuity(s.column("ref_phase"));
  const double turns = std::round((tracked.back() - reading.phase) / kTwoPi);
  out.dphi_sim = -(reading.phase + turns * kTwoPi);
  out.phase_overlap = reading.overlap;

  // Entry/exit windows split at the mid-channel crossing of the channel <x>.
  const std::vector<double> f = force_column(s);
  const std::vector<double>& cx = s.column("channel_x");
  const double t_end = s.t.back();
  const auto t_mid = first_crossing(s.t, cx, geom.x_in + 0.5 * geom.length);
  const double split = t_mid.value_or(t_end);
  out.momentum_budget.entry_impulse = integrate(s.t, f, 0.0, split);
  out.momentum_budget.exit_impulse = integrate(s.t, f, split, t_end);
  out.momentum_budget.net = out.momentum_budget.entry_impulse + out.momentum_budget.exit_impulse;
  if (const auto q = first_crossing(s.t, cx, geom.x_in + 0.25 * geom.length))
    out.entry_impulse_early = integrate(s.t, f, 0.0, *q);
  if (const auto q = first_crossing(s.t, cx, geom.x_in + 0.75 * geom.length))
    out.entry_impulse_late = integrate(s.t, f, 0.0, *q);

  if (t_mid && open) {
    out.t_plateau = *t_mid;
    out.p_plateau = interpolate(s.t, s.column("mode1_p"), *t_mid);
    out.p_channel_region = interpolate(s.t, s.column("channel_p"), *t_mid);
    out.ground_mode_fraction = interpolate(s.t, s.column("mode1_fraction"), *t_mid);
  }
  if (const auto ex = region_moments(prop.final_state, geom.x_exit(), std::numeric_limits<double>::infinity()))
    out.p_exit = ex->mean_p;
  return out;
}

RunResult run_reflection(const RunConfig& cfg, const RunOptions& options) {
  const RunConfig r = prepare(cfg, estimate_reflection_steps);
  const Grid g = make_grid(r);
  if (r.packet.xc + 4.0 * r.packet.sigma_x > r.geometry.x_in)
    throw ConfigError("packet.xc", "packet overlaps the barrier; keep xc + 4 sx <= geometry.x_in");
  const Barrier barrier = make_barrier(r, g);
  const AdiStepper stepper(barrier, stepper_config(r, options.threads));
  say(options, "reflect: " + std::to_string(*r.stepper.n_steps) + " steps, model " + r.model.kind);
  Propagation prop = propagate(make_packet(g, r.packet, barrier), stepper, *r.stepper.n_steps, r.stepper.sample_stride,
                               standard_observers(barrier));
  RunResult out;
  out.config = r;
  out.coarse_time_step = stepper.coarse_for_potential();
  fill_common(out, prop.series, prop.final_state);
  const SampledSeries& s = prop.series;
  if (!s.t.empty()) {
    const std::vector<double> f = force_column(s);
    out.momentum_budget.entry_impulse = integrate(s.t, f, 0.0, s.t.back());
    out.momentum_budget.net = out.momentum_budget.entry_impulse;
    out.p_exit = out.series.back().mean_p;
  }
  return out;
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs two or more matching points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("log fit needs positive values");
    mx += std::log(x[k]) / n;
    my += std::log(y[k]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit needs distinct abscissae");
  return sxy / sxx;
}

std::vector<double> unwrap_by_continuity(const std::vector<double>& phases) {
  std::vector<double> out = phases;
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (std::isnan(out[k]) || std::isnan(out[k - 1])) continue;
    out[k] -= kTwoPi * std::round((out[k] - out[k - 1]) / kTwoPi);
  }
  return out;
}

namespace {

// Runs the members of one sweep axis and fits the exponent.
void sweep_axis(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
                const RunOptions& options, SweepResult& out) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<SweepPoint> rows(sorted.size());
  RunOptions member = options;
  member.threads = 1;
  // Soft barriers keep the height of the nominal packet across the sweep.
  const std::optional<double> v0 = resolve_defaults(base).model.v0;
  parallel_for(static_cast<int>(sorted.size()), options.threads, [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      RunConfig c = base;
      c.stepper.n_steps.reset();
      if (axis == "p") c.packet.k0 = sorted[k];
      if (axis == "ell") c.geometry.length = sorted[k];
      if (axis == "a") c.geometry.width = sorted[k];
      SweepPoint& row = rows[k];
      row.axis = axis;
      row.value = sorted[k];
      row.energy = 0.5 * c.packet.k0 * c.packet.k0;
      try {
        c.model.v0 = v0;
        const RunResult r = run_transit(c, member);
        row.dphi_sim = r.dphi_sim;
        row.dphi_exact_mode = r.dphi_exact_mode.value_or(0.0);
        row.dphi_approx = r.dphi_approx.value_or(0.0);
        row.dphi_oracle_1d = r.dphi_oracle_1d.value_or(0.0);
        row.overlap = r.phase_overlap;
        row.transmitted_final = r.transmitted_final;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  });

  // Continuity along the axis, anchored at each run's own time-tracked branch
  // for the first successful member.
  std::vector<std::size_t> ok;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].error.empty() && rows[k].dphi_sim) ok.push_back(k);
    else out.errors.push_back(axis + "=" + std::to_string(rows[k].value) + ": " + rows[k].error);
  }
  std::vector<double> ph;
  for (auto k : ok) ph.push_back(*rows[k].dphi_sim);
  ph = unwrap_by_continuity(ph);
  for (std::size_t m = 0; m < ok.size(); ++m) rows[ok[m]].dphi_sim = ph[m];

  SweepFit fit;
  fit.axis = axis;
  fit.variable = axis == "p" ? "E" : axis;
  fit.points = static_cast<int>(ok.size());
  std::vector<double> x, sim, exact, approx;
  for (const auto& row : rows) {
    const double v = axis == "p" ? row.energy : row.value;
    if (row.error.empty() && row.dphi_sim) {
      x.push_back(v);
      sim.push_back(*row.dphi_sim);
    }
  }
  std::vector<double> xa;
  for (const auto& row : rows) {
    if (row.dphi_exact_mode > 0.0 && row.dphi_approx > 0.0) {
      xa.push_back(axis == "p" ? row.energy : row.value);
      exact.push_back(row.dphi_exact_mode);
      approx.push_back(row.dphi_approx);
    }
  }
  try {
    if (x.size() >= 2) fit.exponent_sim = fit_log_slope(x, sim);
  } catch (const std::invalid_argument& e) {
    out.errors.push_back(axis + " fit: " + e.what());
  }
  if (xa.size() >= 2) {
    fit.exponent_exact_mode = fit_log_slope(xa, exact);
    fit.exponent_approx = fit_log_slope(xa, approx);
  }
  out.points.insert(out.points.end(), rows.begin(), rows.end());
  out.fits.push_back(fit);
}

}  // namespace

SweepResult run_energy_sweep(const RunConfig& cfg, const std::vector<double>& p_list, const RunOptions& options) {
  if (p_list.size() < 5) throw ConfigError("experiment.p", "an energy sweep needs at least five momenta");
  const RunConfig r = resolve_defaults(cfg);
  for (double p : p_list)
    if (!(r.geometry.width > 0.0) || !reduced_momentum_exact(p, r.geometry.width))
      throw ConfigError("experiment.p", "every momentum must lie above the channel cutoff pi/a");
  SweepResult out;
  sweep_axis(cfg, "p", p_list, options, out);
  return out;
}

SweepResult run_sweep(const RunConfig& cfg, const RunOptions& options) {
  const ExperimentSpec& e = cfg.experiment;
  if (e.p.empty() && e.ell.empty() && e.a.empty())
    throw ConfigError("experiment", "a sweep needs at least one of the lists p, ell, a");
  SweepResult out;
  if (!e.p.empty()) {
    SweepResult part = run_energy_sweep(cfg, e.p, options);
    out.points = part.points;
    out.fits = part.fits;
    out.errors = part.errors;
  }
  if (!e.ell.empty()) sweep_axis(cfg, "ell", e.ell, options, out);
  if (!e.a.empty()) sweep_axis(cfg, "a", e.a, options, out);
  return out;
}

ModelComparison run_model_comparison(const RunConfig& cfg, const RunOptions& options) {
  const RunConfig base = resolve_defaults(cfg);
  const double energy = 0.5 * base.packet.k0 * base.packet.k0;
  const double v0 = base.model.v0.value_or(40.0 * energy);
  std::vector<double> widths = base.experiment.w;
  const double h = std::max(base.grid.dx, base.grid.dy);
  if (widths.empty()) widths = {2.0 * h, 4.0 * h};

  ModelComparison out;
  auto add = [&](std::string label, std::string kind, std::optional<double> height, std::optional<double> w) {
    out.rows.push_back({std::move(label), std::move(kind), height, w, {}});
  };
  add("hard", "hard", std::nullopt, std::nullopt);
  add("step", "step", v0, std::nullopt);
  add("step-high", "step", base.experiment.v0_scale * v0, std::nullopt);
  for (double w : widths) {
    std::ostringstream name;
    name << "smooth-w" << w;
    add(name.str(), "smooth", v0, w);
  }

  RunOptions member = options;
  member.threads = 1;
  std::vector<std::string> errors(out.rows.size());
  parallel_for(static_cast<int>(out.rows.size()), options.threads, [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      ModelRow& row = out.rows[k];
      RunConfig c = cfg;
      c.model = ModelSpec{row.kind, row.v0, row.w};
      try {
        row.result = run_transit(c, member);
      } catch (const std::exception& e) {
        errors[k] = row.label + ": " + e.what();
      }
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("model comparison failed: " + e);

  const RunResult& hard = out.rows[0].result;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  for (const ModelRow& row : out.rows) {
    if (row.label == "step-high") continue;
    out.entry_impulse_spread = std::max(
        out.entry_impulse_spread,
        rel(row.result.momentum_budget.entry_impulse, hard.momentum_budget.entry_impulse));
    if (row.result.dphi_sim && hard.dphi_sim)
      out.dphi_spread = std::max(out.dphi_spread, rel(*row.result.dphi_sim, *hard.dphi_sim));
  }
  const RunResult& step = out.rows[1].result;
  const RunResult& high = out.rows[2].result;
  if (step.dphi_sim && high.dphi_sim) out.dphi_change_high_v0 = rel(*high.dphi_sim, *step.dphi_sim);

  out.smooth_peak_decreasing = true;
  const RunResult* first_smooth = nullptr;
  double last_peak = std::numeric_limits<double>::infinity();
  for (const ModelRow& row : out.rows) {
    if (row.kind != "smooth") continue;
    if (!first_smooth) first_smooth = &row.result;
    out.smooth_impulse_spread =
        std::max(out.smooth_impulse_spread,
                 rel(row.result.momentum_budget.entry_impulse, first_smooth->momentum_budget.entry_impulse));
    if (!(row.result.peak_force < last_peak)) out.smooth_peak_decreasing = false;
    last_peak = row.result.peak_force;
  }
  return out;
}

}  // namespace wavechannel
