#pragma once

#include "wavechannel/config.hpp"
#include "wavechannel/observables.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wavechannel {

struct RunOptions {
  // Worker bound. Single runs split line solves; sweeps and comparisons run
  // members concurrently. Results never depend on it.
  int threads = 1;
  std::function<void(const std::string&)> log;
};

struct MomentumBudget {
  double entry_impulse = 0.0;
  double exit_impulse = 0.0;
  double net = 0.0;
};

// Summary of one propagation. Phase and channel quantities are empty for runs
// they do not apply to (reflection, closed channel).
struct RunResult {
  RunConfig config;  // resolved echo, n_steps filled in
  std::vector<ObservableRecord> series;

  std::optional<double> dphi_sim;  // -arg <reference|channel>, unwrapped in time
  std::optional<double> dphi_exact_mode;
  std::optional<double> dphi_approx;
  std::optional<double> dphi_oracle_1d;
  std::optional<double> phase_overlap;

  std::optional<double> p_plateau;         // ground-mode <p> in the channel at mid-transit
  std::optional<double> t_plateau;
  std::optional<double> p_channel_region;  // all-mode channel-restricted <p> at t_plateau
  std::optional<double> ground_mode_fraction;
  std::optional<double> p_exit;            // <p> beyond the exit face at the end

  double ehrenfest_residual = 0.0;
  MomentumBudget momentum_budget;
  double momentum_change = 0.0;  // <p>(end) - <p>(0)
  double transmitted_final = 0.0;
  double max_norm_drift = 0.0;
  double peak_force = 0.0;
  // Entry impulse with the window closed at the quarter and three-quarter
  // crossings instead of mid-channel.
  std::optional<double> entry_impulse_early;
  std::optional<double> entry_impulse_late;
  bool coarse_time_step = false;
};

// Step counts from the packet speed and distances: a transit lasts until the
// ground-mode packet's trailing edge (3 sigma_x(t)) clears the exit or the free
// packet's leading edge reaches the far end of the box, whichever is first; a
// reflection until the packet is 4 sigma_x(t) back from the wall. Rounded up to
// a whole number of sample strides.
long estimate_transit_steps(const RunConfig& cfg);
long estimate_reflection_steps(const RunConfig& cfg);

// Channel arm plus a free reference arm with identical numerics.
RunResult run_transit(const RunConfig& cfg, const RunOptions& options = {});

// Packet against a wall (closed channel or aimed at material): the net
// impulse is the time integral of the face force over the whole run.
RunResult run_reflection(const RunConfig& cfg, const RunOptions& options = {});

struct SweepPoint {
  std::string axis;  // "p", "ell" or "a"
  double value = 0.0;
  double energy = 0.0;
  std::optional<double> dphi_sim;
  double dphi_exact_mode = 0.0;
  double dphi_approx = 0.0;
  double dphi_oracle_1d = 0.0;
  std::optional<double> overlap;
  std::optional<double> transmitted_final;
  std::string error;  // empty when the member run succeeded
};

// Least-squares slope of log dphi against log E (axis p), log ell or log a.
struct SweepFit {
  std::string axis;
  std::string variable;  // "E", "ell" or "a"
  int points = 0;
  std::optional<double> exponent_sim;
  double exponent_exact_mode = 0.0;
  double exponent_approx = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<SweepFit> fits;
  std::vector<std::string> errors;
};

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Shifts each phase by a multiple of 2 pi toward its predecessor (in the
// given order).
std::vector<double> unwrap_by_continuity(const std::vector<double>& phases);

// One transit per momentum in p_list, same geometry. A failed member leaves
// its row with an error message and is excluded from the fit.
SweepResult run_energy_sweep(const RunConfig& cfg, const std::vector<double>& p_list, const RunOptions& options = {});

// Every non-empty axis of cfg.experiment (p, ell, a).
SweepResult run_sweep(const RunConfig& cfg, const RunOptions& options = {});

struct ModelRow {
  std::string label;
  std::string kind;
  std::optional<double> v0;
  std::optional<double> w;
  RunResult result;
};

struct ModelComparison {
  std::vector<ModelRow> rows;
  // Largest relative deviation from the hard-wall row over the default-height
  // models, for the entry impulse and the phase.
  double entry_impulse_spread = 0.0;
  double dphi_spread = 0.0;
  // Relative phase change when the step height is scaled by v0_scale.
  double dphi_change_high_v0 = 0.0;
  // Smoothed rows: largest relative deviation of the entry impulse from the
  // narrowest edge, and whether peak |f| decreases with w.
  double smooth_impulse_spread = 0.0;
  bool smooth_peak_decreasing = false;
};

// HardWall, FiniteStep(v0), FiniteStep(v0_scale * v0) and Smoothed(v0, w) for
// every edge width, all on the geometry of cfg.
ModelComparison run_model_comparison(const RunConfig& cfg, const RunOptions& options = {});

}  // namespace wavechannel
