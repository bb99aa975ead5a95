#pragma once

#include "wavechannel/geometry.hpp"
#include "wavechannel/grid_field.hpp"
#include "wavechannel/propagator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wavechannel {

enum class ExperimentKind { transit, reflect, sweep, model_compare, oracle };

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(const std::string& name);

struct GridSpec {
  int nx = 1024;
  int ny = 256;
  double dx = 0.25;
  double dy = 0.25;
  double x0 = 0.0;
  double y0 = 0.0;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// kind is "hard", "step" or "smooth". Unset v0 means 40 E of the nominal
// packet; unset w means two grid spacings.
struct ModelSpec {
  std::string kind = "hard";
  std::optional<double> v0;
  std::optional<double> w;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Unset dt means default_time_step; unset n_steps means a duration estimated
// from the packet speed and the distances involved.
struct StepperSpec {
  std::optional<double> dt;
  std::optional<long> n_steps;
  int sample_stride = 16;
  std::optional<AbsorbingLayer> cap;

  friend bool operator==(const StepperSpec&, const StepperSpec&) = default;
};

// Sweep axes (empty lists are skipped) and the model-comparison set.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::transit;
  std::vector<double> p;
  std::vector<double> ell;
  std::vector<double> a;
  std::vector<double> w;         // smoothed edge widths; empty means {2, 4} spacings
  double v0_scale = 10.0;        // FiniteStep height multiplier for the impenetrability check

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

struct OutputSpec {
  std::string dir = "results";
  std::vector<std::string> formats{"csv", "json"};

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
  GridSpec grid;
  PacketSpec packet{40.0, 32.0, 8.0, 7.5, 1.0};
  ChannelGeometry geometry{130.0, 50.0, 10.0, 32.0};
  ModelSpec model;
  StepperSpec stepper;
  ExperimentSpec experiment;
  OutputSpec output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Fills v0, w and dt from the other fields (n_steps stays as given; it depends
// on the experiment). Throws ConfigError with a field path on invalid values.
RunConfig resolve_defaults(const RunConfig& cfg);

// Checks every constraint that does not need a propagation; throws ConfigError.
void validate(const RunConfig& cfg);

Grid make_grid(const RunConfig& cfg);
BarrierModel make_model(const RunConfig& cfg);

}  // namespace wavechannel
