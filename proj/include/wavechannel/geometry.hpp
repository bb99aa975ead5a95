#pragma once

#include "wavechannel/grid_field.hpp"

#include <string>
#include <variant>
#include <vector>

namespace wavechannel {

// Barrier slab x in [x_in, x_in + length] pierced by an open channel
// y_center - width/2 < y < y_center + width/2. width == 0 closes the channel
// (solid wall across the beam).
struct ChannelGeometry {
  double x_in = 0.0;
  double length = 1.0;
  double width = 1.0;
  double y_center = 0.0;

  double x_exit() const { return x_in + length; }
  double y_lo() const { return y_center - 0.5 * width; }
  double y_hi() const { return y_center + 0.5 * width; }

  friend bool operator==(const ChannelGeometry&, const ChannelGeometry&) = default;
};

struct HardWall {};
struct FiniteStep {
  double v0 = 0.0;
};
// Smoothstep ramp of total width `edge_width` centred on the material boundary:
// V0 / 2 on the boundary, 0 at depth -w/2 and V0 at depth +w/2.
struct Smoothed {
  double v0 = 0.0;
  double edge_width = 0.0;
};

using BarrierModel = std::variant<HardWall, FiniteStep, Smoothed>;

std::string model_name(const BarrierModel& model);
bool is_hard_wall(const BarrierModel& model);

// Throws std::invalid_argument when the slab leaves the grid, the centre line is
// off-grid, or the model parameters are invalid for this grid.
void validate(const Grid& grid, const ChannelGeometry& geom);
void validate(const Grid& grid, const BarrierModel& model);

// Point (i, j) is barrier material.
bool is_material(const Grid& grid, const ChannelGeometry& geom, int i, int j);

// Signed distance from (x, y) into the material (positive inside).
double signed_depth(const ChannelGeometry& geom, double x, double y);

// Real potential of the model; identically zero for HardWall.
RealField build_potential(const Grid& grid, const ChannelGeometry& geom, const BarrierModel& model);

// True exactly on material points.
MaskField wall_mask(const Grid& grid, const ChannelGeometry& geom);

// A material point on a face normal to the beam. `sign` is -1 on the entry
// face and +1 on the exit face; the vacuum neighbour is at column i + sign.
struct FacePoint {
  int i = 0;
  int j = 0;
  int sign = 0;
};

struct FaceSegments {
  std::vector<FacePoint> entry;
  std::vector<FacePoint> exit;
};

FaceSegments face_segments(const Grid& grid, const ChannelGeometry& geom);

// Everything the propagator needs to know about the scatterer.
struct Barrier {
  ChannelGeometry geometry;
  BarrierModel model;
  RealField potential;
  MaskField mask;  // all false for soft models
  bool present = true;
};

Barrier build_barrier(const Grid& grid, const ChannelGeometry& geom, const BarrierModel& model);

// Same box, no scatterer.
Barrier free_space(const Grid& grid);

}  // namespace wavechannel
