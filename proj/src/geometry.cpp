#include "wavechannel/geometry.hpp"

#include "wavechannel/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavechannel {

namespace {

// Grid-coordinate comparisons tolerate rounding in x0 + i*dx.
constexpr double kSnap = 1e-9;

struct SlabColumns {
  int first = 0;
  int last = -1;
};

SlabColumns slab_columns(const Grid& g, const ChannelGeometry& geom) {
  const double lo = (geom.x_in - g.x0) / g.dx;
  const double hi = (geom.x_exit() - g.x0) / g.dx;
  SlabColumns c;
  c.first = static_cast<int>(std::ceil(lo - kSnap));
  c.last = static_cast<int>(std::floor(hi + kSnap));
  return c;
}

bool in_opening(const Grid& g, const ChannelGeometry& geom, int j) {
  if (geom.width <= 0.0) return false;
  const double y = g.y(j);
  const double tol = kSnap * g.dy;
  return y > geom.y_lo() + tol && y < geom.y_hi() - tol;
}

}  // namespace

std::string model_name(const BarrierModel& model) {
  switch (model.index()) {
    case 0: return "hard";
    case 1: return "step";
    default: return "smooth";
  }
}

bool is_hard_wall(const BarrierModel& model) { return std::holds_alternative<HardWall>(model); }

void validate(const Grid& grid, const ChannelGeometry& geom) {
  std::ostringstream os;
  if (!(geom.length > 0.0)) os << "channel length must be positive; ";
  if (!(geom.width >= 0.0)) os << "channel width must be non-negative; ";
  if (geom.x_in < grid.x(0) || geom.x_exit() > grid.x(grid.nx - 1)) os << "barrier slab leaves the grid; ";
  if (geom.y_center < grid.y(0) || geom.y_center > grid.y(grid.ny - 1)) os << "channel centre line is off the grid; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw std::invalid_argument("invalid channel geometry: " + msg);
}

void validate(const Grid& grid, const BarrierModel& model) {
  if (const auto* step = std::get_if<FiniteStep>(&model)) {
    if (!(step->v0 > 0.0)) throw std::invalid_argument("step barrier height must be positive");
  } else if (const auto* smooth = std::get_if<Smoothed>(&model)) {
    if (!(smooth->v0 > 0.0)) throw std::invalid_argument("smoothed barrier height must be positive");
    if (!(smooth->edge_width >= 2.0 * std::max(grid.dx, grid.dy) * (1.0 - kSnap)))
      throw std::invalid_argument("smoothed edge width must resolve at least two grid spacings");
  }
}

bool is_material(const Grid& grid, const ChannelGeometry& geom, int i, int j) {
  const SlabColumns c = slab_columns(grid, geom);
  return i >= c.first && i <= c.last && !in_opening(grid, geom, j);
}

double signed_depth(const ChannelGeometry& geom, double x, double y) {
  // Material is two disjoint half-strips (below and above the opening), so the
  // union's signed distance is the larger of the two.
  auto strip = [&](bool below) {
    const double edge = below ? geom.y_lo() : geom.y_hi();
    const double out_y = below ? std::max(y - edge, 0.0) : std::max(edge - y, 0.0);
    const double out_x = std::max({geom.x_in - x, x - geom.x_exit(), 0.0});
    if (out_x > 0.0 || out_y > 0.0) return -std::hypot(out_x, out_y);
    const double in_y = below ? edge - y : y - edge;
    return std::min({x - geom.x_in, geom.x_exit() - x, in_y});
  };
  if (geom.width <= 0.0) {
    const double out_x = std::max(geom.x_in - x, x - geom.x_exit());
    return -out_x;
  }
  return std::max(strip(true), strip(false));
}

RealField build_potential(const Grid& grid, const ChannelGeometry& geom, const BarrierModel& model) {
  validate(grid, geom);
  validate(grid, model);
  RealField v(grid);
  if (const auto* step = std::get_if<FiniteStep>(&model)) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        if (is_material(grid, geom, i, j)) v(i, j) = step->v0;
  } else if (const auto* smooth = std::get_if<Smoothed>(&model)) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const double d = signed_depth(geom, grid.x(i), grid.y(j));
        v(i, j) = smooth->v0 * smoothstep(d / smooth->edge_width + 0.5);
      }
  }
  return v;
}

MaskField wall_mask(const Grid& grid, const ChannelGeometry& geom) {
  validate(grid, geom);
  MaskField mask(grid);
  const SlabColumns c = slab_columns(grid, geom);
  for (int j = 0; j < grid.ny; ++j) {
    if (in_opening(grid, geom, j)) continue;
    for (int i = std::max(c.first, 0); i <= std::min(c.last, grid.nx - 1); ++i) mask(i, j) = true;
  }
  return mask;
}

FaceSegments face_segments(const Grid& grid, const ChannelGeometry& geom) {
  validate(grid, geom);
  const SlabColumns c = slab_columns(grid, geom);
  FaceSegments faces;
  if (c.last < c.first) return faces;
  for (int j = 0; j < grid.ny; ++j) {
    if (in_opening(grid, geom, j)) continue;
    if (c.first >= 2) faces.entry.push_back({c.first, j, -1});
    if (c.last <= grid.nx - 3) faces.exit.push_back({c.last, j, +1});
  }
  return faces;
}

Barrier build_barrier(const Grid& grid, const ChannelGeometry& geom, const BarrierModel& model) {
  Barrier b{geom, model, build_potential(grid, geom, model), MaskField(grid), true};
  if (is_hard_wall(model)) b.mask = wall_mask(grid, geom);
  return b;
}

Barrier free_space(const Grid& grid) {
  return Barrier{ChannelGeometry{}, HardWall{}, RealField(grid), MaskField(grid), false};
}

}  // namespace wavechannel
