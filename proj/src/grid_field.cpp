#include "wavechannel/grid_field.hpp"

#include "wavechannel/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavechannel {

namespace {

constexpr double kDegenerateNorm = 1e-14;

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

double checked_norm(const ComplexField& f) {
  const double n = norm_squared(f);
  if (!(n >= kDegenerateNorm)) {
    std::ostringstream os;
    os << "field norm " << n << " is below " << kDegenerateNorm;
    throw DegenerateStateError(os.str());
  }
  return n;
}

}  // namespace

Grid build_grid(int nx, int ny, double dx, double dy, double x0, double y0) {
  if (nx < 8 || ny < 8) throw std::invalid_argument("grid needs at least 8 points per axis");
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    throw std::invalid_argument("grid spacings must be positive and finite");
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw std::invalid_argument("grid origin must be finite");
  return Grid{nx, ny, dx, dy, x0, y0};
}

Complex inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid());
  const auto& a = f.values();
  const auto& b = g.values();
  Complex sum{0.0, 0.0};
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Complex col{0.0, 0.0};
    for (Eigen::Index i = 0; i < a.rows(); ++i) col += std::conj(a(i, j)) * b(i, j);
    sum += col;
  }
  return sum * f.grid().cell_area();
}

double norm_squared(const ComplexField& f) {
  const auto& a = f.values();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) col += std::norm(a(i, j));
    sum += col;
  }
  return sum * f.grid().cell_area();
}

double expectation_x(const ComplexField& f) {
  const double n = checked_norm(f);
  const Grid& g = f.grid();
  const auto& a = f.values();
  double sum = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) sum += g.x(i) * std::norm(a(i, j));
  return sum * g.cell_area() / n;
}

double variance_x(const ComplexField& f) {
  const double mean = expectation_x(f);
  const double n = norm_squared(f);
  const Grid& g = f.grid();
  const auto& a = f.values();
  double sum = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = g.x(i) - mean;
      sum += d * d * std::norm(a(i, j));
    }
  return sum * g.cell_area() / n;
}

ComplexField derivative_x(const ComplexField& f) {
  const Grid& g = f.grid();
  const auto& a = f.values();
  ComplexField out(g);
  auto& d = out.values();
  const double c1 = 8.0 / (12.0 * g.dx);
  const double c2 = 1.0 / (12.0 * g.dx);
  const int nx = g.nx;
  auto at = [&](int i, int j) -> Complex { return (i >= 0 && i < nx) ? a(i, j) : Complex{}; };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < 2; ++i) d(i, j) = c1 * (at(i + 1, j) - at(i - 1, j)) - c2 * (at(i + 2, j) - at(i - 2, j));
    for (int i = 2; i < nx - 2; ++i)
      d(i, j) = c1 * (a(i + 1, j) - a(i - 1, j)) - c2 * (a(i + 2, j) - a(i - 2, j));
    for (int i = std::max(2, nx - 2); i < nx; ++i)
      d(i, j) = c1 * (at(i + 1, j) - at(i - 1, j)) - c2 * (at(i + 2, j) - at(i - 2, j));
  }
  return out;
}

double expectation_p_beam(const ComplexField& f) {
  const double n = checked_norm(f);
  return inner_product(f, derivative_x(f)).imag() / n;
}

ComplexField init_gaussian(const Grid& grid, const PacketSpec& spec) {
  if (!(spec.sigma_x > 0.0) || !(spec.sigma_y > 0.0))
    throw std::invalid_argument("packet widths must be positive");
  if (spec.sigma_x < 3.0 * grid.dx || spec.sigma_y < 3.0 * grid.dy) {
    std::ostringstream os;
    os << "packet under-resolved: sigma_x=" << spec.sigma_x << " sigma_y=" << spec.sigma_y
       << " need >= 3 spacings (" << 3.0 * grid.dx << ", " << 3.0 * grid.dy << ")";
    throw std::invalid_argument(os.str());
  }
  const double x_lo = grid.x(0), x_hi = grid.x(grid.nx - 1);
  const double y_lo = grid.y(0), y_hi = grid.y(grid.ny - 1);
  const double mx = 4.0 * spec.sigma_x, my = 4.0 * spec.sigma_y;
  if (spec.xc - x_lo < mx || x_hi - spec.xc < mx || spec.yc - y_lo < my || y_hi - spec.yc < my) {
    std::ostringstream os;
    os << "packet centre (" << spec.xc << ", " << spec.yc << ") is closer than four widths to the box edge ["
       << x_lo << ", " << x_hi << "] x [" << y_lo << ", " << y_hi << "]";
    throw std::invalid_argument(os.str());
  }
  ComplexField psi(grid);
  auto& v = psi.values();
  const double ax = 1.0 / (4.0 * spec.sigma_x * spec.sigma_x);
  const double ay = 1.0 / (4.0 * spec.sigma_y * spec.sigma_y);
  for (int j = 0; j < grid.ny; ++j) {
    const double ry = grid.y(j) - spec.yc;
    const double ey = std::exp(-ay * ry * ry);
    for (int i = 0; i < grid.nx; ++i) {
      const double rx = grid.x(i) - spec.xc;
      // phase referenced to the packet centre keeps the carrier exact at xc
      v(i, j) = std::polar(std::exp(-ax * rx * rx) * ey, spec.k0 * rx);
    }
  }
  v /= std::sqrt(norm_squared(psi));
  return psi;
}

ComplexField restrict_x(const ComplexField& f, double x_lo, double x_hi) {
  const Grid& g = f.grid();
  ComplexField out(g);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (x >= x_lo && x <= x_hi) out.values().row(i) = f.values().row(i);
  }
  return out;
}

}  // namespace wavechannel
