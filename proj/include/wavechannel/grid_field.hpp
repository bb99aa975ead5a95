#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>

namespace wavechannel {

using Complex = std::complex<double>;

// Uniform rectangular lattice. Point (i, j) sits at (x0 + i*dx, y0 + j*dy);
// i runs along the beam axis x, j along the transverse axis y.
struct Grid {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;

  double x(int i) const { return x0 + i * dx; }
  double y(int j) const { return y0 + j * dy; }
  double lx() const { return nx * dx; }
  double ly() const { return ny * dy; }
  double cell_area() const { return dx * dy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  friend bool operator==(const Grid&, const Grid&) = default;
};

// Throws std::invalid_argument unless nx, ny >= 8 and dx, dy > 0.
Grid build_grid(int nx, int ny, double dx, double dy, double x0 = 0.0, double y0 = 0.0);

// A dense value per grid point, stored column-major as an nx-by-ny Eigen array
// so that lines of constant y are contiguous.
template <typename Scalar>
class Field {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit Field(const Grid& grid) : grid_(grid), values_(Storage::Zero(grid.nx, grid.ny)) {}
  Field(const Grid& grid, Storage values) : grid_(grid), values_(std::move(values)) {}

  const Grid& grid() const { return grid_; }
  const Storage& values() const { return values_; }
  Storage& values() { return values_; }

  Scalar& operator()(int i, int j) { return values_(i, j); }
  const Scalar& operator()(int i, int j) const { return values_(i, j); }

 private:
  Grid grid_;
  Storage values_;
};

using ComplexField = Field<Complex>;
using RealField = Field<double>;
using MaskField = Field<bool>;

// Gaussian packet parameters. sigma_x/sigma_y are the standard deviations of
// |psi|^2; k0 is the mean beam momentum (hbar = m = 1).
struct PacketSpec {
  double xc = 0.0;
  double yc = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double k0 = 0.0;

  friend bool operator==(const PacketSpec&, const PacketSpec&) = default;
};

// Midpoint-rule integral of conj(f) * g.
Complex inner_product(const ComplexField& f, const ComplexField& g);

double norm_squared(const ComplexField& f);

// <x> and <(x - <x>)^2>; throw DegenerateStateError for norm < 1e-14.
double expectation_x(const ComplexField& f);
double variance_x(const ComplexField& f);

// Beam-axis derivative d(psi)/dx with the five-point centered stencil. Points
// beyond the outer box count as zero, which is the Dirichlet box the
// propagator evolves in; masked points already hold zero.
ComplexField derivative_x(const ComplexField& f);

// <p_x> = Im <psi | d/dx psi> / <psi|psi>.
double expectation_p_beam(const ComplexField& f);

// Normalized Gaussian packet with a plane-wave factor exp(i k0 x). Rejects
// packets narrower than three grid spacings or closer than four widths to an
// outer edge (std::invalid_argument).
ComplexField init_gaussian(const Grid& grid, const PacketSpec& spec);

// Restricts f to grid columns with x in [x_lo, x_hi] (other points zeroed).
ComplexField restrict_x(const ComplexField& f, double x_lo, double x_hi);

}  // namespace wavechannel
