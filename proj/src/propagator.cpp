#include "wavechannel/propagator.hpp"

#include "wavechannel/analytic.hpp"
#include "wavechannel/errors.hpp"
#include "wavechannel/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace wavechannel {

namespace {

using Lines = Eigen::ArrayXXcd;

// Forward elimination of independent tridiagonal lines stored like the field:
// x lines run down storage columns, y lines across them.
void factorize(const Lines& sub, const Lines& diag, const Lines& sup, bool x_lines, Lines& upper, Lines& inv) {
  upper.resize(diag.rows(), diag.cols());
  inv.resize(diag.rows(), diag.cols());
  if (x_lines) {
    for (Eigen::Index j = 0; j < diag.cols(); ++j) {
      inv(0, j) = 1.0 / diag(0, j);
      upper(0, j) = sup(0, j) * inv(0, j);
      for (Eigen::Index i = 1; i < diag.rows(); ++i) {
        inv(i, j) = 1.0 / (diag(i, j) - sub(i, j) * upper(i - 1, j));
        upper(i, j) = sup(i, j) * inv(i, j);
      }
    }
  } else {
    for (Eigen::Index i = 0; i < diag.rows(); ++i) {
      inv(i, 0) = 1.0 / diag(i, 0);
      upper(i, 0) = sup(i, 0) * inv(i, 0);
    }
    for (Eigen::Index j = 1; j < diag.cols(); ++j)
      for (Eigen::Index i = 0; i < diag.rows(); ++i) {
        inv(i, j) = 1.0 / (diag(i, j) - sub(i, j) * upper(i, j - 1));
        upper(i, j) = sup(i, j) * inv(i, j);
      }
  }
}

// In-place Cayley factor (1 + i tau H)^-1 (1 - i tau H) for H = -(1/2) d^2/dx^2
// on a Dirichlet line.
void cayley_line(Eigen::ArrayXcd& v, double tau, double h) {
  const Eigen::Index n = v.size();
  const Complex a{0.0, tau / (2.0 * h * h)};
  Eigen::ArrayXcd rhs(n), upper(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex l = i > 0 ? v(i - 1) : Complex{};
    const Complex r = i + 1 < n ? v(i + 1) : Complex{};
    rhs(i) = (1.0 - 2.0 * a) * v(i) + a * (l + r);
  }
  Complex pivot = 1.0 + 2.0 * a;
  upper(0) = -a / pivot;
  v(0) = rhs(0) / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = 1.0 + 2.0 * a + a * upper(i - 1);
    upper(i) = -a / pivot;
    v(i) = (rhs(i) + a * v(i - 1)) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) v(i) -= upper(i) * v(i + 1);
}

Eigen::ArrayXcd gaussian_line(int n, double origin, double h, double center, double sigma, double k0) {
  Eigen::ArrayXcd line(n);
  for (int i = 0; i < n; ++i) {
    const double u = origin + i * h - center;
    line(i) = std::exp(Complex{-u * u / (4.0 * sigma * sigma), k0 * u});
  }
  return line / std::sqrt(line.abs2().sum() * h);
}

}  // namespace

double default_time_step(const Grid& grid) {
  const double h = std::min(grid.dx, grid.dy);
  return 0.25 * h * h;
}

AdiStepper::AdiStepper(const Barrier& barrier, const StepperConfig& config)
    : grid_(barrier.potential.grid()), config_(config), mask_(barrier.mask.values()) {
  if (!(config.dt != 0.0) || !std::isfinite(config.dt)) throw std::invalid_argument("time step must be non-zero");
  if (!(barrier.mask.grid() == grid_)) throw std::invalid_argument("mask and potential grids differ");
  const Grid& g = grid_;
  const int nx = g.nx, ny = g.ny;
  // Cayley factors (1 + i tau H)^-1 (1 - i tau H) advance by 2 tau: a full
  // step along x, half steps along y.
  const Complex i_tau_x{0.0, 0.5 * config.dt};
  const Complex i_tau_y{0.0, 0.25 * config.dt};
  ax_ = i_tau_x / (2.0 * g.dx * g.dx);
  ay_ = i_tau_y / (2.0 * g.dy * g.dy);

  half_potential_ = barrier.potential.values().cast<Complex>() * 0.5;
  if (config.cap) {
    const AbsorbingLayer& cap = *config.cap;
    if (!(cap.width > 0.0) || !(cap.strength >= 0.0)) throw std::invalid_argument("invalid absorbing layer");
    const double left = g.x(0) + cap.width, right = g.x(nx - 1) - cap.width;
    for (int i = 0; i < nx; ++i) {
      const double x = g.x(i);
      double depth = 0.0;
      if (x < left) depth = (left - x) / cap.width;
      if (x > right) depth = (x - right) / cap.width;
      const double s = smoothstep(std::min(depth, 1.0));
      half_potential_.row(i) -= Complex{0.0, 0.5 * cap.strength * s * s};
    }
  }
  coarse_ = std::abs(config.dt) * barrier.potential.values().maxCoeff() > 0.5;

  // Implicit operators (1 + i tau H_x) and (1 + i tau H_y); masked points become
  // identity rows decoupled from their neighbours.
  auto build = [&](bool x_lines, LineFactors& out) {
    const Complex a = x_lines ? ax_ : ay_;
    const Complex i_tau = x_lines ? i_tau_x : i_tau_y;
    Lines sub = Lines::Constant(nx, ny, -a);
    Lines sup = Lines::Constant(nx, ny, -a);
    Lines diag = 1.0 + 2.0 * a + i_tau * half_potential_;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const bool first = x_lines ? i == 0 : j == 0;
        const bool last = x_lines ? i == nx - 1 : j == ny - 1;
        if (first) sub(i, j) = 0.0;
        if (last) sup(i, j) = 0.0;
        if (mask_(i, j)) {
          sub(i, j) = sup(i, j) = 0.0;
          diag(i, j) = 1.0;
          continue;
        }
        const int pi = x_lines ? i - 1 : i, pj = x_lines ? j : j - 1;
        const int ni = x_lines ? i + 1 : i, nj = x_lines ? j : j + 1;
        if (!first && mask_(pi, pj)) sub(i, j) = 0.0;
        if (!last && mask_(ni, nj)) sup(i, j) = 0.0;
      }
    factorize(sub, diag, sup, x_lines, out.upper, out.inv_pivot);
  };
  build(true, x_factors_);
  build(false, y_factors_);
  // Zero pivots pin masked unknowns to zero under the constant sub-diagonal.
  x_factors_.inv_pivot = mask_.select(Complex{}, x_factors_.inv_pivot);
  y_factors_.inv_pivot = mask_.select(Complex{}, y_factors_.inv_pivot);

  // Diagonal of the explicit operators (1 - i tau H).
  x_explicit_diag_ = 1.0 - 2.0 * ax_ - i_tau_x * half_potential_;
  y_explicit_diag_ = 1.0 - 2.0 * ay_ - i_tau_y * half_potential_;
  scratch_.resize(nx, ny);
}

// Explicit half (1 - i tau H_y) fused with the forward sweep of
// (1 + i tau H_y); the right-hand side of a masked row is irrelevant because its
// pivot is zero.
bool AdiStepper::cayley_y(const Lines& in, Lines& out) const {
  const int nx = grid_.nx, ny = grid_.ny;
  const Complex a = ay_;
  const Complex s = -ay_;
  const auto& e = y_explicit_diag_;
  const auto& inv = y_factors_.inv_pivot;
  const auto& up = y_factors_.upper;
  std::atomic<bool> finite{true};
  parallel_for(nx, config_.threads, [&](int ib, int ie) {
    for (int j = 0; j < ny; ++j) {
      const Complex* c = &in(0, j);
      const Complex* dn = j > 0 ? &in(0, j - 1) : nullptr;
      const Complex* un = j + 1 < ny ? &in(0, j + 1) : nullptr;
      const Complex* ej = &e(0, j);
      const Complex* q = &inv(0, j);
      Complex* o = &out(0, j);
      if (dn && un) {
        const Complex* prev = &out(0, j - 1);
        for (int i = ib; i < ie; ++i) o[i] = (ej[i] * c[i] + a * (un[i] + dn[i]) - s * prev[i]) * q[i];
      } else if (un) {
        for (int i = ib; i < ie; ++i) o[i] = (ej[i] * c[i] + a * un[i]) * q[i];
      } else {
        const Complex* prev = &out(0, j - 1);
        for (int i = ib; i < ie; ++i) o[i] = (ej[i] * c[i] + a * dn[i] - s * prev[i]) * q[i];
      }
    }
    for (int j = ny - 2; j >= 0; --j) {
      Complex* x = &out(0, j);
      const Complex* next = &out(0, j + 1);
      const Complex* u = &up(0, j);
      for (int i = ib; i < ie; ++i) x[i] -= u[i] * next[i];
    }
    // A non-finite value anywhere in a line is carried down to its first entry.
    double probe = 0.0;
    for (int i = ib; i < ie; ++i) probe += out(i, 0).real() + out(i, 0).imag();
    if (!std::isfinite(probe)) finite = false;
  });
  return finite;
}

// Same fusion along x, in place; `left` carries the overwritten neighbour.
void AdiStepper::cayley_x(Lines& v) const {
  const int nx = grid_.nx;
  const Complex a = ax_;
  const Complex s = -ax_;
  const auto& e = x_explicit_diag_;
  const auto& up = x_factors_.upper;
  const auto& inv = x_factors_.inv_pivot;
  // Four lines at a time so the recurrences overlap in the pipeline.
  constexpr int kBatch = 4;
  auto run = [&](int j0, auto batch) {
    constexpr int nb = decltype(batch)::value;
    Complex* x[nb];
    const Complex* ek[nb];
    const Complex* u[nb];
    const Complex* q[nb];
    Complex left[nb];
    for (int k = 0; k < nb; ++k) {
      x[k] = &v(0, j0 + k);
      ek[k] = &e(0, j0 + k);
      u[k] = &up(0, j0 + k);
      q[k] = &inv(0, j0 + k);
      const Complex c = x[k][0];
      x[k][0] = (ek[k][0] * c + a * x[k][1]) * q[k][0];
      left[k] = c;
    }
    for (int i = 1; i < nx - 1; ++i)
      for (int k = 0; k < nb; ++k) {
        const Complex c = x[k][i];
        x[k][i] = (ek[k][i] * c + a * (x[k][i + 1] + left[k]) - s * x[k][i - 1]) * q[k][i];
        left[k] = c;
      }
    for (int k = 0; k < nb; ++k) {
      const int i = nx - 1;
      x[k][i] = (ek[k][i] * x[k][i] + a * left[k] - s * x[k][i - 1]) * q[k][i];
    }
    for (int i = nx - 2; i >= 0; --i)
      for (int k = 0; k < nb; ++k) x[k][i] -= u[k][i] * x[k][i + 1];
  };
  const int ny = grid_.ny;
  parallel_for((ny + kBatch - 1) / kBatch, config_.threads, [&](int bb, int be) {
    for (int b = bb; b < be; ++b) {
      const int j0 = b * kBatch;
      if (j0 + kBatch <= ny) {
        run(j0, std::integral_constant<int, kBatch>{});
      } else {
        for (int j = j0; j < ny; ++j) run(j, std::integral_constant<int, 1>{});
      }
    }
  });
}

void AdiStepper::step(ComplexField& psi, long step_index) const {
  if (!(psi.grid() == grid_)) throw std::invalid_argument("field grid does not match stepper grid");
  Lines& v = psi.values();
  cayley_y(v, scratch_);
  cayley_x(scratch_);
  if (!cayley_y(scratch_, v)) {
    std::ostringstream os;
    os << "non-finite amplitude after step " << step_index;
    throw NumericalBlowupError(os.str(), step_index);
  }
}

ComplexField step(const ComplexField& psi, const Barrier& barrier, const StepperConfig& config) {
  AdiStepper stepper(barrier, config);
  ComplexField out = psi;
  stepper.step(out);
  return out;
}

FreeProductStepper::FreeProductStepper(const Grid& grid, const PacketSpec& packet, double dt)
    : grid_(grid), dt_(dt) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be non-zero");
  // Same shape and acceptance rules as init_gaussian.
  (void)init_gaussian(grid, packet);
  x_line_ = gaussian_line(grid.nx, grid.x0, grid.dx, packet.xc, packet.sigma_x, packet.k0);
  y_line_ = gaussian_line(grid.ny, grid.y0, grid.dy, packet.yc, packet.sigma_y, 0.0);
}

void FreeProductStepper::advance(long n_steps) {
  if (n_steps < 0) throw std::invalid_argument("cannot advance by a negative step count");
  for (long n = 0; n < n_steps; ++n) {
    cayley_line(x_line_, 0.5 * dt_, grid_.dx);
    cayley_line(y_line_, 0.25 * dt_, grid_.dy);
    cayley_line(y_line_, 0.25 * dt_, grid_.dy);
  }
  steps_ += n_steps;
}

ComplexField FreeProductStepper::state() const {
  ComplexField out(grid_);
  out.values() = x_line_.matrix() * y_line_.matrix().transpose();
  return out;
}

const std::vector<double>& SampledSeries::column(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return columns[k];
  throw std::out_of_range("no sampled column named " + name);
}

Propagation propagate(const ComplexField& psi0, const AdiStepper& stepper, long n_steps, int stride,
                      const std::vector<Observer>& observers, const std::function<void(long, long)>& progress) {
  if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
  if (stride < 1) throw std::invalid_argument("sample stride must be at least 1");
  Propagation out{psi0, {}};
  SampledSeries& s = out.series;
  for (const auto& o : observers) s.names.push_back(o.name);
  s.columns.resize(observers.size());
  if (n_steps == 0) return out;

  auto sample = [&](double t) {
    s.t.push_back(t);
    for (std::size_t k = 0; k < observers.size(); ++k) s.columns[k].push_back(observers[k].measure(out.final_state, t));
  };
  sample(0.0);
  for (long n = 1; n <= n_steps; ++n) {
    stepper.step(out.final_state, n);
    if (n % stride == 0) sample(static_cast<double>(n) * stepper.dt());
    if (progress && n % 1000 == 0) progress(n, n_steps);
  }
  return out;
}

}  // namespace wavechannel
