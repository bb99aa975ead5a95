#pragma once

#include "wavechannel/geometry.hpp"
#include "wavechannel/grid_field.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wavechannel {

// Imaginary potential -i * strength * s(xi)^2 over `width` next to each outer
// x edge, s the smoothstep of the depth into the layer.
struct AbsorbingLayer {
  double width = 0.0;
  double strength = 0.0;

  friend bool operator==(const AbsorbingLayer&, const AbsorbingLayer&) = default;
};

struct StepperConfig {
  double dt = 0.0;
  std::optional<AbsorbingLayer> cap;
  int threads = 1;
};

// dt = 0.25 * min(dx, dy)^2.
double default_time_step(const Grid& grid);

// Crank-Nicolson ADI for i dpsi/dt = [-(1/2) lap + V] psi on a Dirichlet box,
// split symmetrically as C_y(dt/2) C_x(dt) C_y(dt/2) with C the 1D
// Crank-Nicolson (Cayley) factor. The potential enters both directions at half
// weight; masked points are identity rows of every tridiagonal system and stay
// exactly zero. Every factor is unitary, so the step is unitary, second order
// and exactly reversed by the stepper for -dt. Factorizations are built once.
class AdiStepper {
 public:
  AdiStepper(const Barrier& barrier, const StepperConfig& config);

  const Grid& grid() const { return grid_; }
  double dt() const { return config_.dt; }
  const StepperConfig& config() const { return config_; }

  // True if dt * max(V) exceeds 0.5 (phase accuracy warning only).
  bool coarse_for_potential() const { return coarse_; }

  // One step in place. Throws NumericalBlowupError(step_index) on NaN/Inf.
  void step(ComplexField& psi, long step_index = 0) const;

 private:
  struct LineFactors {
    // Forward-eliminated tridiagonal: modified super-diagonal and reciprocal
    // pivots, laid out like the field.
    Eigen::ArrayXXcd upper, inv_pivot;
  };

  // One Cayley factor per direction; cayley_y reports whether the result is finite.
  bool cayley_y(const Eigen::ArrayXXcd& in, Eigen::ArrayXXcd& out) const;
  void cayley_x(Eigen::ArrayXXcd& v) const;

  Grid grid_;
  StepperConfig config_;
  Eigen::ArrayXXcd half_potential_;        // (V - i W) / 2
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask_;
  Eigen::ArrayXXcd x_explicit_diag_, y_explicit_diag_;
  LineFactors x_factors_, y_factors_;
  Complex ax_, ay_;  // i tau / (2 h^2) per direction
  bool coarse_ = false;
  mutable Eigen::ArrayXXcd scratch_;
};

// Free evolution of a product state X(x) Y(y) in the empty box. Without a wall
// mask or potential the split step factorizes, C_x(dt) acting on X and
// C_y(dt/2)^2 on Y, so this reproduces AdiStepper on free_space() to rounding at
// the cost of two 1D lines. Used for the reference arm of a transit.
class FreeProductStepper {
 public:
  FreeProductStepper(const Grid& grid, const PacketSpec& packet, double dt);

  void advance(long n_steps);
  long steps_taken() const { return steps_; }
  double time() const { return static_cast<double>(steps_) * dt_; }
  ComplexField state() const;

 private:
  Grid grid_;
  double dt_;
  long steps_ = 0;
  Eigen::ArrayXcd x_line_, y_line_;
};

// Convenience wrapper: builds a stepper and applies one step.
ComplexField step(const ComplexField& psi, const Barrier& barrier, const StepperConfig& config);

// A named scalar sampled along a propagation.
struct Observer {
  std::string name;
  std::function<double(const ComplexField& psi, double t)> measure;
};

struct SampledSeries {
  std::vector<double> t;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // columns[k][sample]

  const std::vector<double>& column(const std::string& name) const;
};

struct Propagation {
  ComplexField final_state;
  SampledSeries series;
};

// Advances n_steps and samples every observer at t = 0 and after every
// `stride` steps. n_steps == 0 returns psi0 and an empty series.
Propagation propagate(const ComplexField& psi0, const AdiStepper& stepper, long n_steps, int stride,
                      const std::vector<Observer>& observers,
                      const std::function<void(long, long)>& progress = {});

}  // namespace wavechannel
