#pragma once

#include "wavechannel/geometry.hpp"
#include "wavechannel/grid_field.hpp"
#include "wavechannel/propagator.hpp"

#include <optional>
#include <vector>

namespace wavechannel {

// One sampled row of a propagation. Quantities that do not apply to the run
// (boundary force on a soft barrier, potential force on a hard wall) are empty.
struct ObservableRecord {
  double t = 0.0;
  double norm2 = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double dpdt = 0.0;
  std::optional<double> f_boundary;
  std::optional<double> f_potential;
  double transmitted = 0.0;
};

// Force on the beam axis exerted by hard-wall faces,
//   sum over face points of sign * (1/2) |d psi/dx|^2 * dy,
// with |d psi/dx|^2 at the wall taken from the two vacuum-side neighbours and
// the wall zero as [(4/3)|psi_1|^2 - (1/6) Re(psi_1* psi_2)] / dx^2. This is the
// one-sided form that closes the lattice Ehrenfest balance for the five-point
// momentum of expectation_p_beam exactly.
double boundary_force(const ComplexField& psi, const FaceSegments& faces);

// Checked variant: throws InvalidUseError for soft-potential barriers.
double boundary_force(const ComplexField& psi, const Barrier& barrier, const FaceSegments& faces);

// -<dV/dx>, with the gradient taken on lattice bonds and weighted by the bond
// density Re(psi_i* psi_{i+m}) so that it pairs exactly with the five-point
// momentum operator; reduces to -int |psi|^2 dV/dx in the continuum limit.
double potential_force(const ComplexField& psi, const RealField& potential);

// Rate of change of <p_x> as a volume integral,
//   i int (dpsi*/dt d_x psi - dpsi/dt d_x psi*) with dpsi/dt = -i H psi,
// evaluated on the masked lattice. Valid for hard and soft barriers alike.
double volume_force(const ComplexField& psi, const Barrier& barrier);

// Centered differences in t (second-order one-sided at the ends) of a
// uniformly sampled series; needs at least three samples.
std::vector<double> momentum_rate(const std::vector<double>& t, const std::vector<double>& mean_p);

struct PhaseReading {
  double phase = 0.0;    // arg <reference | channel>, principal value
  double overlap = 0.0;  // |<reference|channel>| / (||reference|| ||channel||)
};

// Throws UnreliablePhaseError when the normalized overlap is below 0.1.
PhaseReading phase_shift_overlap(const ComplexField& channel, const ComplexField& reference);

// Projections onto sqrt(2/a) sin(n pi (y - y_lo) / a), n = 1..n_max, on the
// grid column nearest x_probe.
std::vector<Complex> mode_coefficients(const ComplexField& psi, const ChannelGeometry& geom, double x_probe,
                                       int n_max);

// Beam momentum carried by transverse mode n inside the channel: the mode
// amplitude c_n(x) is projected column by column over the slab and
// <p> = Im sum c_n* D c_n / sum |c_n|^2 with the five-point D (zero beyond the
// slab ends). nullopt when the projected weight is below `min_weight`.
std::optional<double> mode_momentum(const ComplexField& psi, const ChannelGeometry& geom, int n = 1,
                                    double min_weight = 1e-10);

// <H> / <psi|psi> for the lattice Hamiltonian the propagator evolves.
double expectation_energy(const ComplexField& psi, const Barrier& barrier);

// Weight beyond the exit face over total weight.
double transmitted_fraction(const ComplexField& psi, const ChannelGeometry& geom);

// <x> and <p_x> of psi restricted to x in [x_lo, x_hi] and renormalized;
// nullopt when that region holds less than `min_weight` of the norm.
struct RegionMoments {
  double weight = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
};
std::optional<RegionMoments> region_moments(const ComplexField& psi, double x_lo, double x_hi,
                                            double min_weight = 1e-6);

// Standard observer set for propagate(): norm2, mean_x, mean_p, transmitted
// and f_boundary (hard walls) or f_potential (soft barriers).
std::vector<Observer> standard_observers(const Barrier& barrier);

// Assembles records (including dpdt) from a series sampled with
// standard_observers.
std::vector<ObservableRecord> to_records(const SampledSeries& series);

}  // namespace wavechannel
