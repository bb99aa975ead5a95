#pragma once

// Closed-form channel relations (hbar = m = 1). Templated on the real scalar so
// the same expressions serve double and long double cross-checks.

#include "wavechannel/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace wavechannel {

template <typename Scalar>
Scalar smoothstep(Scalar t) {
  if (t <= Scalar(0)) return Scalar(0);
  if (t >= Scalar(1)) return Scalar(1);
  return t * t * (Scalar(3) - Scalar(2) * t);
}

template <typename Scalar>
struct BeamParams {
  Scalar p;

  Scalar wavelength() const { return Scalar(2) * std::numbers::pi_v<Scalar> / p; }
  Scalar energy() const { return p * p / Scalar(2); }
};

// Transverse ground-mode zero-point energy pi^2 / (2 a^2).
template <typename Scalar>
Scalar effective_step_height(Scalar a) {
  if (!(a > Scalar(0))) throw std::invalid_argument("channel width must be positive");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return pi * pi / (Scalar(2) * a * a);
}

template <typename Scalar>
Scalar mode_cutoff(Scalar a) {
  return std::numbers::pi_v<Scalar> / a;
}

// Longitudinal ground-mode momentum sqrt(p^2 - (pi/a)^2), or nullopt at or
// below the cutoff (evanescent).
template <typename Scalar>
std::optional<Scalar> reduced_momentum_exact(Scalar p, Scalar a) {
  if (!(p > Scalar(0)) || !(a > Scalar(0))) throw std::invalid_argument("p and a must be positive");
  const Scalar kc = mode_cutoff(a);
  if (p <= kc) return std::nullopt;
  return std::sqrt((p - kc) * (p + kc));
}

template <typename Scalar>
Scalar require_propagating(Scalar p, Scalar a) {
  const auto pr = reduced_momentum_exact(p, a);
  if (!pr) throw DomainError("beam momentum is at or below the channel ground-mode cutoff pi/a");
  return *pr;
}

// p - pi^2 / (2 a^2 p).
template <typename Scalar>
Scalar reduced_momentum_approx(Scalar p, Scalar a) {
  require_propagating(p, a);
  return p - effective_step_height(a) / p;
}

namespace detail {

// Both algebraic routes of the confinement phase: pi^2 l / (2 a^2 p) and
// (pi/4) lambda l / a^2.
template <typename Scalar>
struct ApproxPhaseForms {
  Scalar momentum_form;
  Scalar wavelength_form;
};

template <typename Scalar>
ApproxPhaseForms<Scalar> approx_phase_forms(Scalar p, Scalar ell, Scalar a) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar lambda = BeamParams<Scalar>{p}.wavelength();
  return {pi * pi * ell / (Scalar(2) * a * a * p), pi / Scalar(4) * lambda * ell / (a * a)};
}

}  // namespace detail

template <typename Scalar>
Scalar phase_shift_approx(Scalar p, Scalar ell, Scalar a) {
  require_propagating(p, a);
  if (!(ell >= Scalar(0))) throw std::invalid_argument("channel length must be non-negative");
  return detail::approx_phase_forms(p, ell, a).momentum_form;
}

// Unexpanded ground-mode phase lag (p - p') * l.
template <typename Scalar>
Scalar phase_shift_exact_mode(Scalar p, Scalar ell, Scalar a) {
  const Scalar pr = require_propagating(p, a);
  if (!(ell >= Scalar(0))) throw std::invalid_argument("channel length must be non-negative");
  return (p - pr) * ell;
}

template <typename Scalar>
struct StepTransmission {
  std::complex<Scalar> t;  // transmitted amplitude, incident wave exp(i p x)
  std::complex<Scalar> r;  // reflected amplitude
  Scalar phase_lag;        // -arg(t) unwrapped continuously in length from 0
};

// Rectangular region of height v0 and length ell on an otherwise free line.
// For p^2 > 2 v0 the phase lag tends to (p - sqrt(p^2 - 2 v0)) * ell plus a
// Fabry-Perot ripple bounded by the reflection amplitude.
template <typename Scalar>
StepTransmission<Scalar> step_transmission_1d(Scalar p, Scalar v0, Scalar ell) {
  using C = std::complex<Scalar>;
  if (!(p > Scalar(0))) throw std::invalid_argument("p must be positive");
  if (!(ell >= Scalar(0))) throw std::invalid_argument("length must be non-negative");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar q2 = p * p - Scalar(2) * v0;
  const C i(0, 1);
  C denom;                // t = exp(-i p l) / denom
  Scalar arg_denom;       // continuous branch of arg(denom)
  C r_numer;              // r = r_numer / denom
  if (q2 > Scalar(0)) {
    const Scalar q = std::sqrt(q2);
    const Scalar beta = (p * p + q * q) / (Scalar(2) * p * q);
    const Scalar gamma = (q * q - p * p) / (Scalar(2) * p * q);
    const Scalar theta = q * ell;
    denom = C(std::cos(theta), -beta * std::sin(theta));
    r_numer = i * gamma * std::sin(theta);
    const Scalar n = std::round(theta / pi);
    arg_denom = -(n * pi + std::atan(beta * std::tan(theta - n * pi)));
  } else if (q2 < Scalar(0)) {
    const Scalar kappa = std::sqrt(-q2);
    const Scalar theta = kappa * ell;
    const Scalar beta = (p * p - kappa * kappa) / (Scalar(2) * p * kappa);
    const Scalar gamma = (p * p + kappa * kappa) / (Scalar(2) * p * kappa);
    denom = C(std::cosh(theta), -beta * std::sinh(theta));
    r_numer = -i * gamma * std::sinh(theta);
    arg_denom = std::arg(denom);
  } else {
    // q = 0 limit of either branch.
    denom = C(Scalar(1), -p * ell / Scalar(2));
    r_numer = -i * p * ell / Scalar(2);
    arg_denom = std::arg(denom);
  }
  const C phase = std::exp(-i * p * ell);
  const C t = phase / denom;
  const C r = r_numer / denom;
  return {t, r, p * ell + arg_denom};
}

}  // namespace wavechannel
