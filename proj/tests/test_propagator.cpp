#include <doctest.h>

#include "wavechannel/errors.hpp"
#include "wavechannel/geometry.hpp"
#include "wavechannel/observables.hpp"
#include "wavechannel/propagator.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

using namespace wavechannel;

namespace {

double l2_distance(const ComplexField& a, const ComplexField& b) {
  return std::sqrt((a.values() - b.values()).abs2().sum() * a.grid().cell_area());
}

void advance(const AdiStepper& s, ComplexField& psi, long n) {
  for (long k = 0; k < n; ++k) s.step(psi, k + 1);
}

// Continuum free Gaussian (|psi|^2 width sigma, carrier referenced to xc).
std::complex<double> free_gaussian_1d(double x, double t, double xc, double sigma, double k0) {
  using C = std::complex<double>;
  const C i(0, 1);
  const C s = 1.0 + i * t / (2.0 * sigma * sigma);
  const double r = x - xc - k0 * t;
  return std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) / std::sqrt(s) *
         std::exp(-r * r / (4.0 * sigma * sigma * s) + i * k0 * (x - xc) - 0.5 * i * k0 * k0 * t);
}

const Grid kSmall = build_grid(128, 64, 0.5, 0.5);  // 64 x 32
const ChannelGeometry kChannel{36.0, 10.0, 6.0, 16.0};

}  // namespace

TEST_CASE("norm is conserved over ten thousand steps") {
  const ComplexField psi0 = init_gaussian(kSmall, {20.0, 16.0, 3.0, 3.0, 1.0});
  for (const BarrierModel& model : {BarrierModel{HardWall{}}, BarrierModel{FiniteStep{5.0}}}) {
    CAPTURE(model_name(model));
    const AdiStepper s(build_barrier(kSmall, kChannel, model), {default_time_step(kSmall), {}, 1});
    ComplexField psi = psi0;
    psi.values() = build_barrier(kSmall, kChannel, model).mask.values().select(Complex(0.0), psi.values());
    const double n0 = norm_squared(psi);
    advance(s, psi, 10000);
    CHECK(std::abs(norm_squared(psi) - n0) < 1e-9);
  }
}

TEST_CASE("stepping back with -dt restores the state") {
  const Barrier b = build_barrier(kSmall, kChannel, HardWall{});
  const double dt = default_time_step(kSmall);
  const AdiStepper fwd(b, {dt, {}, 1}), back(b, {-dt, {}, 1});
  ComplexField psi0 = init_gaussian(kSmall, {20.0, 16.0, 3.0, 3.0, 1.0});
  psi0.values() = b.mask.values().select(Complex(0.0), psi0.values());
  psi0.values() /= std::sqrt(norm_squared(psi0));
  ComplexField psi = psi0;
  advance(fwd, psi, 500);
  advance(back, psi, 500);
  const double fidelity = std::norm(inner_product(psi0, psi));
  CHECK(fidelity > 1.0 - 1e-9);
}

TEST_CASE("masked points stay exactly zero") {
  const Barrier b = build_barrier(kSmall, kChannel, HardWall{});
  const AdiStepper s(b, {default_time_step(kSmall), {}, 1});
  ComplexField psi = init_gaussian(kSmall, {20.0, 16.0, 3.0, 3.0, 1.0});
  advance(s, psi, 400);  // includes the tail that started inside the wall
  for (int j = 0; j < kSmall.ny; ++j)
    for (int i = 0; i < kSmall.nx; ++i)
      if (b.mask(i, j)) CHECK(psi(i, j) == Complex(0.0));
  CHECK(norm_squared(restrict_x(psi, 40.0, 64.0)) > 1e-3);  // and the packet did get through
}

TEST_CASE("free gaussian spreads by the analytic law") {
  const Grid g = build_grid(512, 128, 0.25, 0.25);  // 128 x 32
  const double sigma = 2.0, t = 10.0;
  const ComplexField psi0 = init_gaussian(g, {40.0, 16.0, sigma, 3.0, 0.0});
  const AdiStepper s(free_space(g), {default_time_step(g), {}, 1});
  ComplexField psi = psi0;
  const long n = std::lround(t / s.dt());
  advance(s, psi, n);
  const double expected = sigma * sigma * (1.0 + std::pow(t / (2.0 * sigma * sigma), 2));
  CHECK(std::abs(variance_x(psi) / expected - 1.0) < 0.005);
}

TEST_CASE("packet centre moves at the lattice group velocity") {
  const Grid g = build_grid(512, 64, 0.25, 0.5);
  const double sigma = 4.0, k0 = 1.0, t = 20.0;
  ComplexField psi = init_gaussian(g, {40.0, 16.0, sigma, 3.0, k0});
  const AdiStepper s(free_space(g), {default_time_step(g), {}, 1});
  advance(s, psi, std::lround(t / s.dt()));
  // three-point Laplacian: omega = (1 - cos k h) / h^2, v = sin(k h) / h,
  // averaged over the packet's momentum distribution
  const double sk = 1.0 / (2.0 * sigma);
  double num = 0.0, den = 0.0;
  for (int m = -4000; m <= 4000; ++m) {
    const double k = k0 + m * (10.0 * sk / 4000.0);
    const double w = std::exp(-0.5 * std::pow((k - k0) / sk, 2));
    num += w * std::sin(k * g.dx) / g.dx;
    den += w;
  }
  CHECK(expectation_x(psi) == doctest::Approx(40.0 + t * num / den).epsilon(2e-5));
}

TEST_CASE("time step convergence is second order") {
  const Barrier b = build_barrier(kSmall, kChannel, HardWall{});
  const ComplexField psi0 = init_gaussian(kSmall, {24.0, 16.0, 3.0, 3.0, 1.5});
  const double dt = 0.1, t = 6.0;
  auto run = [&](double h) {
    ComplexField psi = psi0;
    advance(AdiStepper(b, {h, {}, 1}), psi, std::lround(t / h));
    return psi;
  };
  const ComplexField a = run(dt), c = run(dt / 2), d = run(dt / 4);
  const double ratio = l2_distance(a, c) / l2_distance(c, d);
  CAPTURE(ratio);
  CHECK(ratio > 3.6);
  CHECK(ratio < 4.4);
}

TEST_CASE("grid spacing convergence is second order") {
  const double sigma = 3.0, k0 = 1.0, t = 4.0;
  auto error = [&](double h) {
    const Grid g = build_grid(static_cast<int>(64 / h), static_cast<int>(32 / h), h, h);
    ComplexField psi = init_gaussian(g, {20.0, 16.0, sigma, sigma, k0});
    // dt = h^2 / 4 keeps the time error O(h^4)
    advance(AdiStepper(free_space(g), {default_time_step(g), {}, 1}), psi, std::lround(t / default_time_step(g)));
    double err = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto exact = free_gaussian_1d(g.x(i), t, 20.0, sigma, k0) * free_gaussian_1d(g.y(j), t, 16.0, sigma, 0.0);
        err += std::norm(psi(i, j) - exact);
      }
    return std::sqrt(err * g.cell_area());
  };
  const double e1 = error(0.5), e2 = error(0.25);
  const double order = std::log2(e1 / e2);
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(order > 1.8);
  CHECK(order < 2.3);
}

TEST_CASE("thread count does not change a single bit") {
  const Barrier b = build_barrier(kSmall, kChannel, Smoothed{5.0, 1.0});
  ComplexField one = init_gaussian(kSmall, {20.0, 16.0, 3.0, 3.0, 1.0}), many = one;
  advance(AdiStepper(b, {default_time_step(kSmall), {}, 1}), one, 50);
  advance(AdiStepper(b, {default_time_step(kSmall), {}, 3}), many, 50);
  CHECK((one.values() == many.values()).all());
}

TEST_CASE("product reference arm reproduces the 2D stepper in the empty box") {
  const PacketSpec packet{20.0, 16.0, 3.0, 3.0, 1.0};
  const double dt = default_time_step(kSmall);
  FreeProductStepper product(kSmall, packet, dt);
  ComplexField psi = init_gaussian(kSmall, packet);
  advance(AdiStepper(free_space(kSmall), {dt, {}, 1}), psi, 300);
  product.advance(300);
  CHECK(product.steps_taken() == 300);
  CHECK(product.time() == doctest::Approx(300 * dt));
  CHECK(l2_distance(product.state(), psi) < 1e-12);
}

TEST_CASE("absorbing layer only removes norm") {
  const Grid g = build_grid(256, 64, 0.25, 0.5);
  const AdiStepper s(free_space(g), {default_time_step(g), AbsorbingLayer{10.0, 1.0}, 1});
  ComplexField psi = init_gaussian(g, {40.0, 16.0, 3.0, 3.0, 2.0});
  double prev = norm_squared(psi);
  for (int k = 0; k < 20; ++k) {
    advance(s, psi, 64);
    const double n = norm_squared(psi);
    CHECK(n <= prev * (1.0 + 1e-13));
    prev = n;
  }
  CHECK(prev < 0.5);  // the packet ran into the right layer
}

TEST_CASE("non-finite amplitudes are reported with the step index") {
  const AdiStepper s(free_space(kSmall), {default_time_step(kSmall), {}, 1});
  ComplexField psi = init_gaussian(kSmall, {20.0, 16.0, 3.0, 3.0, 1.0});
  psi(64, 40) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  try {
    s.step(psi, 17);
    FAIL("expected a blow-up");
  } catch (const NumericalBlowupError& e) {
    CHECK(e.step() == 17);
  }
}

TEST_CASE("stepper flags time steps too coarse for the potential") {
  const double dt = default_time_step(kSmall);  // 1/16
  CHECK_FALSE(AdiStepper(build_barrier(kSmall, kChannel, FiniteStep{5.0}), {dt, {}, 1}).coarse_for_potential());
  CHECK(AdiStepper(build_barrier(kSmall, kChannel, FiniteStep{50.0}), {dt, {}, 1}).coarse_for_potential());
  CHECK_THROWS_AS(AdiStepper(free_space(kSmall), {0.0, {}, 1}), std::invalid_argument);
}

TEST_CASE("propagate samples at t = 0 and every stride") {
  const AdiStepper s(free_space(kSmall), {default_time_step(kSmall), {}, 1});
  const ComplexField psi0 = init_gaussian(kSmall, {20.0, 16.0, 3.0, 3.0, 1.0});
  const std::vector<Observer> obs{{"norm2", [](const ComplexField& f, double) { return norm_squared(f); }}};
  const Propagation p = propagate(psi0, s, 64, 16, obs);
  REQUIRE(p.series.t.size() == 5);
  CHECK(p.series.t[4] == doctest::Approx(64 * s.dt()));
  CHECK(p.series.column("norm2").size() == 5);
  CHECK_THROWS_AS(p.series.column("nope"), std::out_of_range);

  const Propagation none = propagate(psi0, s, 0, 16, obs);
  CHECK(none.series.t.empty());
  CHECK((none.final_state.values() == psi0.values()).all());
  CHECK_THROWS_AS(propagate(psi0, s, -1, 16, obs), std::invalid_argument);
  CHECK_THROWS_AS(propagate(psi0, s, 16, 0, obs), std::invalid_argument);
}

TEST_CASE("energy is conserved to the splitting error") {
  const Barrier b = build_barrier(kSmall, kChannel, FiniteStep{5.0});
  ComplexField psi = init_gaussian(kSmall, {20.0, 16.0, 3.0, 3.0, 1.0});
  const double e0 = expectation_energy(psi, b);
  advance(AdiStepper(b, {default_time_step(kSmall), {}, 1}), psi, 800);
  CHECK(std::abs(expectation_energy(psi, b) / e0 - 1.0) < 1e-3);
}
