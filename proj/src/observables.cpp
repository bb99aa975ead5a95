#include "wavechannel/observables.hpp"

#include "wavechannel/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wavechannel {

namespace {

// Five-point momentum stencil weights, p = -i/h * sum_m c_m (S^m - S^-m).
constexpr double kC1 = 8.0 / 12.0;
constexpr double kC2 = -1.0 / 12.0;

int nearest_column(const Grid& g, double x) { return static_cast<int>(std::lround((x - g.x0) / g.dx)); }

// -(1/2) lap psi + V psi on the lattice with zero outside the box and on
// masked points.
ComplexField apply_hamiltonian(const ComplexField& psi, const Barrier& barrier) {
  const Grid& g = psi.grid();
  const auto& a = psi.values();
  const auto& mask = barrier.mask.values();
  const auto& v = barrier.potential.values();
  const double cx = 0.5 / (g.dx * g.dx), cy = 0.5 / (g.dy * g.dy);
  ComplexField out(g);
  auto& h = out.values();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (mask(i, j)) continue;
      const Complex c = a(i, j);
      const Complex l = i > 0 ? a(i - 1, j) : Complex{};
      const Complex r = i + 1 < g.nx ? a(i + 1, j) : Complex{};
      const Complex d = j > 0 ? a(i, j - 1) : Complex{};
      const Complex u = j + 1 < g.ny ? a(i, j + 1) : Complex{};
      h(i, j) = -cx * (l - 2.0 * c + r) - cy * (d - 2.0 * c + u) + v(i, j) * c;
    }
  return out;
}

}  // namespace

double boundary_force(const ComplexField& psi, const FaceSegments& faces) {
  const Grid& g = psi.grid();
  const auto& a = psi.values();
  auto face_sum = [&](const std::vector<FacePoint>& pts) {
    double sum = 0.0;
    for (const FacePoint& f : pts) {
      const Complex p1 = a(f.i + f.sign, f.j);
      const Complex p2 = a(f.i + 2 * f.sign, f.j);
      const double grad2 = (4.0 / 3.0 * std::norm(p1) - (1.0 / 6.0) * (std::conj(p1) * p2).real()) / (g.dx * g.dx);
      sum += f.sign * 0.5 * grad2;
    }
    return sum;
  };
  return (face_sum(faces.entry) + face_sum(faces.exit)) * g.dy;
}

double boundary_force(const ComplexField& psi, const Barrier& barrier, const FaceSegments& faces) {
  if (barrier.present && !is_hard_wall(barrier.model))
    throw InvalidUseError("boundary force applies to hard-wall barriers only; use potential_force");
  return boundary_force(psi, faces);
}

double potential_force(const ComplexField& psi, const RealField& potential) {
  if (!(psi.grid() == potential.grid())) throw std::invalid_argument("field and potential grids differ");
  const Grid& g = psi.grid();
  const auto& a = psi.values();
  const auto& v = potential.values();
  double sum = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    double col = 0.0;
    for (int i = 0; i + 1 < g.nx; ++i) {
      col += 2.0 * kC1 * (v(i, j) - v(i + 1, j)) * (std::conj(a(i, j)) * a(i + 1, j)).real();
      if (i + 2 < g.nx) col += 2.0 * kC2 * (v(i, j) - v(i + 2, j)) * (std::conj(a(i, j)) * a(i + 2, j)).real();
    }
    sum += col;
  }
  return sum * g.dy;
}

double volume_force(const ComplexField& psi, const Barrier& barrier) {
  ComplexField d = derivative_x(psi);
  const auto& mask = barrier.mask.values();
  for (Eigen::Index k = 0; k < mask.size(); ++k)
    if (mask.data()[k]) d.values().data()[k] = 0.0;
  // d<p>/dt = -2 Im <H psi | p psi> = 2 Re <H psi | d_x psi>.
  return 2.0 * inner_product(apply_hamiltonian(psi, barrier), d).real();
}

std::vector<double> momentum_rate(const std::vector<double>& t, const std::vector<double>& mean_p) {
  if (t.size() != mean_p.size()) throw std::invalid_argument("time and momentum series differ in length");
  const std::size_t n = t.size();
  if (n < 3) throw std::invalid_argument("momentum_rate needs at least three samples");
  const double h = (t.back() - t.front()) / static_cast<double>(n - 1);
  std::vector<double> out(n);
  out[0] = (-3.0 * mean_p[0] + 4.0 * mean_p[1] - mean_p[2]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (mean_p[k + 1] - mean_p[k - 1]) / (2.0 * h);
  out[n - 1] = (3.0 * mean_p[n - 1] - 4.0 * mean_p[n - 2] + mean_p[n - 3]) / (2.0 * h);
  return out;
}

PhaseReading phase_shift_overlap(const ComplexField& channel, const ComplexField& reference) {
  const Complex ov = inner_product(reference, channel);
  const double scale = std::sqrt(norm_squared(reference) * norm_squared(channel));
  const double mag = scale > 0.0 ? std::abs(ov) / scale : 0.0;
  if (!(mag >= 0.1)) {
    std::ostringstream os;
    os << "overlap magnitude " << mag << " is below 0.1; phase unreliable";
    throw UnreliablePhaseError(os.str(), mag);
  }
  return {std::arg(ov), mag};
}

std::vector<Complex> mode_coefficients(const ComplexField& psi, const ChannelGeometry& geom, double x_probe,
                                       int n_max) {
  const Grid& g = psi.grid();
  if (x_probe < geom.x_in || x_probe > geom.x_exit())
    throw std::invalid_argument("mode probe position lies outside the channel");
  if (!(geom.width > 0.0)) throw std::invalid_argument("closed channel has no modes");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  const int i = nearest_column(g, x_probe);
  const double a = geom.width;
  const double norm = std::sqrt(2.0 / a);
  std::vector<Complex> c(static_cast<std::size_t>(n_max));
  for (int j = 0; j < g.ny; ++j) {
    const double s = g.y(j) - geom.y_lo();
    if (s <= 0.0 || s >= a) continue;
    const Complex v = psi(i, j) * g.dy;
    for (int n = 1; n <= n_max; ++n) c[n - 1] += norm * std::sin(n * std::numbers::pi * s / a) * v;
  }
  return c;
}

std::optional<double> mode_momentum(const ComplexField& psi, const ChannelGeometry& geom, int n, double min_weight) {
  const Grid& g = psi.grid();
  if (!(geom.width > 0.0)) throw std::invalid_argument("closed channel has no modes");
  if (n < 1) throw std::invalid_argument("mode index must be at least 1");
  const double a = geom.width;
  const double norm = std::sqrt(2.0 / a);
  std::vector<double> basis(static_cast<std::size_t>(g.ny), 0.0);
  for (int j = 0; j < g.ny; ++j) {
    const double s = g.y(j) - geom.y_lo();
    if (s > 0.0 && s < a) basis[j] = norm * std::sin(n * std::numbers::pi * s / a) * g.dy;
  }
  std::vector<Complex> c;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (x < geom.x_in || x > geom.x_exit()) continue;
    Complex sum{};
    for (int j = 0; j < g.ny; ++j)
      if (basis[j] != 0.0) sum += basis[j] * psi(i, j);
    c.push_back(sum);
  }
  const auto m = static_cast<long>(c.size());
  auto at = [&](long k) { return k >= 0 && k < m ? c[k] : Complex{}; };
  double weight = 0.0, current = 0.0;
  for (long k = 0; k < m; ++k) {
    const Complex d = (kC1 * (at(k + 1) - at(k - 1)) + kC2 * (at(k + 2) - at(k - 2))) / g.dx;
    weight += std::norm(c[k]);
    current += (std::conj(c[k]) * d).imag();
  }
  if (!(weight * g.dx >= min_weight)) return std::nullopt;
  return current / weight;
}

double expectation_energy(const ComplexField& psi, const Barrier& barrier) {
  const double n2 = norm_squared(psi);
  if (!(n2 >= 1e-14)) throw DegenerateStateError("energy of a zero-norm field");
  return inner_product(psi, apply_hamiltonian(psi, barrier)).real() / n2;
}

double transmitted_fraction(const ComplexField& psi, const ChannelGeometry& geom) {
  const Grid& g = psi.grid();
  const auto& a = psi.values();
  double beyond = 0.0, total = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double w = std::norm(a(i, j));
      total += w;
      if (g.x(i) > geom.x_exit()) beyond += w;
    }
  return total > 0.0 ? beyond / total : 0.0;
}

std::optional<RegionMoments> region_moments(const ComplexField& psi, double x_lo, double x_hi, double min_weight) {
  const ComplexField part = restrict_x(psi, x_lo, x_hi);
  const double w = norm_squared(part);
  const double total = norm_squared(psi);
  if (!(total > 0.0) || w < min_weight * total) return std::nullopt;
  return RegionMoments{w / total, expectation_x(part), expectation_p_beam(part)};
}

std::vector<Observer> standard_observers(const Barrier& barrier) {
  std::vector<Observer> obs;
  obs.push_back({"norm2", [](const ComplexField& f, double) { return norm_squared(f); }});
  obs.push_back({"mean_x", [](const ComplexField& f, double) { return expectation_x(f); }});
  obs.push_back({"mean_p", [](const ComplexField& f, double) { return expectation_p_beam(f); }});
  const ChannelGeometry geom = barrier.geometry;
  if (barrier.present) {
    obs.push_back({"transmitted", [geom](const ComplexField& f, double) { return transmitted_fraction(f, geom); }});
    if (is_hard_wall(barrier.model)) {
      auto faces = face_segments(barrier.potential.grid(), geom);
      obs.push_back({"f_boundary", [faces](const ComplexField& f, double) { return boundary_force(f, faces); }});
    } else {
      const RealField v = barrier.potential;
      obs.push_back({"f_potential", [v](const ComplexField& f, double) { return potential_force(f, v); }});
    }
  }
  return obs;
}

std::vector<ObservableRecord> to_records(const SampledSeries& s) {
  std::vector<ObservableRecord> rows(s.t.size());
  auto has = [&](const std::string& n) {
    for (const auto& k : s.names)
      if (k == n) return true;
    return false;
  };
  const auto& p = s.column("mean_p");
  const std::vector<double> dpdt = s.t.size() >= 3 ? momentum_rate(s.t, p) : std::vector<double>(s.t.size(), 0.0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ObservableRecord& r = rows[k];
    r.t = s.t[k];
    r.norm2 = s.column("norm2")[k];
    r.mean_x = s.column("mean_x")[k];
    r.mean_p = p[k];
    r.dpdt = dpdt[k];
    if (has("f_boundary")) r.f_boundary = s.column("f_boundary")[k];
    if (has("f_potential")) r.f_potential = s.column("f_potential")[k];
    r.transmitted = has("transmitted") ? s.column("transmitted")[k] : 0.0;
  }
  return rows;
}

}  // namespace wavechannel
