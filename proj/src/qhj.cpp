#include "spectralgas/qhj.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "quadrature.hpp"
#include "spectralgas/errors.hpp"
#include "spectralgas/stieltjes.hpp"

namespace spectralgas::qhj {
namespace {

constexpr Complex kI{0.0, 1.0};

// (f, f', f'') of prod_k (x - x_k) by the product rule, stable at the nodes.
struct NodeProduct {
  double f = 1.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

NodeProduct node_product(std::span<const double> nodes, double x) {
  NodeProduct p;
  for (double xk : nodes) {
    const double u = x - xk;
    p.d2 = 2.0 * p.d1 + u * p.d2;
    p.d1 = p.f + u * p.d1;
    p.f = u * p.f;
  }
  return p;
}

// Monomial coefficients (lowest first) of prod_k (x - x_k).
std::vector<double> expand_nodes(std::span<const double> nodes) {
  std::vector<double> c{1.0};
  for (double root : nodes) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= root * c[i];
    }
    c = std::move(next);
  }
  return c;
}

NodeProduct horner(const std::vector<double>& c, double x) {
  NodeProduct p{0.0, 0.0, 0.0};
  for (std::size_t i = c.size(); i-- > 0;) {
    p.d2 = p.d2 * x + 2.0 * p.d1;
    p.d1 = p.d1 * x + p.f;
    p.f = p.f * x + c[i];
  }
  return p;
}

double distance_to_nodes(std::span<const double> nodes, double x) {
  double d = std::numeric_limits<double>::infinity();
  for (double xk : nodes) d = std::min(d, std::abs(x - xk));
  return d;
}

}  // namespace

QuantumMomentumFunction::QuantumMomentumFunction(std::vector<Complex> moving_poles,
                                                 std::optional<StatePrefactor> pref, double hbar)
    : poles_(std::move(moving_poles)), pref_(std::move(pref)), hbar_(hbar) {
  if (!(hbar_ > 0.0)) throw ConfigurationError("hbar must be positive");
}

std::vector<Complex> QuantumMomentumFunction::fixed_poles() const {
  std::vector<Complex> out;
  if (pref_) {
    for (double x : pref_->fixed_poles()) out.emplace_back(x, 0.0);
  }
  return out;
}

double QuantumMomentumFunction::pole_distance(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& zk : poles_) d = std::min(d, std::abs(z - zk));
  for (const Complex& zk : fixed_poles()) d = std::min(d, std::abs(z - zk));
  return d;
}

void QuantumMomentumFunction::require_regular(Complex z) const {
  for (std::size_t k = 0; k < poles_.size(); ++k) {
    if (z == poles_[k]) {
      throw PoleEvaluationError(fmt::format("p evaluated at moving pole {}", k));
    }
  }
  for (const Complex& zk : fixed_poles()) {
    if (z == zk) throw PoleEvaluationError("p evaluated at a fixed pole of the superpotential");
  }
}

Complex QuantumMomentumFunction::meromorphic_part(Complex z) const {
  if (!pref_) return 0.0;
  return -kI * pref_->drift(z);
}

Complex QuantumMomentumFunction::operator()(Complex z) const {
  require_regular(z);
  Complex s = 0.0;
  for (const Complex& zk : poles_) s += 1.0 / (z - zk);
  return -kI * hbar_ * s + meromorphic_part(z);
}

Complex QuantumMomentumFunction::derivative(Complex z) const {
  require_regular(z);
  Complex s = 0.0;
  for (const Complex& zk : poles_) {
    const Complex u = 1.0 / (z - zk);
    s += u * u;
  }
  Complex q = 0.0;
  if (pref_) q = -kI * pref_->drift_prime(z);
  return kI * hbar_ * s + q;
}

Complex QuantumMomentumFunction::second_derivative(Complex z) const {
  require_regular(z);
  Complex s = 0.0;
  for (const Complex& zk : poles_) {
    const Complex u = 1.0 / (z - zk);
    s += u * u * u;
  }
  Complex q = 0.0;
  if (pref_) q = -kI * pref_->drift_second(z);
  return -2.0 * kI * hbar_ * s + q;
}

QuantumMomentumFunction qmf_from_state(const StatePrefactor& pref,
                                       const ChargeConfiguration& nodes) {
  std::vector<Complex> poles;
  poles.reserve(nodes.size());
  for (double x : nodes.positions()) {
    if (!pref.support().contains(x)) {
      throw DomainError(fmt::format("node {} lies outside the support", x));
    }
    poles.emplace_back(x, 0.0);
  }
  return QuantumMomentumFunction(std::move(poles), pref, pref.hbar());
}

double GridFunction::max_abs() const {
  double m = 0.0;
  std::size_t f = 0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (f < flagged.size() && flagged[f] == i) {
      ++f;
      continue;
    }
    m = std::max(m, std::abs(value[i]));
  }
  return m;
}

namespace {

// p = -i (hbar S + D) with S = sum_k 1/(z - x_k). The pole-pair identity
//   S^2 + S' = 2 sum_k c_k / (z - x_k),  c_k = sum_{j!=k} 1/(x_k - x_j)
// removes the 1/d^2 and 1/d^3 cancellations that the direct products
// p^2 and p p' suffer next to a node.
struct PairResolved {
  Complex riccati_lhs;  // p^2 - i hbar p'
  Complex burgers_lhs;  // d/dz (p^2 - i hbar p')
};

std::optional<PairResolved> pair_resolved(const QuantumMomentumFunction& p, Complex z) {
  const auto poles = p.moving_poles();
  const double hbar = p.hbar();
  std::vector<Complex> c(poles.size(), 0.0);
  for (std::size_t k = 0; k < poles.size(); ++k) {
    for (std::size_t j = 0; j < poles.size(); ++j) {
      if (j == k) continue;
      if (poles[k] == poles[j]) return std::nullopt;
      c[k] += 1.0 / (poles[k] - poles[j]);
    }
  }
  Complex d = 0.0, d1 = 0.0, d2 = 0.0;
  if (p.prefactor()) {
    d = p.prefactor()->drift(z);
    d1 = p.prefactor()->drift_prime(z);
    d2 = p.prefactor()->drift_second(z);
  }
  Complex a1 = 0.0, a2 = 0.0, s = 0.0;
  for (std::size_t k = 0; k < poles.size(); ++k) {
    const Complex u = 1.0 / (z - poles[k]);
    const Complex num = hbar * c[k] + d;
    a1 += num * u;
    a2 += num * u * u;
    s += u;
  }
  PairResolved r;
  r.riccati_lhs = -2.0 * hbar * a1 - d * d - hbar * d1;
  r.burgers_lhs = 2.0 * hbar * a2 - 2.0 * hbar * d1 * s - 2.0 * d * d1 - hbar * d2;
  return r;
}

}  // namespace

GridFunction riccati_residual(const QuantumMomentumFunction& p, const Potential& v, double energy,
                              std::span<const double> grid) {
  GridFunction out;
  out.x.assign(grid.begin(), grid.end());
  out.value.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex z(grid[i], 0.0);
    if (p.pole_distance(z) < kPoleGuard) {
      out.flagged.push_back(i);
      continue;
    }
    Complex lhs;
    if (const auto r = pair_resolved(p, z)) {
      lhs = r->riccati_lhs;
    } else {
      const Complex pz = p(z);
      lhs = pz * pz - kI * p.hbar() * p.derivative(z);
    }
    out.value[i] = lhs - (energy - v(grid[i]));
  }
  return out;
}

GridFunction burgers_residual(const QuantumMomentumFunction& p, const Potential& v,
                              std::span<const double> grid) {
  GridFunction out;
  out.x.assign(grid.begin(), grid.end());
  out.value.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex z(grid[i], 0.0);
    if (p.pole_distance(z) < kPoleGuard) {
      out.flagged.push_back(i);
      continue;
    }
    Complex lhs;
    if (const auto r = pair_resolved(p, z)) {
      lhs = r->burgers_lhs;
    } else {
      lhs = -kI * p.hbar() * p.second_derivative(z) + 2.0 * p(z) * p.derivative(z);
    }
    out.value[i] = lhs + v.derivative(grid[i]);
  }
  return out;
}

Complex contour_integral(const QuantumMomentumFunction& p, const Circle& contour) {
  if (contour.samples < 64) {
    throw ContourError(fmt::format("contour needs at least 64 samples, got {}", contour.samples));
  }
  if (!(contour.radius > 0.0)) throw ContourError("contour radius must be positive");
  auto check = [&](const Complex& pole) {
    if (std::abs(std::abs(pole - contour.center) - contour.radius) < kPoleGuard) {
      throw ContourError(fmt::format("pole at ({}, {}) lies on the contour", pole.real(),
                                     pole.imag()));
    }
  };
  for (const Complex& zk : p.moving_poles()) check(zk);
  for (const Complex& zk : p.fixed_poles()) check(zk);

  const int m = contour.samples;
  Complex sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / m;
    const Complex e = std::polar(1.0, theta);
    const Complex z = contour.center + contour.radius * e;
    // dz = i r e^{i theta} dtheta
    sum += p(z) * kI * contour.radius * e;
  }
  const double dtheta = 2.0 * std::numbers::pi / m;
  return sum * dtheta / (2.0 * std::numbers::pi);
}

double contour_action(const QuantumMomentumFunction& p, const Circle& contour) {
  return contour_integral(p, contour).real();
}

Complex moving_pole_residue(const QuantumMomentumFunction& p, std::size_t index) {
  const auto poles = p.moving_poles();
  if (index >= poles.size()) throw DomainError("pole index out of range");
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < poles.size(); ++k) {
    if (k != index) nearest = std::min(nearest, std::abs(poles[k] - poles[index]));
  }
  for (const Complex& zk : p.fixed_poles()) nearest = std::min(nearest, std::abs(zk - poles[index]));
  const double radius = std::min(0.25, 0.25 * nearest);
  // (1/2pi i) * integral = (1/i) * contour_integral
  return contour_integral(p, {poles[index], radius, 256}) / kI;
}

double WaveFunction::value(double x) const {
  return normalization_ * pref_.g(x) * node_product(nodes_.positions(), x).f;
}

double WaveFunction::derivative(double x) const {
  const NodeProduct f = node_product(nodes_.positions(), x);
  return normalization_ * pref_.g(x) * (pref_.drift(x) * f.f + f.d1);
}

double WaveFunction::second_derivative(double x) const {
  const NodeProduct f = node_product(nodes_.positions(), x);
  const double d = pref_.drift(x);
  return normalization_ * pref_.g(x) *
         ((d * d + pref_.drift_prime(x)) * f.f + 2.0 * d * f.d1 + f.d2);
}

WaveFunction wavefunction(const StatePrefactor& pref, const ChargeConfiguration& nodes) {
  for (double x : nodes.positions()) {
    if (!pref.support().contains(x)) {
      throw DomainError(fmt::format("node {} lies outside the support", x));
    }
  }
  const auto positions = nodes.positions();
  auto density = [&](double x) {
    const double f = node_product(positions, x).f;
    const double v = std::exp(2.0 * pref.log_g(x)) * f * f;
    return std::isfinite(v) ? v : 0.0;
  };
  const detail::QuadratureResult q = detail::integrate(pref.support(), density, 1e-12);
  if (!(q.value > 0.0) || !std::isfinite(q.value) || q.error > 1e-10 * q.value) {
    throw NumericError(fmt::format("normalization quadrature did not converge (value {}, error {})",
                                   q.value, q.error));
  }
  return WaveFunction(pref, nodes, 1.0 / std::sqrt(q.value));
}

GridFunction schrodinger_residual(const WaveFunction& psi, const Potential& v, double energy,
                                  std::span<const double> grid) {
  GridFunction out;
  out.x.assign(grid.begin(), grid.end());
  out.value.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    out.value[i] = -psi.second_derivative(x) + (v(x) - energy) * psi.value(x);
  }
  return out;
}

namespace {

// Three points inside the support, away from the nodes, for the energy
// certificate.
std::vector<double> certificate_points(const StatePrefactor& pref, std::span<const double> nodes) {
  const int n = static_cast<int>(nodes.size());
  double lo = 0.0, hi = 0.0;
  switch (pref.family().kind()) {
    case orthopoly::FamilyKind::hermite:
      hi = std::sqrt(2.0 * n + 1.0) + 1.0;
      lo = -hi;
      break;
    case orthopoly::FamilyKind::laguerre:
      lo = 0.05;
      hi = 4.0 * n + 2.0 * std::max(pref.family().alpha(), 0.0) + 4.0;
      break;
    case orthopoly::FamilyKind::jacobi:
      lo = -0.95;
      hi = 0.95;
      break;
  }
  double min_gap = 1.0;
  for (std::size_t k = 1; k < nodes.size(); ++k) min_gap = std::min(min_gap, nodes[k] - nodes[k - 1]);
  const double guard = 0.1 * min_gap;

  std::vector<double> pts;
  // Low-discrepancy fractions of the working interval.
  for (int j = 1; j < 200 && pts.size() < 3; ++j) {
    const double frac = std::fmod(0.5 + j * 0.6180339887498949, 1.0);
    const double x = lo + frac * (hi - lo);
    if (distance_to_nodes(nodes, x) < guard) continue;
    bool far = true;
    for (double q : pts) far = far && std::abs(q - x) > guard;
    if (far) pts.push_back(x);
  }
  return pts;
}

}  // namespace

Quantization quantize(const StatePrefactor& pref, int n) {
  if (n < 0) throw DomainError(fmt::format("quantum number must be >= 0, got {}", n));
  Quantization out;
  out.nodes = n == 0 ? ChargeConfiguration({}, pref.support()) : stieltjes::equilibrate(pref, n);
  const QuantumMomentumFunction p = qmf_from_state(pref, out.nodes);
  const Potential v = potentials::schrodinger_potential(pref);
  out.certificate_points = certificate_points(pref, out.nodes.positions());

  double emin = std::numeric_limits<double>::infinity();
  double emax = -emin;
  double imag = 0.0;
  for (double x : out.certificate_points) {
    const Complex z(x, 0.0);
    const Complex pz = p(z);
    const Complex e = pz * pz - kI * p.hbar() * p.derivative(z) + v(x);
    emin = std::min(emin, e.real());
    emax = std::max(emax, e.real());
    imag = std::max(imag, std::abs(e.imag()));
  }
  out.energy = 0.5 * (emin + emax);
  out.spread = (emax - emin) + imag;
  if (out.spread > kQuantizeSpread * std::max(1.0, std::abs(out.energy))) {
    throw ConventionError(fmt::format(
        "energy extracted from the Riccati equation is not constant (range [{}, {}], imaginary "
        "part {}); {} with n = {} has no constant-energy reading under V = D^2 + D' + shift",
        emin, emax, imag, pref.family().name(), n));
  }
  return out;
}

DiracCheck dirac_action_check(const StatePrefactor& pref, int n, std::span<const double> grid) {
  const Quantization qz = quantize(pref, n);
  const auto nodes = qz.nodes.positions();
  const QuantumMomentumFunction p = qmf_from_state(pref, qz.nodes);
  const Potential v = potentials::schrodinger_potential(pref);
  const std::vector<double> coeffs = expand_nodes(nodes);
  const double hbar = pref.hbar();

  DiracCheck out;
  out.energy = qz.energy;
  if (grid.empty()) return out;

  // ln psi up to the normalization constant; phase theta tracked by
  // continuation above each node (theta drops by pi per crossed node).
  auto log_abs_psi = [&](double x) {
    return pref.log_g(x) + std::log(std::abs(horner(coeffs, x).f));
  };
  const double x0 = grid.front();
  const double theta0 = horner(coeffs, x0).f < 0.0 ? std::numbers::pi : 0.0;
  auto theta = [&](double x) {
    int crossed = 0;
    for (double xk : nodes) {
      if (xk > x0 && xk < x) ++crossed;
      if (xk < x0 && xk > x) --crossed;
    }
    return theta0 - std::numbers::pi * crossed;
  };
  // Tracked action S = -i hbar (ln|psi| + i theta).
  auto tracked_s = [&](double x) { return Complex(hbar * theta(x), -hbar * log_abs_psi(x)); };

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double dist = distance_to_nodes(nodes, x);
    if (dist < kNodeGuard || !pref.support().contains(x)) {
      out.flagged.push_back(i);
      continue;
    }
    const NodeProduct f = horner(coeffs, x);
    // Branch check: e^{i theta} must carry the sign of psi.
    const double phase_sign = std::cos(theta(x));
    if ((phase_sign > 0.0) != (f.f > 0.0)) {
      out.branch_failures.push_back(i);
      out.flagged.push_back(i);
      continue;
    }
    const double d = pref.drift(x);
    const double l1 = d + f.d1 / f.f;                                          // psi'/psi
    const double l2 = d * d + pref.drift_prime(x) + 2.0 * d * f.d1 / f.f + f.d2 / f.f;  // psi''/psi
    const Complex s1 = -kI * hbar * l1;
    const Complex s2 = -kI * hbar * (l2 - l1 * l1);

    const Complex pz = p(Complex(x, 0.0));
    out.momentum_dev = std::max(out.momentum_dev, std::abs(s1 - pz) / std::max(1.0, std::abs(pz)));

    // (hbar/i) S'' + (S')^2 = 2m (-dS/dt - V) with S(x,t) = S(x) - E t, 2m = 1.
    const Complex hj = (hbar / kI) * s2 + s1 * s1 - (qz.energy - v(x));
    const double scale = std::max({1.0, std::abs(v(x)), std::norm(s1), std::abs(s2)});
    out.hj_residual = std::max(out.hj_residual, std::abs(hj) / scale);

    if (dist >= 0.05) {
      auto central = [&](double h) { return (tracked_s(x + h) - tracked_s(x - h)) / (2.0 * h); };
      const double h = std::min(1e-4, dist / 50.0);
      const Complex ds = (4.0 * central(0.5 * h) - central(h)) / 3.0;
      out.fd_dev = std::max(out.fd_dev, std::abs(ds - pz) / std::max(1.0, std::abs(pz)));
    }
  }
  out.max_dev = std::max(out.momentum_dev, out.hj_residual);
  return out;
}

}  // namespace spectralgas::qhj
