#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spectralgas/configuration.hpp"
#include "spectralgas/potentials.hpp"

// Quantum Hamilton-Jacobi layer. Convention: p = -i hbar (ln psi)', so
//   p(z) = sum_k (-i hbar) / (z - x_k) + i W(z),   W = -(ln g)'
// satisfies the Riccati equation p^2 - i hbar p' = E - V (2m = 1).
namespace spectralgas::qhj {

using Complex = std::complex<double>;
using potentials::Potential;
using potentials::StatePrefactor;

class QuantumMomentumFunction {
 public:
  QuantumMomentumFunction(std::vector<Complex> moving_poles, std::optional<StatePrefactor> pref,
                          double hbar = 1.0);

  // PoleEvaluationError at a moving or fixed pole.
  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  Complex second_derivative(Complex z) const;

  // Meromorphic part Q(z) = i W(z) (zero without a prefactor).
  Complex meromorphic_part(Complex z) const;

  std::span<const Complex> moving_poles() const { return poles_; }
  std::vector<Complex> fixed_poles() const;
  const std::optional<StatePrefactor>& prefactor() const { return pref_; }
  double hbar() const { return hbar_; }

  // Distance from z to the nearest moving or fixed pole.
  double pole_distance(Complex z) const;

 private:
  void require_regular(Complex z) const;

  std::vector<Complex> poles_;
  std::optional<StatePrefactor> pref_;
  double hbar_;
};

QuantumMomentumFunction qmf_from_state(const StatePrefactor& pref,
                                       const ChargeConfiguration& nodes);

// Values on a real grid. Points in `flagged` were skipped (value 0).
struct GridFunction {
  std::vector<double> x;
  std::vector<Complex> value;
  std::vector<std::size_t> flagged;

  double max_abs() const;
};

// Grid points closer than this to a pole are skipped and flagged.
inline constexpr double kPoleGuard = 1e-6;

// p^2 - i hbar p' - (E - V(x)), analytic p'.
GridFunction riccati_residual(const QuantumMomentumFunction& p, const Potential& v, double energy,
                              std::span<const double> grid);

// -i hbar p'' + 2 p p' + V'(x): the x-derivative of the Riccati residual.
GridFunction burgers_residual(const QuantumMomentumFunction& p, const Potential& v,
                              std::span<const double> grid);

struct Circle {
  Complex center = 0.0;
  double radius = 1.0;
  int samples = 256;
};

// (1/2pi) * contour integral of p over the circle (uniform-angle trapezoid).
// ContourError if samples < 64 or a pole lies within 1e-6 of the contour.
Complex contour_integral(const QuantumMomentumFunction& p, const Circle& contour);
double contour_action(const QuantumMomentumFunction& p, const Circle& contour);

// Residue of p at moving pole `index` from a small-circle contour integral.
Complex moving_pole_residue(const QuantumMomentumFunction& p, std::size_t index);

// psi(x) = normalization * g(x) * prod_k (x - x_k), normalized on the support.
class WaveFunction {
 public:
  WaveFunction(StatePrefactor pref, ChargeConfiguration nodes, double normalization)
      : pref_(std::move(pref)), nodes_(std::move(nodes)), normalization_(normalization) {}

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  const StatePrefactor& prefactor() const { return pref_; }
  const ChargeConfiguration& nodes() const { return nodes_; }
  double normalization() const { return normalization_; }

 private:
  StatePrefactor pref_;
  ChargeConfiguration nodes_;
  double normalization_;
};

// Normalizes by adaptive quadrature (relative tolerance 1e-10).
WaveFunction wavefunction(const StatePrefactor& pref, const ChargeConfiguration& nodes);

// -psi'' + V psi - E psi with analytic psi''.
GridFunction schrodinger_residual(const WaveFunction& psi, const Potential& v, double energy,
                                  std::span<const double> grid);

struct Quantization {
  double energy = 0.0;
  ChargeConfiguration nodes;
  // Spread of the energy extracted at three distinct points.
  double spread = 0.0;
  std::vector<double> certificate_points;
};

// Constancy bound for the energy certificate.
inline constexpr double kQuantizeSpread = 1e-9;

// Nodes from the Stieltjes equilibrium; E from p^2 - i hbar p' + V at three
// points. ConventionError when the extracted E is not constant.
Quantization quantize(const StatePrefactor& pref, int n);

struct DiracCheck {
  // max(momentum_dev, hj_residual)
  double max_dev = 0.0;
  // max |dS/dx - p| / max(1, |p|), dS/dx from the expanded node polynomial.
  double momentum_dev = 0.0;
  // Time-dependent Hamilton-Jacobi residual of S(x) - E t, relative to
  // max(1, |V|, |S'|^2, |S''|).
  double hj_residual = 0.0;
  // Finite-difference derivative of the branch-tracked S against p
  // (points at least 0.05 from a node only).
  double fd_dev = 0.0;
  double energy = 0.0;
  // Grid points inside the node guard band or where branch tracking failed.
  std::vector<std::size_t> flagged;
  std::vector<std::size_t> branch_failures;
};

inline constexpr double kNodeGuard = 1e-3;

// S(x) = -i hbar ln psi(x) along the grid with the branch tracked across nodes.
DiracCheck dirac_action_check(const StatePrefactor& pref, int n, std::span<const double> grid);

}  // namespace spectralgas::qhj
