#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "spectralgas/orthopoly.hpp"

// Ground-state prefactor g, drift D = (ln g)', superpotential W = -D and the
// derived potentials. Units: hbar = 2m = 1, Schrodinger form
// -psi'' + V psi = E psi.
namespace spectralgas::potentials {

using orthopoly::FamilyKind;
using orthopoly::PolynomialFamily;

struct PrefactorParams {
  // Orbital quantum number for the Coulomb reading of Laguerre (alpha = 2l + 1).
  std::optional<double> l;
  double hbar = 1.0;
};

// g(x) for each family:
//   Hermite            e^{-x^2/2}
//   Laguerre(alpha)    x^{(alpha+1)/2} e^{-x/2}   (Coulomb: r^{l+1} e^{-r/2})
//   Jacobi(alpha,beta) (1-x)^{(alpha+1)/2} (1+x)^{(beta+1)/2}
// The Stieltjes equilibrium of this prefactor is the zero set of the family.
class StatePrefactor {
 public:
  static constexpr std::string_view kMassConvention = "hbar=2m=1";

  const PolynomialFamily& family() const { return family_; }
  Interval support() const { return family_.support(); }
  double hbar() const { return hbar_; }
  std::optional<double> coulomb_l() const { return l_; }

  double g(double x) const;
  double log_g(double x) const;
  double drift(double x) const;
  double drift_prime(double x) const;
  double drift_second(double x) const;
  double superpotential(double x) const { return -drift(x); }
  double superpotential_prime(double x) const { return -drift_prime(x); }

  std::complex<double> drift(std::complex<double> z) const;
  std::complex<double> drift_prime(std::complex<double> z) const;
  std::complex<double> drift_second(std::complex<double> z) const;

  // Closed-form antiderivative of W, zero at the reference point
  // (Hermite 0, Laguerre 1, Jacobi 0).
  double superpotential_antiderivative(double x) const;
  double antiderivative_reference() const;

  // Energy offset added to D^2 + D' so the harmonic oscillator reads V = x^2.
  // Equals the ground-state energy E_0.
  double energy_shift() const;

  // Fixed (energy-independent) poles of the drift in the complex plane.
  std::vector<double> fixed_poles() const;

 private:
  friend StatePrefactor make_prefactor(const PolynomialFamily&, const PrefactorParams&);
  StatePrefactor(PolynomialFamily family, std::optional<double> l, double hbar)
      : family_(family), l_(l), hbar_(hbar) {}

  void require_inside(double x) const;

  PolynomialFamily family_;
  std::optional<double> l_;
  double hbar_ = 1.0;
};

// ConfigurationError when l is negative, given for a non-Laguerre family, or
// inconsistent with alpha = 2l + 1; or when hbar is not positive.
StatePrefactor make_prefactor(const PolynomialFamily& family, const PrefactorParams& params = {});

// Coulomb radial prefactor r^{l+1} e^{-r/2}.
StatePrefactor coulomb(double l);

// Real potential with its derivative.
struct Potential {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  double operator()(double x) const { return value(x); }
};

// V^{+-}(x) = W^2 -+ W' + E.
class PartnerPotentials {
 public:
  PartnerPotentials(StatePrefactor pref, double factorization_energy)
      : pref_(std::move(pref)), energy_(factorization_energy) {}

  double v_plus(double x) const;
  double v_minus(double x) const;
  double factorization_energy() const { return energy_; }

 private:
  StatePrefactor pref_;
  double energy_;
};

PartnerPotentials partner_potentials(const StatePrefactor& pref, double energy);

// V = D^2 + D' + shift; -g'' + V g = E_0 g with E_0 = energy_shift().
Potential schrodinger_potential(const StatePrefactor& pref);

}  // namespace spectralgas::potentials
