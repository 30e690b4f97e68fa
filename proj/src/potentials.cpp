#include "spectralgas/potentials.hpp"

#include <fmt/format.h>

#include <cmath>

#include "spectralgas/errors.hpp"

namespace spectralgas::potentials {
namespace {

// Exponents of the prefactor factors: Laguerre x^a, Jacobi (1-x)^a (1+x)^b.
double exponent_a(const PolynomialFamily& f) { return 0.5 * (f.alpha() + 1.0); }
double exponent_b(const PolynomialFamily& f) { return 0.5 * (f.beta() + 1.0); }

template <typename T>
T drift_impl(const PolynomialFamily& f, T x) {
  switch (f.kind()) {
    case FamilyKind::hermite:
      return -x;
    case FamilyKind::laguerre:
      return exponent_a(f) / x - T(0.5);
    case FamilyKind::jacobi:
      return -exponent_a(f) / (T(1.0) - x) + exponent_b(f) / (T(1.0) + x);
  }
  return T(0.0);
}

template <typename T>
T drift_prime_impl(const PolynomialFamily& f, T x) {
  switch (f.kind()) {
    case FamilyKind::hermite:
      return T(-1.0);
    case FamilyKind::laguerre:
      return -exponent_a(f) / (x * x);
    case FamilyKind::jacobi: {
      const T u = T(1.0) - x;
      const T v = T(1.0) + x;
      return -exponent_a(f) / (u * u) - exponent_b(f) / (v * v);
    }
  }
  return T(0.0);
}

template <typename T>
T drift_second_impl(const PolynomialFamily& f, T x) {
  switch (f.kind()) {
    case FamilyKind::hermite:
      return T(0.0);
    case FamilyKind::laguerre:
      return T(2.0) * exponent_a(f) / (x * x * x);
    case FamilyKind::jacobi: {
      const T u = T(1.0) - x;
      const T v = T(1.0) + x;
      return T(-2.0) * exponent_a(f) / (u * u * u) + T(2.0) * exponent_b(f) / (v * v * v);
    }
  }
  return T(0.0);
}

}  // namespace

void StatePrefactor::require_inside(double x) const {
  if (!std::isfinite(x) || !support().contains(x)) {
    throw DomainError(
        fmt::format("x = {} lies outside the open support of {}", x, family_.name()));
  }
}

double StatePrefactor::log_g(double x) const {
  require_inside(x);
  switch (family_.kind()) {
    case FamilyKind::hermite:
      return -0.5 * x * x;
    case FamilyKind::laguerre:
      return exponent_a(family_) * std::log(x) - 0.5 * x;
    case FamilyKind::jacobi:
      return exponent_a(family_) * std::log1p(-x) + exponent_b(family_) * std::log1p(x);
  }
  return 0.0;
}

double StatePrefactor::g(double x) const { return std::exp(log_g(x)); }

double StatePrefactor::drift(double x) const {
  require_inside(x);
  return drift_impl(family_, x);
}

double StatePrefactor::drift_prime(double x) const {
  require_inside(x);
  return drift_prime_impl(family_, x);
}

double StatePrefactor::drift_second(double x) const {
  require_inside(x);
  return drift_second_impl(family_, x);
}

std::complex<double> StatePrefactor::drift(std::complex<double> z) const {
  return drift_impl(family_, z);
}

std::complex<double> StatePrefactor::drift_prime(std::complex<double> z) const {
  return drift_prime_impl(family_, z);
}

std::complex<double> StatePrefactor::drift_second(std::complex<double> z) const {
  return drift_second_impl(family_, z);
}

double StatePrefactor::superpotential_antiderivative(double x) const {
  require_inside(x);
  switch (family_.kind()) {
    case FamilyKind::hermite:
      return 0.5 * x * x;
    case FamilyKind::laguerre:
      return 0.5 * (x - 1.0) - exponent_a(family_) * std::log(x);
    case FamilyKind::jacobi:
      return -exponent_a(family_) * std::log1p(-x) - exponent_b(family_) * std::log1p(x);
  }
  return 0.0;
}

double StatePrefactor::antiderivative_reference() const {
  return family_.kind() == FamilyKind::laguerre ? 1.0 : 0.0;
}

double StatePrefactor::energy_shift() const {
  return family_.kind() == FamilyKind::hermite ? 1.0 : 0.0;
}

std::vector<double> StatePrefactor::fixed_poles() const {
  switch (family_.kind()) {
    case FamilyKind::hermite:
      return {};
    case FamilyKind::laguerre:
      return {0.0};
    case FamilyKind::jacobi:
      return {-1.0, 1.0};
  }
  return {};
}

StatePrefactor make_prefactor(const PolynomialFamily& family, const PrefactorParams& params) {
  if (!(params.hbar > 0.0) || !std::isfinite(params.hbar)) {
    throw ConfigurationError(fmt::format("hbar must be positive, got {}", params.hbar));
  }
  if (params.l) {
    const double l = *params.l;
    if (family.kind() != FamilyKind::laguerre) {
      throw ConfigurationError("Coulomb l is only meaningful for the Laguerre family");
    }
    if (!(l >= 0.0)) throw ConfigurationError(fmt::format("Coulomb l must be >= 0, got {}", l));
    if (std::abs(family.alpha() - (2.0 * l + 1.0)) > 1e-12) {
      throw ConfigurationError(fmt::format(
          "Coulomb l = {} requires Laguerre alpha = {}, got {}", l, 2.0 * l + 1.0, family.alpha()));
    }
  }
  return StatePrefactor(family, params.l, params.hbar);
}

StatePrefactor coulomb(double l) {
  if (!(l >= 0.0)) throw ConfigurationError(fmt::format("Coulomb l must be >= 0, got {}", l));
  return make_prefactor(PolynomialFamily::laguerre(2.0 * l + 1.0), {.l = l});
}

double PartnerPotentials::v_plus(double x) const {
  const double w = pref_.superpotential(x);
  return w * w - pref_.superpotential_prime(x) + energy_;
}

double PartnerPotentials::v_minus(double x) const {
  const double w = pref_.superpotential(x);
  return w * w + pref_.superpotential_prime(x) + energy_;
}

PartnerPotentials partner_potentials(const StatePrefactor& pref, double energy) {
  return PartnerPotentials(pref, energy);
}

Potential schrodinger_potential(const StatePrefactor& pref) {
  Potential v;
  v.value = [pref](double x) {
    const double d = pref.drift(x);
    return d * d + pref.drift_prime(x) + pref.energy_shift();
  };
  v.derivative = [pref](double x) {
    return 2.0 * pref.drift(x) * pref.drift_prime(x) + pref.drift_second(x);
  };
  return v;
}

}  // namespace spectralgas::potentials
