#include "spectralgas/orthopoly.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spectralgas/errors.hpp"

namespace spectralgas::orthopoly {
namespace {

constexpr double kRescaleThreshold = 0x1p900;

void check_degree(int degree) {
  if (degree < 0) {
    throw DomainError(fmt::format("degree must be non-negative, got {}", degree));
  }
  if (degree > kMaxDegree) {
    throw CapabilityError(
        fmt::format("degree {} exceeds the supported maximum {}", degree, kMaxDegree));
  }
}

// Sign-correct comparison of a scaled value against zero.
int sign_of(const ScaledPolyValue& v) { return (v.value > 0) - (v.value < 0); }

// Finite bracket enclosing all zeros of the given degree.
Interval zero_envelope(const PolynomialFamily& family, int degree) {
  switch (family.kind()) {
    case FamilyKind::hermite: {
      // Largest zero of H_n is below sqrt(2n+1).
      const double r = std::sqrt(2.0 * degree + 1.0) + 1.0;
      return {-r, r};
    }
    case FamilyKind::laguerre:
      // Largest zero of L_n^alpha is below 2n + alpha + 1 + sqrt(...) < 4n + 2 alpha + 2.
      return {0.0, 4.0 * degree + 2.0 * std::max(family.alpha(), 0.0) + 4.0};
    case FamilyKind::jacobi:
      return {-1.0, 1.0};
  }
  return {};
}

double safeguarded_newton(const PolynomialFamily& family, int degree, double lo, double hi,
                          std::ptrdiff_t index) {
  ScaledPolyValue flo = eval_scaled(family, degree, lo);
  ScaledPolyValue fhi = eval_scaled(family, degree, hi);
  int slo = sign_of(flo);
  const int shi = sign_of(fhi);
  if (slo == 0) return lo;
  if (shi == 0) return hi;
  if (slo == shi) {
    throw NumericError(fmt::format("zero {} of degree {} is not bracketed by [{}, {}]", index,
                                   degree, lo, hi),
                       index);
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const ScaledPolyValue f = eval_scaled(family, degree, x);
    const int s = sign_of(f);
    if (s == 0) return x;
    if (s == slo) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - f.value / f.derivative;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);
    }
    const double step = std::abs(next - x);
    x = next;
    if (step <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)) ||
        hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      return x;
    }
  }
  throw NumericError(
      fmt::format("Newton iteration for zero {} of degree {} did not converge", index, degree),
      index);
}

}  // namespace

PolynomialFamily PolynomialFamily::hermite() { return {FamilyKind::hermite, 0.0, 0.0}; }

PolynomialFamily PolynomialFamily::laguerre(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw ConfigurationError(fmt::format("Laguerre alpha must exceed -1, got {}", alpha));
  }
  return {FamilyKind::laguerre, alpha, 0.0};
}

PolynomialFamily PolynomialFamily::jacobi(double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw ConfigurationError(
        fmt::format("Jacobi alpha and beta must exceed -1, got ({}, {})", alpha, beta));
  }
  return {FamilyKind::jacobi, alpha, beta};
}

Interval PolynomialFamily::support() const {
  switch (kind_) {
    case FamilyKind::hermite:
      return Interval::real_line();
    case FamilyKind::laguerre:
      return {0.0, std::numeric_limits<double>::infinity()};
    case FamilyKind::jacobi:
      return {-1.0, 1.0};
  }
  return {};
}

std::string PolynomialFamily::name() const {
  switch (kind_) {
    case FamilyKind::hermite:
      return "hermite";
    case FamilyKind::laguerre:
      return fmt::format("laguerre(alpha={})", alpha_);
    case FamilyKind::jacobi:
      return fmt::format("jacobi(alpha={}, beta={})", alpha_, beta_);
  }
  return {};
}

double PolynomialFamily::sigma(double x) const {
  switch (kind_) {
    case FamilyKind::hermite:
      return 1.0;
    case FamilyKind::laguerre:
      return x;
    case FamilyKind::jacobi:
      return 1.0 - x * x;
  }
  return 0.0;
}

double PolynomialFamily::tau(double x) const {
  switch (kind_) {
    case FamilyKind::hermite:
      return -2.0 * x;
    case FamilyKind::laguerre:
      return alpha_ + 1.0 - x;
    case FamilyKind::jacobi:
      return beta_ - alpha_ - (alpha_ + beta_ + 2.0) * x;
  }
  return 0.0;
}

double PolynomialFamily::eigenvalue(int degree) const {
  const double n = degree;
  switch (kind_) {
    case FamilyKind::hermite:
      return 2.0 * n;
    case FamilyKind::laguerre:
      return n;
    case FamilyKind::jacobi:
      return n * (n + alpha_ + beta_ + 1.0);
  }
  return 0.0;
}

Recurrence PolynomialFamily::recurrence(int k) const {
  const double kk = k;
  switch (kind_) {
    case FamilyKind::hermite:
      return {2.0, 0.0, 2.0 * kk};
    case FamilyKind::laguerre:
      return {-1.0 / (kk + 1.0), (2.0 * kk + 1.0 + alpha_) / (kk + 1.0),
              (kk + alpha_) / (kk + 1.0)};
    case FamilyKind::jacobi: {
      const double a = alpha_;
      const double b = beta_;
      if (k == 0) return {0.5 * (a + b + 2.0), 0.5 * (a - b), 0.0};
      const double s = 2.0 * kk + a + b;
      const double denom = 2.0 * (kk + 1.0) * (kk + a + b + 1.0) * s;
      return {(s + 1.0) * (s + 2.0) * s / denom, (s + 1.0) * (a * a - b * b) / denom,
              2.0 * (kk + a) * (kk + b) * (s + 2.0) / denom};
    }
  }
  return {};
}

double PolynomialFamily::leading_coefficient(int degree) const {
  check_degree(degree);
  double lead = 1.0;
  for (int k = 0; k < degree; ++k) lead *= recurrence(k).a;
  return lead;
}

PolyValue ScaledPolyValue::unscaled() const {
  return {std::ldexp(value, exponent), std::ldexp(derivative, exponent),
          std::ldexp(second_derivative, exponent)};
}

ScaledPolyValue eval_scaled(const PolynomialFamily& family, int degree, double x) {
  check_degree(degree);
  if (!std::isfinite(x)) throw DomainError("polynomial abscissa is not finite");

  // (p, p', p'') at degrees k-1 and k.
  double p0 = 0.0, d0 = 0.0, s0 = 0.0;
  double p1 = 1.0, d1 = 0.0, s1 = 0.0;
  int exponent = 0;
  for (int k = 0; k < degree; ++k) {
    const Recurrence r = family.recurrence(k);
    const double lin = r.a * x + r.b;
    const double p2 = lin * p1 - r.c * p0;
    const double d2 = r.a * p1 + lin * d1 - r.c * d0;
    const double s2 = 2.0 * r.a * d1 + lin * s1 - r.c * s0;
    p0 = p1, d0 = d1, s0 = s1;
    p1 = p2, d1 = d2, s1 = s2;
    const double big = std::max({std::abs(p1), std::abs(d1), std::abs(s1), std::abs(p0),
                                 std::abs(d0), std::abs(s0)});
    if (big > kRescaleThreshold) {
      int e = 0;
      std::frexp(big, &e);
      p0 = std::ldexp(p0, -e), d0 = std::ldexp(d0, -e), s0 = std::ldexp(s0, -e);
      p1 = std::ldexp(p1, -e), d1 = std::ldexp(d1, -e), s1 = std::ldexp(s1, -e);
      exponent += e;
    }
  }
  return {p1, d1, s1, exponent};
}

PolyValue eval(const PolynomialFamily& family, int degree, double x) {
  const PolyValue v = eval_scaled(family, degree, x).unscaled();
  if (!std::isfinite(v.value) || !std::isfinite(v.derivative) ||
      !std::isfinite(v.second_derivative)) {
    throw NumericError(fmt::format("{} of degree {} overflows double range at x = {}",
                                   family.name(), degree, x));
  }
  return v;
}

ChargeConfiguration zeros(const PolynomialFamily& family, int degree) {
  check_degree(degree);
  if (degree < 1) throw DomainError("zeros requires degree >= 1");

  const Recurrence r0 = family.recurrence(0);
  std::vector<double> current{-r0.b / r0.a};
  for (int n = 2; n <= degree; ++n) {
    const Interval env = zero_envelope(family, n);
    std::vector<double> next(n);
    for (int k = 0; k < n; ++k) {
      const double lo = k == 0 ? env.lo : current[k - 1];
      const double hi = k == n - 1 ? env.hi : current[k];
      next[k] = safeguarded_newton(family, n, lo, hi, k);
    }
    current = std::move(next);
  }

  for (int k = 0; k < degree; ++k) {
    double spacing = std::numeric_limits<double>::infinity();
    if (k > 0) spacing = std::min(spacing, current[k] - current[k - 1]);
    if (k + 1 < degree) spacing = std::min(spacing, current[k + 1] - current[k]);
    if (!std::isfinite(spacing)) spacing = 1.0;
    const ScaledPolyValue f = eval_scaled(family, degree, current[k]);
    // Compare in mantissa space; value and derivative share the exponent.
    const double bound =
        kZeroResidual * std::max(std::ldexp(1.0, -f.exponent), std::abs(f.derivative) * spacing);
    if (std::abs(f.value) > bound) {
      throw NumericError(fmt::format("zero {} of {} degree {} has residual above bound", k,
                                     family.name(), degree),
                         k);
    }
  }
  return ChargeConfiguration(std::move(current), family.support());
}

double weight(const PolynomialFamily& family, double x) {
  const Interval s = family.support();
  if (!std::isfinite(x) || !s.contains_closed(x)) {
    throw DomainError(fmt::format("x = {} lies outside the support of {}", x, family.name()));
  }
  double w = 0.0;
  switch (family.kind()) {
    case FamilyKind::hermite:
      w = std::exp(-x * x);
      break;
    case FamilyKind::laguerre:
      w = std::pow(x, family.alpha()) * std::exp(-x);
      break;
    case FamilyKind::jacobi:
      w = std::pow(1.0 - x, family.alpha()) * std::pow(1.0 + x, family.beta());
      break;
  }
  if (!std::isfinite(w)) {
    throw DomainError(fmt::format("weight of {} is singular at x = {}", family.name(), x));
  }
  return w;
}

VandermondeCheck vandermonde_det_check(const PolynomialFamily& family,
                                       const ChargeConfiguration& points) {
  const auto n = static_cast<int>(points.size());
  if (n < 1) throw DegenerateInputError("vandermonde check needs at least one point");
  if (n > 12) {
    throw CapabilityError(fmt::format("vandermonde check supports n <= 12, got {}", n));
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = eval(family, i, points[j]).value;
  }
  double vandermonde = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = points[j] - points[i];
      if (d == 0.0) throw DegenerateInputError("coincident points in vandermonde check");
      vandermonde *= d;
    }
  }
  const double det = m.fullPivLu().determinant();
  return {det, vandermonde, det / vandermonde};
}

}  // namespace spectralgas::orthopoly
