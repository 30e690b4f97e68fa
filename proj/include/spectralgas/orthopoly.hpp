#pragma once

#include <string>

#include "spectralgas/configuration.hpp"

// Classical orthogonal polynomials (physicists' Hermite, generalized
// Laguerre, Jacobi) in their standard normalizations, evaluated by the
// three-term recurrence and its first two derivatives.
namespace spectralgas::orthopoly {

// Highest degree accepted by eval/zeros.
inline constexpr int kMaxDegree = 100;

enum class FamilyKind { hermite, laguerre, jacobi };

// p_{k+1}(x) = (a x + b) p_k(x) - c p_{k-1}(x)
struct Recurrence {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

class PolynomialFamily {
 public:
  static PolynomialFamily hermite();
  // Requires alpha > -1.
  static PolynomialFamily laguerre(double alpha);
  // Requires alpha > -1 and beta > -1.
  static PolynomialFamily jacobi(double alpha, double beta);

  FamilyKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  Interval support() const;
  std::string name() const;

  // Hypergeometric ODE sigma f'' + tau f' + lambda_n f = 0.
  double sigma(double x) const;
  double tau(double x) const;
  double eigenvalue(int degree) const;

  Recurrence recurrence(int k) const;
  double leading_coefficient(int degree) const;

  bool operator==(const PolynomialFamily&) const = default;

 private:
  PolynomialFamily(FamilyKind kind, double alpha, double beta)
      : kind_(kind), alpha_(alpha), beta_(beta) {}

  FamilyKind kind_ = FamilyKind::hermite;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

struct PolyValue {
  double value = 0.0;
  double derivative = 0.0;
  double second_derivative = 0.0;
};

// Mantissas of f, f', f'' sharing a common binary exponent:
// f = value * 2^exponent. The recurrence is rescaled whenever the
// running values exceed 2^900, so this never overflows for finite x.
struct ScaledPolyValue {
  double value = 0.0;
  double derivative = 0.0;
  double second_derivative = 0.0;
  int exponent = 0;

  PolyValue unscaled() const;
};

ScaledPolyValue eval_scaled(const PolynomialFamily& family, int degree, double x);

// Throws CapabilityError for degree > kMaxDegree, DomainError for
// non-finite x, NumericError if the result is outside double range.
PolyValue eval(const PolynomialFamily& family, int degree, double x);

// Zeros by safeguarded Newton inside the interlacing brackets formed by the
// zeros of degree-1 (computed recursively from the analytic degree-1 root).
// Each reported zero satisfies |f| <= kZeroResidual * max(1, |f'| * spacing)
// where spacing is the distance to its nearest neighbour.
inline constexpr double kZeroResidual = 1e-10;
ChargeConfiguration zeros(const PolynomialFamily& family, int degree);

// w(x): e^{-x^2}, x^alpha e^{-x}, (1-x)^alpha (1+x)^beta. Defined on the
// closed support where finite; DomainError elsewhere.
double weight(const PolynomialFamily& family, double x);

struct VandermondeCheck {
  double det = 0.0;
  double vandermonde = 0.0;
  double ratio = 0.0;
};

// det[p_i(x_j)]_{i,j<n} against prod_{i<j}(x_j - x_i). Requires n <= 12.
VandermondeCheck vandermonde_det_check(const PolynomialFamily& family,
                                       const ChargeConfiguration& points);

}  // namespace spectralgas::orthopoly
