#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectralgas/configuration.hpp"
#include "spectralgas/errors.hpp"
#include "spectralgas/potentials.hpp"

// Log-gas electrostatics: n unit charges with pairwise logarithmic repulsion
// in the external field -ln g(x).
//
//   energy(x)   = -sum_{i<j} ln|x_i - x_j| - sum_k ln g(x_k)
//   residual_k  =  sum_{j!=k} 1/(x_k - x_j) + D(x_k)  = -d energy / d x_k
//
// The residual vanishes exactly at the zeros of the family's polynomial.
namespace spectralgas::stieltjes {

using potentials::StatePrefactor;

struct EnergyReport {
  double energy = 0.0;
  std::vector<double> gradient;
  double grad_norm = 0.0;
  double min_gap = 0.0;
};

// DomainError when a charge is outside the open support of the prefactor.
EnergyReport energy(const ChargeConfiguration& config, const StatePrefactor& pref);

std::vector<double> stationarity_residual(const ChargeConfiguration& config,
                                          const StatePrefactor& pref);

// Full energy Hessian at raw positions (no validation).
Eigen::MatrixXd energy_hessian(std::span<const double> x, const StatePrefactor& pref);

// Diagonal of the energy Hessian, sum_{j!=k} 1/(x_k-x_j)^2 - D'(x_k).
std::vector<double> energy_hessian_diagonal(const ChargeConfiguration& config,
                                            const StatePrefactor& pref);

struct SumIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
};

// lhs = sum_{j!=k} 1/(x_k - x_j); rhs = f''(x_k) / (2 f'(x_k)) with
// f = prod_j (x - x_j) expanded into monomial coefficients.
SumIdentity sum_identity(const ChargeConfiguration& config, std::size_t k);

// Raised by equilibrate when the iteration cap is hit; carries the last iterate.
class NonConvergenceError : public NumericError {
 public:
  NonConvergenceError(const std::string& what, std::ptrdiff_t iterations,
                      ChargeConfiguration last)
      : NumericError(what, iterations), last_iterate_(std::move(last)) {}

  const ChargeConfiguration& last_iterate() const { return last_iterate_; }

 private:
  ChargeConfiguration last_iterate_;
};

struct EquilibrateOptions {
  double grad_tol = 1e-10;
  int max_iterations = 200;
};

// Largest n accepted by equilibrate.
inline constexpr int kMaxCharges = 100;

// Arcsine-distributed starting points inside the support (Chebyshev nodes,
// scaled by sqrt(2n) for Hermite and by the zero envelope for Laguerre).
ChargeConfiguration initial_configuration(const StatePrefactor& pref, int n);

// Damped Newton on the stationarity system, Armijo backtracking on the
// energy with an ordering/support guard, gradient-descent fallback when the
// Newton direction is rejected. NumericError carries the iteration count.
ChargeConfiguration equilibrate(const StatePrefactor& pref, int n,
                                const std::optional<ChargeConfiguration>& init = std::nullopt,
                                const EquilibrateOptions& options = {});

enum class PairConvention {
  unordered,  // sum over i < j
  ordered,    // sum over i != j (each pair twice)
};

enum class ActionPotential {
  superpotential,  // sum_j int W(x_j) with the closed-form antiderivative
  log_weight,      // sum_j ln w(x_j) = 2 sum_j ln g(x_j), since W = d ln w / dx
};

struct ActionOptions {
  PairConvention pairs = PairConvention::ordered;
  ActionPotential potential = ActionPotential::superpotential;
};

struct ActionValue {
  double real_part = 0.0;
  double imag_part = 0.0;
  double pair_term = 0.0;
  double potential_term = 0.0;

  std::complex<double> value() const { return {real_part, imag_part}; }
};

// S = i [ sum_pairs ln|x_i - x_j| + potential term ]; purely imaginary for
// real configurations. With {ordered, log_weight}, S/i = -2 energy.
ActionValue quantum_action(const ChargeConfiguration& config, const StatePrefactor& pref,
                           const ActionOptions& options = {});

// d(S/i)/dx_k, analytic.
std::vector<double> action_gradient(const ChargeConfiguration& config,
                                    const StatePrefactor& pref, const ActionOptions& options = {});

}  // namespace spectralgas::stieltjes
