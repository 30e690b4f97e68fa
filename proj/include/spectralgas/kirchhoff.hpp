#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "spectralgas/configuration.hpp"
#include "spectralgas/errors.hpp"
#include "spectralgas/potentials.hpp"

// Pole dynamics of the Burgers field.
//
// Kirchhoff flow (point vortices):
//   dx_i/dt = 2 Gamma i sum_{j!=i} 1/(x_i - x_j) + i U(x_i)
// with U = D (stationary sign, default) or U = W = -D (literal sign). With
// Gamma = 1/2 and the stationary sign the velocity is i times the Stieltjes
// residual, so the stationary set is the zero set of the polynomial family.
//
// Relaxation flow (dissipative gradient flow of the log-gas energy):
//   dx_i/dt = sum_{j!=i} 1/(x_i - x_j) + D(x_i)
namespace spectralgas::kirchhoff {

using potentials::StatePrefactor;
using Complex = std::complex<double>;

inline constexpr double kCollisionThreshold = 1e-9;

struct PoleState {
  std::vector<Complex> poles;
  double time = 0.0;
  double gamma = 0.5;
};

enum class Flow { kirchhoff, relaxation };
enum class PotentialSign { stationary, literal };

struct FlowOptions {
  std::optional<StatePrefactor> pref;  // absent: W == 0
  Flow flow = Flow::kirchhoff;
  PotentialSign sign = PotentialSign::stationary;
  double collision_threshold = kCollisionThreshold;
};

// CollisionError naming the closest pair when it is nearer than the threshold.
std::vector<Complex> rhs(const PoleState& state, const FlowOptions& options = {});

struct TrajectorySample {
  double time = 0.0;
  std::vector<Complex> poles;
};

struct StepStatistics {
  int accepted = 0;
  int rejected = 0;
  double min_step = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  StepStatistics stats;

  const TrajectorySample& back() const { return samples.back(); }
};

// Raised by integrate on a collision; holds the trajectory up to that point.
class TrajectoryCollisionError : public CollisionError {
 public:
  TrajectoryCollisionError(const std::string& what, std::size_t i, std::size_t j,
                           Trajectory partial)
      : CollisionError(what, i, j), partial_(std::move(partial)) {}

  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

// In the relaxation flow an accepted step never reduces the minimum gap
// below this fraction of its value before the step.
inline constexpr double kGapGuardFactor = 0.5;

// Dormand-Prince 5(4) with PI step control. Each accepted step satisfies
// max_i |err_i| / max(1, |x_i|) <= tol. tol must lie in [1e-12, 1e-3].
Trajectory integrate(const PoleState& state, const FlowOptions& options, double t_end,
                     double tol);

struct RelaxOptions {
  double tol = 1e-10;
  int max_steps = 10000;
  double initial_step = 0.1;
};

struct RelaxResult {
  ChargeConfiguration config;
  double residual_norm = 0.0;
  int steps = 0;
  int rejected = 0;
  // Trial steps that brought two charges within kCollisionThreshold.
  int collision_events = 0;
  // Smallest ratio min_gap(after) / min_gap(before) over accepted steps.
  double min_gap_ratio = 1.0;
};

// Follows the relaxation flow with linearly implicit Euler steps
// (I/h + Hess) dx = residual and a growing pseudo-time step h, until the
// residual norm is <= tol. The step guard rejects steps that cross charges,
// leave the support or violate kGapGuardFactor. DomainError when the flow is
// pushed against the support boundary.
RelaxResult relax(const ChargeConfiguration& config, const StatePrefactor& pref,
                  const RelaxOptions& options = {});

}  // namespace spectralgas::kirchhoff
