#include "spectralgas/kirchhoff.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "spectralgas/stieltjes.hpp"

namespace spectralgas::kirchhoff {
namespace {

struct ClosestPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double gap = std::numeric_limits<double>::infinity();
};

ClosestPair closest_pair(const std::vector<Complex>& z) {
  ClosestPair best;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const double d = std::abs(z[i] - z[j]);
      if (d < best.gap) best = {i, j, d};
    }
  }
  return best;
}

// Velocity without collision checks; callers guarantee distinct poles.
std::vector<Complex> velocity(const std::vector<Complex>& z, double gamma,
                              const FlowOptions& options) {
  const std::size_t n = z.size();
  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) s += 1.0 / (z[i] - z[j]);
    }
    Complex u = 0.0;
    if (options.pref) {
      u = options.pref->drift(z[i]);
      if (options.flow == Flow::kirchhoff && options.sign == PotentialSign::literal) u = -u;
    }
    if (options.flow == Flow::kirchhoff) {
      v[i] = Complex(0.0, 2.0 * gamma) * s + Complex(0.0, 1.0) * u;
    } else {
      v[i] = s + u;
    }
  }
  return v;
}

double real_min_gap(const std::vector<Complex>& z) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < z.size(); ++i) g = std::min(g, z[i].real() - z[i - 1].real());
  return g;
}

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
// Fifth-order weights are row 6 of kA; error weights are b5 - b4.
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0, -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

}  // namespace

std::vector<Complex> rhs(const PoleState& state, const FlowOptions& options) {
  const ClosestPair cp = closest_pair(state.poles);
  if (cp.gap < options.collision_threshold) {
    throw CollisionError(fmt::format("poles {} and {} are {} apart (threshold {})", cp.i, cp.j,
                                     cp.gap, options.collision_threshold),
                         cp.i, cp.j);
  }
  return velocity(state.poles, state.gamma, options);
}

Trajectory integrate(const PoleState& state, const FlowOptions& options, double t_end,
                     double tol) {
  if (!(t_end > state.time)) {
    throw ConfigurationError(
        fmt::format("t_end ({}) must exceed the initial time ({})", t_end, state.time));
  }
  if (!(tol >= 1e-12 && tol <= 1e-3)) {
    throw ConfigurationError(fmt::format("integration tolerance {} outside [1e-12, 1e-3]", tol));
  }
  const bool relaxation = options.flow == Flow::relaxation;
  if (relaxation) {
    for (std::size_t i = 0; i < state.poles.size(); ++i) {
      if (state.poles[i].imag() != 0.0 || (i > 0 && !(state.poles[i - 1].real() < state.poles[i].real()))) {
        throw ConfigurationError("relaxation flow needs real, strictly increasing positions");
      }
    }
  }

  Trajectory traj;
  traj.stats.min_step = std::numeric_limits<double>::infinity();
  traj.samples.push_back({state.time, state.poles});

  const std::size_t n = state.poles.size();
  std::vector<Complex> y = state.poles;
  double t = state.time;
  std::vector<Complex> k1 = rhs({y, t, state.gamma}, options);

  double vmax = 0.0;
  for (const Complex& v : k1) vmax = std::max(vmax, std::abs(v));
  const double span = t_end - t;
  double h = std::min(span, vmax > 0.0 ? 0.01 * std::max(1.0, closest_pair(y).gap) / vmax : span);
  h = std::max(h, 1e-12 * span);

  constexpr double kSafety = 0.9;
  constexpr double kAlpha = 0.7 / 5.0;
  constexpr double kBeta = 0.4 / 5.0;
  double err_prev = 1.0;
  std::array<std::vector<Complex>, 7> k;
  const double h_floor = 1e-14 * std::max(1.0, std::abs(t_end));

  while (t < t_end) {
    if (t + h > t_end) h = t_end - t;
    bool stage_collision = false;
    ClosestPair worst;
    k[0] = k1;
    std::vector<Complex> stage(n);
    for (int s = 1; s < 7 && !stage_collision; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex acc = y[i];
        for (int m = 0; m < s; ++m) acc += h * kA[s][m] * k[m][i];
        stage[i] = acc;
      }
      const ClosestPair cp = closest_pair(stage);
      if (cp.gap < options.collision_threshold) {
        stage_collision = true;
        worst = cp;
        break;
      }
      k[s] = velocity(stage, state.gamma, options);
    }

    double err = std::numeric_limits<double>::infinity();
    bool guard_ok = !stage_collision;
    if (!stage_collision) {
      // stage holds the 5th-order solution (FSAL row).
      err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        Complex e = 0.0;
        for (int s = 0; s < 7; ++s) e += kE[s] * k[s][i];
        e *= h;
        err = std::max(err, std::abs(e) / (tol * std::max(1.0, std::abs(y[i]))));
      }
      if (relaxation) {
        bool ordered = true;
        for (std::size_t i = 1; i < n; ++i) ordered = ordered && stage[i - 1].real() < stage[i].real();
        guard_ok = ordered && (n < 2 || real_min_gap(stage) >= kGapGuardFactor * real_min_gap(y));
        if (guard_ok && options.pref) {
          for (const Complex& z : stage) guard_ok = guard_ok && options.pref->support().contains(z.real());
        }
      }
    }

    if (guard_ok && err <= 1.0) {
      t = (t_end - (t + h) <= 1e-15 * std::max(1.0, std::abs(t_end))) ? t_end : t + h;
      y = stage;
      k1 = k[6];
      traj.stats.accepted++;
      traj.stats.min_step = std::min(traj.stats.min_step, h);
      traj.samples.push_back({t, y});
      const double e = std::max(err, 1e-10);
      double factor = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev, kBeta);
      factor = std::clamp(factor, 0.2, 5.0);
      err_prev = e;
      h *= factor;
    } else {
      traj.stats.rejected++;
      if (stage_collision || !guard_ok || !std::isfinite(err)) {
        h *= 0.25;
      } else {
        h *= std::clamp(kSafety * std::pow(err, -1.0 / 5.0), 0.1, 0.9);
      }
      if (h < h_floor) {
        if (stage_collision) {
          throw TrajectoryCollisionError(
              fmt::format("poles {} and {} collide near t = {}", worst.i, worst.j, t), worst.i,
              worst.j, traj);
        }
        throw NumericError(fmt::format("step size underflow at t = {}", t),
                           traj.stats.accepted);
      }
    }
  }
  return traj;
}

RelaxResult relax(const ChargeConfiguration& config, const StatePrefactor& pref,
                  const RelaxOptions& options) {
  const Interval support = pref.support();
  const std::size_t n = config.size();
  std::vector<double> x = config.values();
  ChargeConfiguration current(x, support);

  auto residual_norm = [](const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s);
  };

  std::vector<double> r = stieltjes::stationarity_residual(current, pref);
  double rn = residual_norm(r);
  double e = stieltjes::energy(current, pref).energy;

  RelaxResult result;
  double h = options.initial_step;
  bool last_rejection_support = false;
  while (rn > options.tol) {
    if (result.steps >= options.max_steps) {
      throw NumericError(fmt::format("relax: residual {} after {} steps", rn, result.steps),
                         result.steps);
    }
    Eigen::MatrixXd a = stieltjes::energy_hessian(x, pref);
    a.diagonal().array() += 1.0 / h;
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd dx = a.ldlt().solve(rv);

    std::vector<double> y(x);
    for (std::size_t k = 0; k < n; ++k) y[k] += dx[static_cast<Eigen::Index>(k)];

    bool ok = dx.allFinite();
    bool support_violation = false;
    double gap_before = current.min_gap();
    double gap_after = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; ok && k < n; ++k) {
      if (!support.contains(y[k])) {
        ok = false;
        support_violation = true;
      }
      if (k > 0) {
        if (!(y[k - 1] < y[k])) ok = false;
        gap_after = std::min(gap_after, y[k] - y[k - 1]);
      }
    }
    if (ok && n > 1 && gap_after < kCollisionThreshold) {
      result.collision_events++;
      ok = false;
    }
    if (ok && n > 1 && gap_after < kGapGuardFactor * gap_before) ok = false;

    double ey = 0.0;
    std::vector<double> ry;
    if (ok) {
      ChargeConfiguration trial(y, support);
      ey = stieltjes::energy(trial, pref).energy;
      ry = stieltjes::stationarity_residual(trial, pref);
      const double ryn = residual_norm(ry);
      ok = std::isfinite(ey) && (ey <= e + 1e-13 * std::max(1.0, std::abs(e)) || ryn < rn);
    }

    if (ok) {
      if (n > 1) result.min_gap_ratio = std::min(result.min_gap_ratio, gap_after / gap_before);
      x = std::move(y);
      current = ChargeConfiguration(x, support);
      r = std::move(ry);
      rn = residual_norm(r);
      e = ey;
      result.steps++;
      h = std::min(2.0 * h, 1e12);
      last_rejection_support = false;
    } else {
      result.rejected++;
      last_rejection_support = support_violation;
      h *= 0.25;
      if (h < 1e-14) {
        if (last_rejection_support) {
          throw DomainError("relax: flow is driven into the support boundary");
        }
        throw NumericError("relax: pseudo-time step underflow", result.steps);
      }
    }
  }
  result.config = current;
  result.residual_norm = rn;
  return result;
}

}  // namespace spectralgas::kirchhoff
