#include "spectralgas/stieltjes.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

namespace spectralgas::stieltjes {
namespace {

void require_in_support(const ChargeConfiguration& config, const StatePrefactor& pref) {
  const Interval s = pref.support();
  for (std::size_t k = 0; k < config.size(); ++k) {
    if (!s.contains(config[k])) {
      throw DomainError(fmt::format("charge {} at {} is not strictly inside the support of {}", k,
                                    config[k], pref.family().name()));
    }
  }
  for (std::size_t k = 1; k < config.size(); ++k) {
    if (config[k] == config[k - 1]) {
      throw DegenerateInputError(fmt::format("charges {} and {} coincide", k - 1, k));
    }
  }
}

double pair_sum(std::span<const double> x, std::size_t k) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j != k) s += 1.0 / (x[k] - x[j]);
  }
  return s;
}

double log_pair_sum(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) s += std::log(std::abs(x[j] - x[i]));
  }
  return s;
}

double energy_value(std::span<const double> x, const StatePrefactor& pref) {
  double e = -log_pair_sum(x);
  for (double xi : x) e -= pref.log_g(xi);
  return e;
}

std::vector<double> residual_values(std::span<const double> x, const StatePrefactor& pref) {
  std::vector<double> r(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r[k] = pair_sum(x, k) + pref.drift(x[k]);
  return r;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

bool admissible(const std::vector<double>& x, const Interval& support) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k]) || !support.contains(x[k])) return false;
    if (k > 0 && !(x[k - 1] < x[k])) return false;
  }
  return true;
}

}  // namespace

Eigen::MatrixXd energy_hessian(std::span<const double> x, const StatePrefactor& pref) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double diag = -pref.drift_prime(x[k]);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == k) continue;
      const double inv = 1.0 / (x[k] - x[j]);
      const double q = inv * inv;
      h(k, j) = -q;
      diag += q;
    }
    h(k, k) = diag;
  }
  return h;
}

EnergyReport energy(const ChargeConfiguration& config, const StatePrefactor& pref) {
  require_in_support(config, pref);
  EnergyReport report;
  const auto x = config.positions();
  report.energy = energy_value(x, pref);
  report.gradient = residual_values(x, pref);
  for (double& g : report.gradient) g = -g;
  report.grad_norm = norm(report.gradient);
  report.min_gap = config.min_gap();
  if (!std::isfinite(report.energy) || !std::isfinite(report.grad_norm)) {
    throw DomainError("energy is not finite for this configuration");
  }
  return report;
}

std::vector<double> stationarity_residual(const ChargeConfiguration& config,
                                          const StatePrefactor& pref) {
  require_in_support(config, pref);
  return residual_values(config.positions(), pref);
}

std::vector<double> energy_hessian_diagonal(const ChargeConfiguration& config,
                                            const StatePrefactor& pref) {
  require_in_support(config, pref);
  const auto x = config.positions();
  std::vector<double> d(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    double s = -pref.drift_prime(x[k]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != k) s += 1.0 / ((x[k] - x[j]) * (x[k] - x[j]));
    }
    d[k] = s;
  }
  return d;
}

SumIdentity sum_identity(const ChargeConfiguration& config, std::size_t k) {
  if (k >= config.size()) {
    throw DomainError(fmt::format("index {} out of range for {} charges", k, config.size()));
  }
  const auto x = config.positions();
  // Monomial coefficients of prod (t - x_j), lowest degree first.
  std::vector<double> c{1.0};
  for (double root : x) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= root * c[i];
    }
    c = std::move(next);
  }
  const double t = x[k];
  double d1 = 0.0, d2 = 0.0, scale = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) {
    d1 = d1 * t + static_cast<double>(i) * c[i];
    scale = scale * std::abs(t) + static_cast<double>(i) * std::abs(c[i]);
  }
  for (std::size_t i = c.size(); i-- > 2;) {
    d2 = d2 * t + static_cast<double>(i * (i - 1)) * c[i];
  }
  if (std::abs(d1) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
    throw DegenerateInputError(
        fmt::format("f'(x_{}) is indistinguishable from zero; charges too close", k));
  }
  return {pair_sum(x, k), d2 / (2.0 * d1)};
}

ChargeConfiguration initial_configuration(const StatePrefactor& pref, int n) {
  if (n < 1) throw DomainError(fmt::format("need at least one charge, got {}", n));
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    // Increasing Chebyshev nodes in (-1, 1).
    const double c = -std::cos(std::numbers::pi * (k + 0.5) / n);
    switch (pref.family().kind()) {
      case orthopoly::FamilyKind::hermite:
        x[k] = std::sqrt(2.0 * n) * c;
        break;
      case orthopoly::FamilyKind::laguerre: {
        const double hi = 4.0 * n + 2.0 * std::max(pref.family().alpha(), 0.0) + 2.0;
        x[k] = 0.5 * hi * (1.0 + c);
        break;
      }
      case orthopoly::FamilyKind::jacobi:
        x[k] = c;
        break;
    }
  }
  return ChargeConfiguration(std::move(x), pref.support());
}

namespace {

// Full Newton steps after convergence, kept while the residual still
// shrinks. Brings the residual to the rounding floor, which downstream
// checks near the charges (errors amplified by 1/distance^2) rely on.
ChargeConfiguration polish(std::vector<double> x, double rnorm, const StatePrefactor& pref) {
  const Interval support = pref.support();
  const int n = static_cast<int>(x.size());
  for (int it = 0; it < 4; ++it) {
    const std::vector<double> r = residual_values(x, pref);
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
    const Eigen::VectorXd step = energy_hessian(x, pref).ldlt().solve(rv);
    if (!step.allFinite()) break;
    std::vector<double> y(x);
    for (int k = 0; k < n; ++k) y[k] += step[k];
    if (!admissible(y, support)) break;
    const double ryn = norm(residual_values(y, pref));
    if (!(ryn < rnorm)) break;
    x = std::move(y);
    rnorm = ryn;
  }
  return ChargeConfiguration(std::move(x), support);
}

}  // namespace

ChargeConfiguration equilibrate(const StatePrefactor& pref, int n,
                                const std::optional<ChargeConfiguration>& init,
                                const EquilibrateOptions& options) {
  if (n < 1) throw DomainError(fmt::format("equilibrate needs n >= 1, got {}", n));
  if (n > kMaxCharges) {
    throw CapabilityError(fmt::format("equilibrate supports n <= {}, got {}", kMaxCharges, n));
  }
  ChargeConfiguration start = init ? *init : initial_configuration(pref, n);
  if (static_cast<int>(start.size()) != n) {
    throw ConfigurationError(
        fmt::format("initial configuration has {} charges, expected {}", start.size(), n));
  }
  require_in_support(start, pref);

  const Interval support = pref.support();
  std::vector<double> x = start.values();
  std::vector<double> r = residual_values(x, pref);
  double rnorm = norm(r);
  double e = energy_value(x, pref);

  constexpr double kArmijo = 1e-4;
  for (int it = 0; it < options.max_iterations; ++it) {
    if (rnorm <= options.grad_tol) return polish(std::move(x), rnorm, pref);

    // Newton direction: Hessian(energy) * step = residual (= -gradient).
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(energy_hessian(x, pref));
    Eigen::VectorXd step = ldlt.solve(rv);
    const bool newton_ok = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                           step.allFinite() && step.dot(rv) > 0.0;

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const bool use_newton = attempt == 0;
      if (use_newton && !newton_ok) continue;
      const Eigen::VectorXd dir = use_newton ? step : Eigen::VectorXd(rv);
      const double slope = dir.dot(rv);  // -grad . dir
      double t = 1.0;
      for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
        std::vector<double> y(x);
        for (int k = 0; k < n; ++k) y[k] += t * dir[k];
        if (!admissible(y, support)) continue;
        const double ey = energy_value(y, pref);
        std::vector<double> ry = residual_values(y, pref);
        const double ryn = norm(ry);
        if (!std::isfinite(ey) || !std::isfinite(ryn)) continue;
        if (ey <= e - kArmijo * t * slope || (use_newton && t == 1.0 && ryn < 0.5 * rnorm)) {
          x = std::move(y);
          r = std::move(ry);
          rnorm = ryn;
          e = ey;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      throw NonConvergenceError(
          fmt::format("equilibrate: no acceptable step at iteration {} (|residual| = {})", it,
                      rnorm),
          it, ChargeConfiguration(x, support));
    }
  }
  if (rnorm <= options.grad_tol) return polish(std::move(x), rnorm, pref);
  throw NonConvergenceError(fmt::format("equilibrate did not reach |residual| <= {} in {} "
                                        "iterations (last {})",
                                        options.grad_tol, options.max_iterations, rnorm),
                            options.max_iterations, ChargeConfiguration(x, support));
}

ActionValue quantum_action(const ChargeConfiguration& config, const StatePrefactor& pref,
                           const ActionOptions& options) {
  require_in_support(config, pref);
  const auto x = config.positions();
  ActionValue s;
  const double factor = options.pairs == PairConvention::ordered ? 2.0 : 1.0;
  s.pair_term = factor * log_pair_sum(x);
  for (double xi : x) {
    s.potential_term += options.potential == ActionPotential::superpotential
                            ? pref.superpotential_antiderivative(xi)
                            : 2.0 * pref.log_g(xi);
  }
  s.real_part = 0.0;
  s.imag_part = pref.hbar() * (s.pair_term + s.potential_term);
  return s;
}

std::vector<double> action_gradient(const ChargeConfiguration& config,
                                    const StatePrefactor& pref, const ActionOptions& options) {
  require_in_support(config, pref);
  const auto x = config.positions();
  const double factor = options.pairs == PairConvention::ordered ? 2.0 : 1.0;
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double pot = options.potential == ActionPotential::superpotential
                           ? pref.superpotential(x[k])
                           : 2.0 * pref.drift(x[k]);
    g[k] = pref.hbar() * (factor * pair_sum(x, k) + pot);
  }
  return g;
}

}  // namespace spectralgas::stieltjes
