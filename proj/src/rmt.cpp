#include "spectralgas/rmt.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "quadrature.hpp"
#include "spectralgas/errors.hpp"
#include "spectralgas/stieltjes.hpp"

namespace spectralgas::rmt {
namespace {

using orthopoly::FamilyKind;

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

// Runs body(i) for i in [0, count) over up to `threads` workers, each
// taking a contiguous block.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(count, begin + block);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
}

double log_weight(const PolynomialFamily& family, double x) {
  switch (family.kind()) {
    case FamilyKind::hermite:
      return -x * x;
    case FamilyKind::laguerre:
      return family.alpha() * std::log(x) - x;
    case FamilyKind::jacobi:
      return family.alpha() * std::log1p(-x) + family.beta() * std::log1p(x);
  }
  return 0.0;
}

// Integral of the weight over the support.
double weight_mass(const PolynomialFamily& family) {
  switch (family.kind()) {
    case FamilyKind::hermite:
      return std::sqrt(std::numbers::pi);
    case FamilyKind::laguerre:
      return std::tgamma(family.alpha() + 1.0);
    case FamilyKind::jacobi: {
      const double a = family.alpha();
      const double b = family.beta();
      return std::exp2(a + b + 1.0) * std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                                               std::lgamma(a + b + 2.0));
    }
  }
  return 0.0;
}

double vandermonde_squared(std::span<const double> x) {
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) v *= (x[j] - x[i]) * (x[j] - x[i]);
  }
  return v;
}

// Iterated integral of prod w(x_i) Delta^2, assembled in log space so that
// far-tail evaluations give 0 rather than 0 * inf.
double nested_integral(const PolynomialFamily& family, int n,
                       std::vector<detail::Integrator>& levels, std::vector<double>& x,
                       int depth, double log_acc, double& error) {
  const Interval support = family.support();
  auto integrand = [&](double t) {
    x[depth] = t;
    double lw = log_acc + log_weight(family, t);
    for (int i = 0; i < depth; ++i) lw += 2.0 * std::log(std::abs(t - x[i]));
    if (depth + 1 == n) return std::exp(lw);
    if (!(lw > -745.0)) return 0.0;
    return nested_integral(family, n, levels, x, depth + 1, lw, error);
  };
  const detail::QuadratureResult r = levels[depth](support, integrand, 1e-10);
  if (depth == 0) error = r.error;
  return r.value;
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(index), hi32(index)};
  return std::mt19937_64(seq);
}

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SPECTRALGAS_MAX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
  }
  return hw;
}

SpectralSample sample_gue(int dim, std::uint64_t seed, std::uint64_t index) {
  if (dim < 1 || dim > kMaxDimension) {
    throw CapabilityError(fmt::format("GUE dimension must lie in [1, {}], got {}", kMaxDimension, dim));
  }
  std::mt19937_64 rng = make_stream(seed, index);
  std::normal_distribution<double> diag(0.0, std::sqrt(0.5));
  std::normal_distribution<double> off(0.0, 0.5);

  Eigen::MatrixXcd h(dim, dim);
  double trace = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = diag(rng);
    h(i, i) = d;
    trace += d;
    for (int j = i + 1; j < dim; ++j) {
      const double re = off(rng);
      const double im = off(rng);
      h(i, j) = std::complex<double>(re, im);
      h(j, i) = std::complex<double>(re, -im);
    }
  }

  SpectralSample s;
  s.dim = dim;
  s.seed = seed;
  s.index = index;
  s.trace = trace;
  s.frobenius_norm = h.norm();
  if (dim == 1) {
    s.eigenvalues = {h(0, 0).real()};
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError(fmt::format("Hermitian eigensolver failed for sample {}", index),
                       static_cast<std::ptrdiff_t>(index));
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

std::vector<double> sample_gue_eigenvalues(int dim, std::uint64_t seed, std::size_t count,
                                           int threads) {
  if (dim < 1 || dim > kMaxDimension) {
    throw CapabilityError(fmt::format("GUE dimension must lie in [1, {}], got {}", kMaxDimension, dim));
  }
  std::vector<double> out(count * static_cast<std::size_t>(dim));
  parallel_for(count, threads, [&](std::size_t i) {
    const SpectralSample s = sample_gue(dim, seed, i);
    std::copy(s.eigenvalues.begin(), s.eigenvalues.end(), out.begin() + static_cast<std::ptrdiff_t>(i * dim));
  });
  return out;
}

double log_joint_pdf(const ChargeConfiguration& config, const PolynomialFamily& family) {
  const Interval support = family.support();
  double s = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (!support.contains_closed(config[i])) {
      throw DomainError(fmt::format("point {} = {} lies outside the support of {}", i, config[i],
                                    family.name()));
    }
    s += log_weight(family, config[i]);
    for (std::size_t j = i + 1; j < config.size(); ++j) {
      s += 2.0 * std::log(std::abs(config[j] - config[i]));
    }
  }
  return s;
}

double joint_pdf(const ChargeConfiguration& config, const PolynomialFamily& family,
                 bool normalized) {
  double v = 1.0;
  for (std::size_t i = 0; i < config.size(); ++i) v *= orthopoly::weight(family, config[i]);
  v *= vandermonde_squared(config.positions());
  if (normalized) {
    v /= joint_pdf_normalization(family, static_cast<int>(config.size())).value;
  }
  return v;
}

NormalizationConstant joint_pdf_normalization(const PolynomialFamily& family, int n,
                                              std::size_t mc_samples, std::uint64_t seed) {
  if (n < 1) throw DomainError("normalization needs n >= 1");
  if (n > 12) {
    throw CapabilityError(fmt::format("normalized joint density supports n <= 12, got {}", n));
  }
  NormalizationConstant c;
  if (n <= 3) {
    std::vector<detail::Integrator> levels(static_cast<std::size_t>(n));
    std::vector<double> x(static_cast<std::size_t>(n));
    double err = 0.0;
    c.value = nested_integral(family, n, levels, x, 0, 0.0, err);
    c.error = err;
    c.method = NormalizationConstant::Method::quadrature;
    return c;
  }

  // Importance sampling: iid coordinates from a proposal q spread like the
  // eigenvalues (Hermite N(0, n/2); Laguerre Gamma(alpha+1) scaled to mean
  // n + alpha; Jacobi the normalized weight). Estimator mean of
  // Delta^2 prod w(x_i) / q(x_i).
  std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(n));
  const double a = family.alpha();
  const double hermite_var = std::max(0.5, 0.5 * n);
  const double lag_scale = std::max(1.0, (n + std::max(a, 0.0)) / (a + 1.0));
  std::normal_distribution<double> normal(0.0, std::sqrt(hermite_var));
  std::gamma_distribution<double> gamma_lag(a + 1.0, lag_scale);
  std::gamma_distribution<double> gamma_a(a + 1.0, 1.0);
  std::gamma_distribution<double> gamma_b(family.beta() + 1.0, 1.0);
  // log of w(x) / q(x) for each family, up to the x-dependent part below.
  double log_ratio_const = 0.0;
  switch (family.kind()) {
    case FamilyKind::hermite:
      log_ratio_const = 0.5 * std::log(2.0 * std::numbers::pi * hermite_var);
      break;
    case FamilyKind::laguerre:
      log_ratio_const = std::lgamma(a + 1.0) + (a + 1.0) * std::log(lag_scale);
      break;
    case FamilyKind::jacobi:
      log_ratio_const = std::log(weight_mass(family));
      break;
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < mc_samples; ++s) {
    double log_ratio = n * log_ratio_const;
    for (int i = 0; i < n; ++i) {
      switch (family.kind()) {
        case FamilyKind::hermite:
          x[i] = normal(rng);
          log_ratio += -x[i] * x[i] + x[i] * x[i] / (2.0 * hermite_var);
          break;
        case FamilyKind::laguerre:
          x[i] = gamma_lag(rng);
          log_ratio += -x[i] * (1.0 - 1.0 / lag_scale);
          break;
        case FamilyKind::jacobi: {
          const double ga = gamma_a(rng);
          const double gb = gamma_b(rng);
          x[i] = 2.0 * gb / (ga + gb) - 1.0;  // (1+x)/2 ~ Beta(beta+1, alpha+1)
          break;
        }
      }
    }
    const double v = vandermonde_squared(x) * std::exp(log_ratio);
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  const double var = mc_samples > 1 ? m2 / static_cast<double>(mc_samples - 1) : 0.0;
  c.value = mean;
  c.error = std::sqrt(var / static_cast<double>(mc_samples));
  c.method = NormalizationConstant::Method::monte_carlo;
  return c;
}

ModeReport mode_of_joint_pdf(const PolynomialFamily& family, int n) {
  if (n < 1 || n > 40) throw DomainError(fmt::format("mode_of_joint_pdf needs 1 <= n <= 40, got {}", n));
  ModeReport report;
  report.prefactor_equilibrium = stieltjes::equilibrate(potentials::make_prefactor(family), n);

  std::optional<PolynomialFamily> lowered;
  switch (family.kind()) {
    case FamilyKind::hermite:
      lowered = family;
      break;
    case FamilyKind::laguerre:
      if (family.alpha() - 1.0 > -1.0) lowered = PolynomialFamily::laguerre(family.alpha() - 1.0);
      break;
    case FamilyKind::jacobi:
      if (family.alpha() - 1.0 > -1.0 && family.beta() - 1.0 > -1.0) {
        lowered = PolynomialFamily::jacobi(family.alpha() - 1.0, family.beta() - 1.0);
      }
      break;
  }
  if (!lowered) return report;
  const ChargeConfiguration mode = stieltjes::equilibrate(potentials::make_prefactor(*lowered), n);
  report.weight_mode = mode;

  const double base = log_joint_pdf(mode, family);
  const double scale = 0.01 * (n > 1 ? mode.min_gap() : 1.0);
  std::mt19937_64 rng = make_stream(0x6d6f6465, static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  report.max_log_gain = -std::numeric_limits<double>::infinity();
  const Interval support = family.support();
  for (int t = 0; t < 100; ++t) {
    std::vector<double> y = mode.values();
    for (double& v : y) v += scale * u(rng);
    bool ok = true;
    for (std::size_t k = 0; k < y.size(); ++k) {
      ok = ok && support.contains(y[k]) && (k == 0 || y[k - 1] < y[k]);
    }
    if (!ok) continue;
    const double gain = log_joint_pdf(ChargeConfiguration(y, support), family) - base;
    report.max_log_gain = std::max(report.max_log_gain, gain);
    report.perturbations++;
  }
  if (report.max_log_gain >= 0.0) {
    throw NumericError("a perturbation of the equilibrium increases the joint density");
  }
  return report;
}

OnePointDensity::OnePointDensity(const StatePrefactor& pref, int n_states) {
  if (n_states < 1) throw ConfigurationError("n_states must be >= 1");
  if (pref.family().kind() != FamilyKind::hermite) {
    throw ConfigurationError("the GUE one-point density is defined for the Hermite prefactor only");
  }
  for (int k = 0; k < n_states; ++k) {
    const ChargeConfiguration nodes =
        k == 0 ? ChargeConfiguration({}, pref.support()) : stieltjes::equilibrate(pref, k);
    states_.push_back(qhj::wavefunction(pref, nodes));
  }
  const double half = std::sqrt(2.0 * n_states + 1.0) + 8.0;
  lo_ = -half;
  cell_ = 0.01;
  const auto cells = static_cast<std::size_t>(std::ceil(2.0 * half / cell_));
  cumulative_.assign(cells + 1, 0.0);
  auto rho = [this](double x) { return (*this)(x); };
  for (std::size_t c = 0; c < cells; ++c) {
    const double a = lo_ + cell_ * static_cast<double>(c);
    cumulative_[c + 1] =
        cumulative_[c] + boost::math::quadrature::gauss<double, 10>::integrate(rho, a, a + cell_);
  }
}

double OnePointDensity::operator()(double x) const {
  double s = 0.0;
  for (const qhj::WaveFunction& psi : states_) {
    const double v = psi(x);
    s += v * v;
  }
  return s / static_cast<double>(states_.size());
}

double OnePointDensity::cdf(double x) const {
  if (x <= lo_) return 0.0;
  const double rel = (x - lo_) / cell_;
  const auto c = static_cast<std::size_t>(rel);
  if (c + 1 >= cumulative_.size()) return cumulative_.back();
  const double a = lo_ + cell_ * static_cast<double>(c);
  auto rho = [this](double t) { return (*this)(t); };
  return cumulative_[c] + boost::math::quadrature::gauss<double, 10>::integrate(rho, a, x);
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

DensityComparison compare_to_quantum(const StatePrefactor& pref, int n_states,
                                     std::size_t samples, std::uint64_t seed,
                                     const BinSpec& bins, int threads) {
  if (samples == 0) throw ConfigurationError("compare_to_quantum needs at least one sample");
  if (bins.count < 1 || !(bins.hi > bins.lo) || !std::isfinite(bins.lo) || !std::isfinite(bins.hi)) {
    throw ConfigurationError(fmt::format("invalid bins: [{}, {}) with {} bins", bins.lo, bins.hi,
                                         bins.count));
  }
  const OnePointDensity density(pref, n_states);
  std::vector<double> ev = sample_gue_eigenvalues(n_states, seed, samples, threads);
  std::sort(ev.begin(), ev.end());

  DensityComparison out;
  out.sample_count = samples;
  out.ks_statistic = ks_statistic(ev, [&](double x) { return density.cdf(x); });

  const double width = (bins.hi - bins.lo) / bins.count;
  const double total = static_cast<double>(ev.size());
  std::size_t included = 0;
  out.bins.resize(static_cast<std::size_t>(bins.count));
  for (int b = 0; b < bins.count; ++b) {
    const double a = bins.lo + width * b;
    const double z = b + 1 == bins.count ? bins.hi : a + width;
    const auto first = std::lower_bound(ev.begin(), ev.end(), a);
    const auto last = std::lower_bound(ev.begin(), ev.end(), z);
    const auto count = static_cast<std::size_t>(last - first);
    included += count;
    out.bins[b] = {0.5 * (a + z), static_cast<double>(count) / total, density.mass(a, z)};
  }
  out.included_mass = static_cast<double>(included) / total;
  return out;
}

namespace {

struct FpTerms {
  double sum = 0.0;
  double scale = 0.0;
};

}  // namespace

FokkerPlanckReport fokker_planck_residual(const FokkerPlanckSpec& spec,
                                          std::span<const ChargeConfiguration> points, double beta,
                                          std::optional<double> exponent_beta) {
  if (!(beta > 0.0)) throw ConfigurationError("beta must be positive");
  const double beta_p = exponent_beta.value_or(beta);
  const StatePrefactor& pref = spec.pref;
  const Interval support = pref.support();
  const double h = kFokkerPlanckStep;

  FokkerPlanckReport report;
  for (const ChargeConfiguration& point : points) {
    if (static_cast<int>(point.size()) != spec.n) {
      throw ConfigurationError(fmt::format("point has {} coordinates, expected {}", point.size(), spec.n));
    }
    bool skip = point.size() > 1 && point.min_gap() < 20.0 * h;
    for (double x : point.positions()) {
      skip = skip || !(x - support.lo >= 20.0 * h) || !(support.hi - x >= 20.0 * h);
    }
    if (skip) {
      report.skipped++;
      continue;
    }
    const std::vector<double> base = point.values();
    const double e0 = stieltjes::energy(point, pref).energy;
    auto energy_at = [&](const std::vector<double>& y) {
      return stieltjes::energy(ChargeConfiguration(y, support), pref).energy;
    };
    // P scaled by exp(beta_P * e0); the scale cancels in the relative residual.
    auto density = [&](const std::vector<double>& y) { return std::exp(-beta_p * (energy_at(y) - e0)); };
    auto flux = [&](const std::vector<double>& y, std::size_t j) {
      const ChargeConfiguration c(y, support);
      const double grad_j = -stieltjes::stationarity_residual(c, pref)[j];
      return grad_j * std::exp(-beta_p * (stieltjes::energy(c, pref).energy - e0));
    };

    const std::vector<double> grad = stieltjes::energy(point, pref).gradient;
    const std::vector<double> hdiag = stieltjes::energy_hessian_diagonal(point, pref);
    const double p0 = 1.0;
    FpTerms terms;
    for (std::size_t j = 0; j < base.size(); ++j) {
      auto shifted = [&](double d) {
        std::vector<double> y = base;
        y[j] += d;
        return y;
      };
      auto second = [&](double s) {
        return (density(shifted(s)) - 2.0 * p0 + density(shifted(-s))) / (s * s);
      };
      auto first = [&](double s) { return (flux(shifted(s), j) - flux(shifted(-s), j)) / (2.0 * s); };
      const double a = (4.0 * second(0.5 * h) - second(h)) / 3.0 / beta;
      const double b = (4.0 * first(0.5 * h) - first(h)) / 3.0;
      terms.sum += a + b;
      terms.scale += p0 * (std::max(beta, beta_p) * grad[j] * grad[j] + std::abs(hdiag[j]));
    }
    const double rel = std::abs(terms.sum) / std::max(terms.scale, std::numeric_limits<double>::min());
    report.max_relative_residual = std::max(report.max_relative_residual, rel);
    report.evaluated++;
  }
  return report;
}

FpSchrodinger fp_to_schrodinger(const ScalarPotential& hpot, double beta) {
  if (!(beta > 0.0)) throw ConfigurationError("beta must be positive");
  FpSchrodinger out;
  out.beta = beta;
  out.v.value = [hpot, beta](double x) {
    const double d = hpot.first(x);
    return 0.5 * hpot.second(x) - 0.25 * beta * d * d;
  };
  out.v.derivative = [hpot, beta](double x) {
    // Third derivative of H is not available; central difference.
    const double eps = 1e-5;
    const double s3 = (hpot.second(x + eps) - hpot.second(x - eps)) / (2.0 * eps);
    return 0.5 * s3 - 0.5 * beta * hpot.first(x) * hpot.second(x);
  };
  out.psi_factor = [hpot, beta](double x) { return std::exp(-0.5 * beta * hpot.value(x)); };

  const Interval range = hpot.check_range;
  const double centre = 0.5 * (range.lo + range.hi);
  struct TestFunction {
    std::function<double(double)> f;
    std::function<double(double)> f2;
  };
  const std::vector<TestFunction> tests{
      {[centre](double x) { const double u = x - centre; return std::exp(-0.25 * u * u); },
       [centre](double x) {
         const double u = x - centre;
         return (0.25 * u * u - 0.5) * std::exp(-0.25 * u * u);
       }},
      {[centre](double x) { const double u = x - centre; return u * std::exp(-0.25 * u * u); },
       [centre](double x) {
         const double u = x - centre;
         return (0.25 * u * u * u - 1.5 * u) * std::exp(-0.25 * u * u);
       }},
  };
  const double h = 1e-3;
  for (const TestFunction& t : tests) {
    auto p = [&](double x) { return out.psi_factor(x) * t.f(x); };
    auto flux = [&](double x) { return hpot.first(x) * p(x); };
    for (int i = 0; i <= 40; ++i) {
      const double x = range.lo + (range.hi - range.lo) * i / 40.0;
      auto second = [&](double s) { return (p(x + s) - 2.0 * p(x) + p(x - s)) / (s * s); };
      auto first = [&](double s) { return (flux(x + s) - flux(x - s)) / (2.0 * s); };
      const double lhs = (4.0 * second(0.5 * h) - second(h)) / 3.0 / beta +
                         (4.0 * first(0.5 * h) - first(h)) / 3.0;
      const double phi = out.psi_factor(x);
      const double rhs = phi * (t.f2(x) / beta + out.v(x) * t.f(x));
      const double scale = std::abs(phi) * (std::abs(t.f2(x)) / beta + std::abs(out.v(x) * t.f(x)) +
                                            std::abs(hpot.first(x) * t.f(x)) + 1e-300);
      out.mapping_residual = std::max(out.mapping_residual, std::abs(lhs - rhs) / scale);
    }
  }
  return out;
}

FpSchrodinger fp_to_schrodinger(const FokkerPlanckSpec& spec, double beta) {
  if (spec.n != 1) {
    throw ConfigurationError("fp_to_schrodinger returns functions for the single-coordinate case; "
                             "use fp_potential_components for n > 1");
  }
  const StatePrefactor pref = spec.pref;
  ScalarPotential h;
  h.value = [pref](double x) { return -pref.log_g(x); };
  h.first = [pref](double x) { return -pref.drift(x); };
  h.second = [pref](double x) { return -pref.drift_prime(x); };
  switch (pref.family().kind()) {
    case FamilyKind::hermite:
      h.check_range = {-3.0, 3.0};
      break;
    case FamilyKind::laguerre:
      h.check_range = {0.5, 6.0};
      break;
    case FamilyKind::jacobi:
      h.check_range = {-0.8, 0.8};
      break;
  }
  return fp_to_schrodinger(h, beta);
}

std::vector<double> fp_potential_components(const FokkerPlanckSpec& spec,
                                            const ChargeConfiguration& config, double beta) {
  if (!(beta > 0.0)) throw ConfigurationError("beta must be positive");
  if (static_cast<int>(config.size()) != spec.n) {
    throw ConfigurationError(fmt::format("config has {} coordinates, expected {}", config.size(), spec.n));
  }
  const std::vector<double> r = stieltjes::stationarity_residual(config, spec.pref);
  const std::vector<double> hdiag = stieltjes::energy_hessian_diagonal(config, spec.pref);
  std::vector<double> v(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) v[j] = 0.5 * hdiag[j] - 0.25 * beta * r[j] * r[j];
  return v;
}

}  // namespace spectralgas::rmt
