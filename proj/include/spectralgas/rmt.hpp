#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "spectralgas/configuration.hpp"
#include "spectralgas/orthopoly.hpp"
#include "spectralgas/potentials.hpp"
#include "spectralgas/qhj.hpp"

// Random-matrix side: GUE sampling, the beta = 2 joint eigenvalue density,
// comparison with the quantum one-point density and Fokker-Planck
// stationarity.
namespace spectralgas::rmt {

using orthopoly::PolynomialFamily;
using potentials::StatePrefactor;

inline constexpr int kMaxDimension = 1024;

// Stream for unit of work `index` under `seed`: mt19937_64 seeded by
// std::seed_seq{lo32(seed), hi32(seed), lo32(index), hi32(index)}.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

// SPECTRALGAS_MAX_THREADS if set (>= 1), else hardware concurrency.
int max_threads();

struct SpectralSample {
  int dim = 0;
  int beta = 2;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<double> eigenvalues;  // ascending
  double trace = 0.0;               // Tr H
  double frobenius_norm = 0.0;      // ||H||_F
};

// Hermitian H with density proportional to exp(-Tr H^2): diagonal entries
// N(0, 1/2), off-diagonal real and imaginary parts N(0, 1/4), filled row by
// row over the upper triangle from make_stream(seed, index).
SpectralSample sample_gue(int dim, std::uint64_t seed, std::uint64_t index = 0);

// Eigenvalues of `count` samples (sample i uses stream index i), laid out
// sample-major. Identical output for any thread count.
std::vector<double> sample_gue_eigenvalues(int dim, std::uint64_t seed, std::size_t count,
                                           int threads = max_threads());

// prod w(x_i) prod_{i<j} |x_i - x_j|^2.
double joint_pdf(const ChargeConfiguration& config, const PolynomialFamily& family,
                 bool normalized = false);
double log_joint_pdf(const ChargeConfiguration& config, const PolynomialFamily& family);

struct NormalizationConstant {
  enum class Method { quadrature, monte_carlo };
  double value = 0.0;
  double error = 0.0;
  Method method = Method::quadrature;
};

// Integral of the unnormalized beta = 2 density: nested adaptive quadrature
// for n <= 3, Monte Carlo (iid draws from the normalized weight) for
// 4 <= n <= 12. CapabilityError above 12.
NormalizationConstant joint_pdf_normalization(const PolynomialFamily& family, int n,
                                              std::size_t mc_samples = 200000,
                                              std::uint64_t seed = 0x5eed);

struct ModeReport {
  // Stieltjes equilibrium of the family prefactor (zeros of the family).
  ChargeConfiguration prefactor_equilibrium;
  // argmax of prod w * Delta^2: the equilibrium of sqrt(w), i.e. zeros of the
  // family with parameters lowered by one. Absent when those parameters
  // would leave (-1, inf).
  std::optional<ChargeConfiguration> weight_mode;
  // max over perturbations of ln pdf(perturbed) - ln pdf(mode); negative.
  double max_log_gain = 0.0;
  int perturbations = 0;
};

// NumericError if a random perturbation (1% of the min gap) beats the mode.
ModeReport mode_of_joint_pdf(const PolynomialFamily& family, int n);

// (1/n) sum_{k<n} psi_k^2 with psi_k = wavefunction at the degree-k equilibrium.
class OnePointDensity {
 public:
  OnePointDensity(const StatePrefactor& pref, int n_states);

  double operator()(double x) const;
  double cdf(double x) const;
  double mass(double a, double b) const { return cdf(b) - cdf(a); }
  int n_states() const { return static_cast<int>(states_.size()); }

 private:
  std::vector<qhj::WaveFunction> states_;
  double lo_ = 0.0;
  double cell_ = 0.0;
  std::vector<double> cumulative_;
};

struct BinSpec {
  double lo = -4.0;
  double hi = 4.0;
  int count = 80;
};

struct DensityBin {
  double center = 0.0;
  double empirical = 0.0;    // fraction of all eigenvalues in the bin
  double theoretical = 0.0;  // theoretical probability mass of the bin
};

struct DensityComparison {
  std::vector<DensityBin> bins;
  double ks_statistic = 0.0;
  std::size_t sample_count = 0;
  double included_mass = 0.0;  // fraction of eigenvalues inside [lo, hi)
};

// GUE(dim = n_states) one-point density against the quantum density.
// ConfigurationError for a non-Hermite prefactor, zero samples or bad bins.
DensityComparison compare_to_quantum(const StatePrefactor& pref, int n_states,
                                     std::size_t samples, std::uint64_t seed,
                                     const BinSpec& bins = {}, int threads = max_threads());

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

struct FokkerPlanckSpec {
  StatePrefactor pref;
  int n = 1;
};

struct FokkerPlanckReport {
  double max_relative_residual = 0.0;
  int evaluated = 0;
  int skipped = 0;
};

// Step of the Richardson-extrapolated central differences.
inline constexpr double kFokkerPlanckStep = 1e-3;

// With P = exp(-beta_P * energy), evaluates sum_j [(1/beta) d^2P/dx_j^2 +
// d/dx_j (H_j P)] at each point. beta_P defaults to beta; a different value
// is the negative control. Points with min gap (or distance to a finite
// support endpoint) below 20 h are skipped.
FokkerPlanckReport fokker_planck_residual(const FokkerPlanckSpec& spec,
                                          std::span<const ChargeConfiguration> points,
                                          double beta,
                                          std::optional<double> exponent_beta = std::nullopt);

// Single-coordinate potential H with derivatives, plus the range used for
// the operator-mapping check.
struct ScalarPotential {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
  Interval check_range{-3.0, 3.0};
};

struct FpSchrodinger {
  potentials::Potential v;  // (1/2) H'' - (beta/4) H'^2
  std::function<double(double)> psi_factor;  // exp(-(beta/2) H)
  double beta = 2.0;
  // max relative mismatch between L[psi_factor * psi] and
  // psi_factor * ((1/beta) psi'' + V psi) over test functions psi.
  double mapping_residual = 0.0;
};

FpSchrodinger fp_to_schrodinger(const ScalarPotential& h, double beta);
// n must be 1; H = -ln g.
FpSchrodinger fp_to_schrodinger(const FokkerPlanckSpec& spec, double beta);

// Per-coordinate V_j = (1/2) H_jj - (beta/4) H_j^2 at a configuration.
std::vector<double> fp_potential_components(const FokkerPlanckSpec& spec,
                                            const ChargeConfiguration& config, double beta);

}  // namespace spectralgas::rmt
