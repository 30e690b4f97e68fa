#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spectralgas/errors.hpp"
#include "spectralgas/rmt.hpp"
#include "spectralgas/stieltjes.hpp"

using namespace spectralgas;
using orthopoly::PolynomialFamily;
using potentials::make_prefactor;

namespace {

// Z_n = pi^{n/2} 2^{-n(n-1)/2} prod_{k=1}^n k!
double hermite_normalization(int n) {
  double z = std::pow(std::numbers::pi, n / 2.0) * std::exp2(-n * (n - 1) / 2.0);
  for (int k = 1; k <= n; ++k) z *= std::tgamma(k + 1.0);
  return z;
}

}  // namespace

TEST_CASE("dim-1 GUE is N(0, 1/2)") {
  const std::size_t n = 100000;
  const auto ev = rmt::sample_gue_eigenvalues(1, 2024, n, 2);
  double m = 0.0, s = 0.0;
  for (double x : ev) m += x;
  m /= n;
  for (double x : ev) s += (x - m) * (x - m);
  s /= n - 1;
  CHECK(std::abs(m) <= 0.01);
  CHECK(std::abs(s - 0.5) <= 3.0 * std::sqrt(2.0 * 0.25 / (n - 1)));
}

TEST_CASE("dim-2 mean gap matches the quadrature oracle") {
  // In u = (x1 - x2)/sqrt 2 the pdf factorizes: E[gap] = sqrt2 int |u|^3 e^{-u^2} / int u^2 e^{-u^2}.
  boost::math::quadrature::exp_sinh<double> q;
  const double num = 2 * q.integrate([](double u) { return u > 40 ? 0.0 : u * u * u * std::exp(-u * u); }, 0.0, INFINITY);
  const double den = 2 * q.integrate([](double u) { return u > 40 ? 0.0 : u * u * std::exp(-u * u); }, 0.0, INFINITY);
  const double expected = std::numbers::sqrt2 * num / den;
  CHECK(expected == doctest::Approx(2 * std::numbers::sqrt2 / std::sqrt(std::numbers::pi)).epsilon(1e-12));

  const std::size_t n = 100000;
  const auto ev = rmt::sample_gue_eigenvalues(2, 99, n);
  double m = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = ev[2 * i + 1] - ev[2 * i];
    m += g;
    m2 += g * g;
  }
  m /= n;
  const double sd = std::sqrt((m2 / n - m * m) / n);
  CHECK(std::abs(m - expected) <= 3 * sd);
}

TEST_CASE("sampling is deterministic across runs and thread counts") {
  const auto a = rmt::sample_gue(7, 42, 3);
  const auto b = rmt::sample_gue(7, 42, 3);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(std::is_sorted(a.eigenvalues.begin(), a.eigenvalues.end()));
  CHECK(rmt::sample_gue(7, 42, 4).eigenvalues != a.eigenvalues);
  const auto one = rmt::sample_gue_eigenvalues(5, 1, 257, 1);
  const auto many = rmt::sample_gue_eigenvalues(5, 1, 257, 7);
  CHECK(one == many);
  const auto third = rmt::sample_gue(5, 1, 3);
  CHECK(std::equal(third.eigenvalues.begin(), third.eigenvalues.end(), one.begin() + 15));
  CHECK_THROWS_AS(rmt::sample_gue(rmt::kMaxDimension + 1, 0), CapabilityError);
  CHECK(rmt::kMaxDimension >= 512);
}

TEST_CASE("trace equals the eigenvalue sum") {
  for (int dim : {1, 2, 10, 64}) {
    const auto s = rmt::sample_gue(dim, 8, 0);
    double sum = 0.0;
    for (double x : s.eigenvalues) sum += x;
    CHECK(std::abs(sum - s.trace) <= 1e-10 * dim * s.frobenius_norm);
  }
}

TEST_CASE("semicircle trend at dim 64") {
  const int dim = 64;
  const std::size_t samples = 10000;
  auto ev = rmt::sample_gue_eigenvalues(dim, 5, samples);
  const double r = std::sqrt(2.0 * dim);
  for (double& x : ev) x /= r;
  std::sort(ev.begin(), ev.end());
  const double ks = rmt::ks_statistic(ev, [](double t) {
    t = std::clamp(t, -1.0, 1.0);
    return 0.5 + (t * std::sqrt(1 - t * t) + std::asin(t)) / std::numbers::pi;
  });
  CHECK(ks <= 0.05);
}

TEST_CASE("joint density values") {
  const auto h = PolynomialFamily::hermite();
  CHECK(rmt::joint_pdf(ChargeConfiguration({0.0}), h) == 1.0);
  CHECK(rmt::joint_pdf(ChargeConfiguration({0.0}), h, true) == doctest::Approx(0.5641895835).epsilon(1e-9));
  CHECK(rmt::joint_pdf(ChargeConfiguration({0.0, 1.0}), h) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(rmt::joint_pdf(ChargeConfiguration({0.3, 0.3 + 1e-8}), h) <= 1e-15);
  CHECK(rmt::log_joint_pdf(ChargeConfiguration({-0.4, 0.2, 1.0}), h) ==
        doctest::Approx(std::log(rmt::joint_pdf(ChargeConfiguration({-0.4, 0.2, 1.0}), h))).epsilon(1e-14));
  CHECK_THROWS_AS(rmt::joint_pdf(ChargeConfiguration({-1.0, 2.0}), PolynomialFamily::laguerre(1.0)),
                  DomainError);
}

TEST_CASE("normalization constants") {
  for (int n = 1; n <= 3; ++n) {
    const auto c = rmt::joint_pdf_normalization(PolynomialFamily::hermite(), n);
    CHECK(c.method == rmt::NormalizationConstant::Method::quadrature);
    CHECK(c.value == doctest::Approx(hermite_normalization(n)).epsilon(1e-8));
  }
  // Laguerre(a), n = 2: Z = Gamma(a+1) Gamma(a+2) * 2 (Selberg-type closed form for beta = 2).
  const double a = 1.5;
  const auto lag = rmt::joint_pdf_normalization(PolynomialFamily::laguerre(a), 2);
  CHECK(lag.value == doctest::Approx(2 * std::tgamma(a + 1) * std::tgamma(a + 2)).epsilon(1e-8));
  // Legendre, n = 2: int int (x - y)^2 over [-1,1]^2 = 8/3.
  CHECK(rmt::joint_pdf_normalization(PolynomialFamily::jacobi(0, 0), 2).value ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-8));
  const auto mc = rmt::joint_pdf_normalization(PolynomialFamily::hermite(), 4);
  CHECK(mc.method == rmt::NormalizationConstant::Method::monte_carlo);
  CHECK(std::abs(mc.value - hermite_normalization(4)) <= 5 * mc.error);
  CHECK(mc.error <= 0.05 * mc.value);
  CHECK_THROWS_AS(rmt::joint_pdf_normalization(PolynomialFamily::hermite(), 13), CapabilityError);
}

TEST_CASE("mode of the joint density") {
  const auto h2 = rmt::mode_of_joint_pdf(PolynomialFamily::hermite(), 2);
  CHECK(h2.weight_mode.has_value());
  CHECK((*h2.weight_mode)[1] == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-10));
  CHECK(h2.max_log_gain < 0.0);
  CHECK(h2.perturbations > 90);
  CHECK(std::abs(rmt::mode_of_joint_pdf(PolynomialFamily::hermite(), 1).weight_mode->operator[](0)) <= 1e-14);
  const auto l1 = rmt::mode_of_joint_pdf(PolynomialFamily::laguerre(1.0), 1);
  CHECK(l1.prefactor_equilibrium[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((*l1.weight_mode)[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(rmt::mode_of_joint_pdf(PolynomialFamily::laguerre(-0.5), 2).weight_mode.has_value());
  for (int n : {3, 10, 25}) {
    const auto m = rmt::mode_of_joint_pdf(PolynomialFamily::hermite(), n);
    CHECK(oracle::max_abs_diff(m.weight_mode->values(), oracle::golub_welsch(PolynomialFamily::hermite(), n)) <= 1e-8);
  }
}

TEST_CASE("quantum one-point density") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const rmt::OnePointDensity d1(h, 1);
  CHECK(d1(0.0) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(d1.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d1.cdf(1e3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d1.cdf(0.7) == doctest::Approx(0.5 * (1 + std::erf(0.7))).epsilon(1e-12));

  // n = 2 marginal of the normalized joint density, integrating out one eigenvalue.
  const rmt::OnePointDensity d2(h, 2);
  boost::math::quadrature::sinh_sinh<double> q;
  for (double x : {-1.7, -0.3, 0.0, 0.9, 2.4}) {
    const double marg = q.integrate([x](double y) { return std::abs(y) > 40 ? 0.0 : std::exp(-x * x - y * y) * (x - y) * (x - y); });
    CHECK(d2(x) == doctest::Approx(marg / std::numbers::pi).epsilon(1e-10));
  }
  CHECK_THROWS_AS(rmt::OnePointDensity(make_prefactor(PolynomialFamily::laguerre(1.0)), 1),
                  ConfigurationError);
}

TEST_CASE("compare_to_quantum") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto c = rmt::compare_to_quantum(h, 1, 20000, 4);
  CHECK(c.sample_count == 20000);
  CHECK(c.bins.size() == 80);
  double sum = 0.0;
  for (const auto& b : c.bins) sum += b.empirical;
  CHECK(std::abs(sum - c.included_mass) <= 1e-12);
  CHECK(c.ks_statistic <= 0.02);
  CHECK_THROWS_AS(rmt::compare_to_quantum(h, 1, 0, 4), ConfigurationError);
  CHECK_THROWS_AS(rmt::compare_to_quantum(h, 1, 100, 4, {1.0, -1.0, 10}), ConfigurationError);
  CHECK_THROWS_AS(rmt::compare_to_quantum(h, 1, 100, 4, {-1.0, 1.0, 0}), ConfigurationError);
}

TEST_CASE("Fokker-Planck stationarity") {
  const rmt::FokkerPlanckSpec one{make_prefactor(PolynomialFamily::hermite()), 1};
  std::vector<ChargeConfiguration> pts1;
  for (double x : {-2.0, -0.3, 0.0, 1.1}) pts1.push_back(ChargeConfiguration({x}));
  CHECK(rmt::fokker_planck_residual(one, pts1, 2.0).max_relative_residual <= 1e-8);

  const rmt::FokkerPlanckSpec two{make_prefactor(PolynomialFamily::hermite()), 2};
  std::mt19937_64 rng(21);
  std::vector<ChargeConfiguration> pts;
  for (int i = 0; i < 100; ++i) pts.emplace_back(oracle::random_configuration(rng, 2, -2.5, 2.5, 0.1));
  const auto r = rmt::fokker_planck_residual(two, pts, 2.0);
  CHECK(r.evaluated == 100);
  CHECK(r.max_relative_residual <= 1e-5);
  CHECK(rmt::fokker_planck_residual(two, pts, 2.0, 3.0).max_relative_residual > 1e-2);

  std::vector<ChargeConfiguration> close{ChargeConfiguration({0.0, 0.005})};
  CHECK(rmt::fokker_planck_residual(two, close, 2.0).skipped == 1);
  CHECK_THROWS_AS(rmt::fokker_planck_residual(two, pts, 0.0), ConfigurationError);
}

TEST_CASE("Fokker-Planck to Schrodinger map") {
  rmt::ScalarPotential quad{[](double x) { return x * x / 2; }, [](double x) { return x; },
                            [](double) { return 1.0; }};
  const auto m = rmt::fp_to_schrodinger(quad, 2.0);
  for (double x : {-2.0, 0.0, 1.5}) {
    CHECK(m.v(x) == doctest::Approx((1 - x * x) / 2).epsilon(1e-15));
    CHECK(m.psi_factor(x) == doctest::Approx(std::exp(-x * x / 2)).epsilon(1e-15));
    CHECK(m.v.derivative(x) == doctest::Approx(-x).epsilon(1e-8));
  }
  CHECK(m.mapping_residual <= 1e-6);

  rmt::ScalarPotential flat{[](double) { return 3.0; }, [](double) { return 0.0; },
                            [](double) { return 0.0; }};
  const auto f = rmt::fp_to_schrodinger(flat, 2.0);
  CHECK(f.v(0.7) == 0.0);
  CHECK(f.psi_factor(-1.0) == f.psi_factor(2.0));

  const auto spec = rmt::fp_to_schrodinger(rmt::FokkerPlanckSpec{make_prefactor(PolynomialFamily::hermite()), 1}, 2.0);
  CHECK(spec.v(0.4) == doctest::Approx((1 - 0.16) / 2));
  CHECK(spec.mapping_residual <= 1e-6);
  CHECK_THROWS_AS(rmt::fp_to_schrodinger(rmt::FokkerPlanckSpec{make_prefactor(PolynomialFamily::hermite()), 2}, 2.0),
                  ConfigurationError);
  const auto comps = rmt::fp_potential_components(
      rmt::FokkerPlanckSpec{make_prefactor(PolynomialFamily::hermite()), 1}, ChargeConfiguration({0.4}), 2.0);
  CHECK(comps[0] == doctest::Approx((1 - 0.16) / 2));
}

TEST_CASE("Monte Carlo normalization at larger n") {
  for (int n : {6, 8}) {
    const auto mc = rmt::joint_pdf_normalization(PolynomialFamily::hermite(), n);
    INFO("n=", n, " value ", mc.value, " +- ", mc.error, " exact ", hermite_normalization(n));
    CHECK(std::abs(mc.value - hermite_normalization(n)) <= 5 * mc.error);
    CHECK(mc.error <= 0.1 * mc.value);
  }
  // Laguerre(a), n = 4: prod_{k<n} k! (k + a)! / ... checked against nested MC-free identity
  // Z_n = prod_{k=0}^{n-1} Gamma(k+2) Gamma(k+a+1).
  const double a = 1.0;
  double exact = 1.0;
  for (int k = 0; k < 4; ++k) exact *= std::tgamma(k + 2.0) * std::tgamma(k + a + 1.0);
  const auto lag = rmt::joint_pdf_normalization(PolynomialFamily::laguerre(a), 4);
  CHECK(std::abs(lag.value - exact) <= 5 * lag.error);
  // Legendre, n = 4: prod_{k<n} 2^{2k+1} (k!)^4 / ((2k+1)! ... ) via the Selberg formula.
  const auto leg = rmt::joint_pdf_normalization(PolynomialFamily::jacobi(0, 0), 4);
  double selberg = 1.0;
  for (int j = 0; j < 4; ++j) {
    selberg *= std::tgamma(j + 1.0) * std::tgamma(j + 1.0) * std::tgamma(j + 2.0) / std::tgamma(4.0 + j + 1.0);
  }
  selberg *= std::exp2(4 + 2 * 6);  // interval [-1,1]: 2^{n + 2 n(n-1)/2}
  CHECK(std::abs(leg.value - selberg) <= 5 * leg.error);
}
