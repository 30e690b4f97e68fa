#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spectralgas/errors.hpp"
#include "spectralgas/orthopoly.hpp"
#include "spectralgas/stieltjes.hpp"

using namespace spectralgas;
using orthopoly::PolynomialFamily;
using potentials::make_prefactor;

namespace {
const double kR = 1.0 / std::numbers::sqrt2;
}

TEST_CASE("energy of the two-charge Hermite equilibrium") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const ChargeConfiguration c({-kR, kR});
  const auto e = stieltjes::energy(c, h);
  CHECK(e.energy == doctest::Approx(0.5 - std::log(std::sqrt(2.0))).epsilon(1e-14));
  CHECK(e.energy == doctest::Approx(0.1534264097).epsilon(1e-10));
  CHECK(std::abs(e.gradient[0]) <= 1e-15);
  CHECK(std::abs(e.gradient[1]) <= 1e-15);
  CHECK(e.min_gap == doctest::Approx(2 * kR));
}

TEST_CASE("unordered or coincident configurations are rejected") {
  CHECK_THROWS_AS(ChargeConfiguration({1.0, 0.0}), DegenerateInputError);
  CHECK_THROWS_AS(ChargeConfiguration({0.5, 0.5}), DegenerateInputError);
  const auto lag = make_prefactor(PolynomialFamily::laguerre(1.0));
  CHECK_THROWS_AS(stieltjes::energy(ChargeConfiguration({-1.0, 2.0}), lag), DomainError);
}

TEST_CASE("stationarity residual at zeros") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto r2 = stieltjes::stationarity_residual(ChargeConfiguration({-kR, kR}), h);
  CHECK(std::abs(r2[0]) <= 1e-12);
  CHECK(std::abs(r2[1]) <= 1e-12);
  CHECK(stieltjes::stationarity_residual(ChargeConfiguration({0.0}), h)[0] == 0.0);
  const auto leg = make_prefactor(PolynomialFamily::jacobi(0.0, 0.0));
  const double s = 1.0 / std::sqrt(3.0);
  const auto rl = stieltjes::stationarity_residual(ChargeConfiguration({-s, s}, leg.support()), leg);
  CHECK(std::abs(rl[0]) <= 1e-12);
  CHECK(std::abs(rl[1]) <= 1e-12);
}

TEST_CASE("residual is minus the finite-difference energy gradient") {
  std::mt19937_64 rng(11);
  for (const auto& f : oracle::acceptance_families()) {
    const auto pref = make_prefactor(f);
    const auto [lo, hi] = oracle::sampling_range(f);
    const auto x = oracle::random_configuration(rng, 6, lo, hi, 0.05);
    const ChargeConfiguration c(x, f.support());
    const auto r = stieltjes::stationarity_residual(c, pref);
    const auto hess = stieltjes::energy_hessian(c.positions(), pref);
    const auto hd = stieltjes::energy_hessian_diagonal(c, pref);
    for (std::size_t k = 0; k < x.size(); ++k) {
      auto ek = [&](double t) {
        auto y = x;
        y[k] = t;
        return stieltjes::energy(ChargeConfiguration(y, f.support()), pref).energy;
      };
      const double fd = oracle::derivative(ek, x[k], 1e-4);
      CHECK(-r[k] == doctest::Approx(fd).epsilon(1e-7));
      CHECK(hess(k, k) == doctest::Approx(hd[k]).epsilon(1e-14));
      auto gk = [&](double t) {
        auto y = x;
        y[k] = t;
        return -stieltjes::stationarity_residual(ChargeConfiguration(y, f.support()), pref)[0];
      };
      CHECK(hess(0, k) == doctest::Approx(oracle::derivative(gk, x[k], 1e-4)).epsilon(1e-6));
    }
  }
}

TEST_CASE("sum identity") {
  const auto a = stieltjes::sum_identity(ChargeConfiguration({-1.0, 1.0}), 1);
  CHECK(a.lhs == doctest::Approx(0.5));
  CHECK(a.rhs == doctest::Approx(0.5));
  const auto b = stieltjes::sum_identity(ChargeConfiguration({0.0}), 0);
  CHECK(b.lhs == 0.0);
  CHECK(b.rhs == 0.0);
  const auto c = stieltjes::sum_identity(ChargeConfiguration({0.0, 1.0, 2.0}), 2);
  CHECK(c.lhs == doctest::Approx(1.5));
  CHECK(c.rhs == doctest::Approx(1.5));
}

TEST_CASE("equilibrate reproduces known zeros") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto e2 = stieltjes::equilibrate(h, 2);
  CHECK(e2[0] == doctest::Approx(-0.7071067812).epsilon(1e-10));
  CHECK(e2[1] == doctest::Approx(0.7071067812).epsilon(1e-10));
  CHECK(std::abs(stieltjes::equilibrate(h, 1)[0]) <= 1e-14);
  CHECK(stieltjes::equilibrate(make_prefactor(PolynomialFamily::laguerre(1.0)), 1)[0] ==
        doctest::Approx(2.0).epsilon(1e-12));
  for (const auto& f : oracle::acceptance_families()) {
    const auto pref = make_prefactor(f);
    for (int n : {3, 15, 60}) {
      const auto x = stieltjes::equilibrate(pref, n).values();
      INFO(f.name(), " n=", n);
      CHECK(oracle::max_abs_diff(x, oracle::golub_welsch(f, n)) <= 1e-9 * std::max(1.0, x.back()));
    }
  }
}

TEST_CASE("equilibrate reports non-convergence with the last iterate") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  stieltjes::EquilibrateOptions opts;
  opts.max_iterations = 1;
  const ChargeConfiguration start({-5.0, -4.9, 3.0, 7.0});
  try {
    stieltjes::equilibrate(h, 4, start, opts);
    FAIL("expected NonConvergenceError");
  } catch (const stieltjes::NonConvergenceError& e) {
    CHECK(e.last_iterate().size() == 4);
  }
  CHECK_THROWS_AS(stieltjes::equilibrate(h, 0), DomainError);
  CHECK_THROWS_AS(stieltjes::equilibrate(h, stieltjes::kMaxCharges + 1), CapabilityError);
}

TEST_CASE("quantum action closed forms") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto s1 = stieltjes::quantum_action(ChargeConfiguration({1.3}), h);
  CHECK(s1.real_part == 0.0);
  CHECK(s1.imag_part == doctest::Approx(1.3 * 1.3 / 2));
  const auto s2 = stieltjes::quantum_action(ChargeConfiguration({-kR, kR}), h);
  CHECK(s2.imag_part == doctest::Approx(2 * std::log(std::sqrt(2.0)) + 0.5).epsilon(1e-14));
  CHECK(s2.imag_part == doctest::Approx(1.1931471806).epsilon(1e-10));

  // Scaling every separation by e adds n(n-1) to the ordered pair term.
  const std::vector<double> x{-1.0, 0.2, 0.9, 2.0};
  std::vector<double> y;
  for (double v : x) y.push_back(std::exp(1.0) * v);
  const double d = stieltjes::quantum_action(ChargeConfiguration(y), h).pair_term -
                   stieltjes::quantum_action(ChargeConfiguration(x), h).pair_term;
  CHECK(d == doctest::Approx(12.0).epsilon(1e-13));

  stieltjes::ActionOptions unordered;
  unordered.pairs = stieltjes::PairConvention::unordered;
  CHECK(stieltjes::quantum_action(ChargeConfiguration(x), h, unordered).pair_term ==
        doctest::Approx(0.5 * stieltjes::quantum_action(ChargeConfiguration(x), h).pair_term));
}

TEST_CASE("log-weight action is minus twice the energy") {
  stieltjes::ActionOptions lw;
  lw.potential = stieltjes::ActionPotential::log_weight;
  std::mt19937_64 rng(5);
  for (const auto& f : oracle::acceptance_families()) {
    const auto pref = make_prefactor(f);
    const auto [lo, hi] = oracle::sampling_range(f);
    const ChargeConfiguration c(oracle::random_configuration(rng, 5, lo, hi, 0.05), f.support());
    CHECK(stieltjes::quantum_action(c, pref, lw).imag_part ==
          doctest::Approx(-2.0 * stieltjes::energy(c, pref).energy).epsilon(1e-13));
    const auto g = stieltjes::action_gradient(c, pref, lw);
    const auto r = stieltjes::stationarity_residual(c, pref);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k] == doctest::Approx(2.0 * r[k]).epsilon(1e-13));
  }
}

TEST_CASE("action gradient agrees with finite differences") {
  std::mt19937_64 rng(17);
  for (const auto& f : oracle::acceptance_families()) {
    const auto pref = make_prefactor(f);
    const auto [lo, hi] = oracle::sampling_range(f);
    const auto x = oracle::random_configuration(rng, 5, lo, hi, 0.05);
    const auto g = stieltjes::action_gradient(ChargeConfiguration(x, f.support()), pref);
    for (std::size_t k = 0; k < x.size(); ++k) {
      auto sk = [&](double t) {
        auto y = x;
        y[k] = t;
        return stieltjes::quantum_action(ChargeConfiguration(y, f.support()), pref).imag_part;
      };
      CHECK(g[k] == doctest::Approx(oracle::derivative(sk, x[k], 1e-4)).epsilon(1e-7));
    }
  }
}
