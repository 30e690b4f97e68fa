#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "spectralgas/errors.hpp"
#include "spectralgas/kirchhoff.hpp"
#include "spectralgas/orthopoly.hpp"
#include "spectralgas/stieltjes.hpp"

using namespace spectralgas;
using kirchhoff::Complex;
using orthopoly::PolynomialFamily;
using potentials::make_prefactor;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("free two-pole velocity") {
  kirchhoff::PoleState s{{kI, -kI}, 0.0, 0.5};
  const auto v = kirchhoff::rhs(s);
  CHECK(std::abs(v[0] - Complex(0.5, 0.0)) <= 1e-15);
  CHECK(std::abs(v[1] - Complex(-0.5, 0.0)) <= 1e-15);
  kirchhoff::PoleState one{{Complex(0.3, 0.2)}, 0.0, 0.5};
  CHECK(std::abs(kirchhoff::rhs(one)[0]) == 0.0);
}

TEST_CASE("zeros are stationary for both flows") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const double r = 1.0 / std::numbers::sqrt2;
  kirchhoff::PoleState s{{Complex(-r, 0.0), Complex(r, 0.0)}, 0.0, 0.5};
  kirchhoff::FlowOptions o;
  o.pref = h;
  for (auto flow : {kirchhoff::Flow::kirchhoff, kirchhoff::Flow::relaxation}) {
    o.flow = flow;
    for (const auto& v : kirchhoff::rhs(s, o)) CHECK(std::abs(v) <= 1e-15);
  }
  // The relaxation velocity is the Stieltjes residual.
  o.flow = kirchhoff::Flow::relaxation;
  kirchhoff::PoleState t{{Complex(-1.0, 0.0), Complex(0.4, 0.0), Complex(1.5, 0.0)}, 0.0, 0.5};
  const auto res = stieltjes::stationarity_residual(ChargeConfiguration({-1.0, 0.4, 1.5}), h);
  const auto v = kirchhoff::rhs(t, o);
  for (int k = 0; k < 3; ++k) CHECK(v[k].real() == doctest::Approx(res[k]).epsilon(1e-14));
  // The literal sign flips the external term.
  o.flow = kirchhoff::Flow::kirchhoff;
  o.sign = kirchhoff::PotentialSign::literal;
  kirchhoff::PoleState single{{Complex(0.8, 0.0)}, 0.0, 0.5};
  CHECK(std::abs(kirchhoff::rhs(single, o)[0] - kI * 0.8) <= 1e-15);
}

TEST_CASE("collisions are detected") {
  kirchhoff::PoleState s{{Complex(0.0, 0.0), Complex(1e-10, 0.0)}, 0.0, 0.5};
  try {
    kirchhoff::rhs(s);
    FAIL("expected CollisionError");
  } catch (const CollisionError& e) {
    CHECK(e.pair().first == 0);
    CHECK(e.pair().second == 1);
  }
}

TEST_CASE("free symmetric pair follows the closed form") {
  // d(x1 - x2)/dt = 2i/(x1 - x2) => (x1 - x2)^2 = (2 i y0)^2 + 4 i t, x1 + x2 = 0.
  const double y0 = 0.8;
  kirchhoff::PoleState s{{Complex(0.0, y0), Complex(0.0, -y0)}, 0.0, 0.5};
  const auto traj = kirchhoff::integrate(s, {}, 2.0, 1e-11);
  for (const auto& sample : traj.samples) {
    const Complex a = sample.poles[0];
    const Complex b = sample.poles[1];
    CHECK(std::abs(std::abs(a) - std::abs(b)) <= 1e-9);
    const Complex d2 = Complex(-4 * y0 * y0, 4 * sample.time);
    CHECK(std::abs((a - b) * (a - b) - d2) <= 1e-8);
  }
  CHECK(traj.back().time == doctest::Approx(2.0));
  CHECK(traj.back().poles[0].real() > 0.0);

  kirchhoff::PoleState one{{Complex(0.3, -0.2)}, 0.0, 0.5};
  const auto t1 = kirchhoff::integrate(one, {}, 5.0, 1e-10);
  CHECK(t1.back().poles[0] == Complex(0.3, -0.2));
}

TEST_CASE("reversed free flow returns to the start") {
  const double tol = 1e-10;
  kirchhoff::PoleState s{{Complex(-1.0, 0.3), Complex(0.2, -0.5), Complex(1.1, 0.4)}, 0.0, 0.5};
  const auto fwd = kirchhoff::integrate(s, {}, 1.0, tol);
  kirchhoff::PoleState back{fwd.back().poles, 0.0, -0.5};
  const auto rev = kirchhoff::integrate(back, {}, 1.0, tol);
  for (std::size_t k = 0; k < s.poles.size(); ++k) {
    CHECK(std::abs(rev.back().poles[k] - s.poles[k]) <= 10 * tol * std::max(1.0, std::abs(s.poles[k])));
  }
}

TEST_CASE("relaxation flow reaches the zeros") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto z = orthopoly::zeros(PolynomialFamily::hermite(), 5);
  kirchhoff::PoleState s;
  for (std::size_t k = 0; k < z.size(); ++k) s.poles.emplace_back(z[k] + (k % 2 ? 0.08 : -0.06), 0.0);
  kirchhoff::FlowOptions o;
  o.pref = h;
  o.flow = kirchhoff::Flow::relaxation;
  const auto traj = kirchhoff::integrate(s, o, 20.0, 1e-12);
  for (std::size_t k = 0; k < z.size(); ++k) {
    CHECK(std::abs(traj.back().poles[k] - Complex(z[k], 0.0)) <= 1e-8);
  }
}

TEST_CASE("integration tolerance is validated") {
  kirchhoff::PoleState s{{kI, -kI}, 0.0, 0.5};
  CHECK_THROWS_AS(kirchhoff::integrate(s, {}, 1.0, 1e-2), ConfigurationError);
  CHECK_THROWS_AS(kirchhoff::integrate(s, {}, 1.0, 1e-14), ConfigurationError);
}

TEST_CASE("relax converges to the zeros") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto r = kirchhoff::relax(ChargeConfiguration({-1.0, 0.5}), h);
  CHECK(r.config[0] == doctest::Approx(-0.7071067812).epsilon(1e-10));
  CHECK(r.config[1] == doctest::Approx(0.7071067812).epsilon(1e-10));
  CHECK(r.residual_norm <= 1e-10);

  const auto z = orthopoly::zeros(PolynomialFamily::hermite(), 6);
  const auto fixed = kirchhoff::relax(z, h);
  CHECK(oracle::max_abs_diff(fixed.config.values(), z.values()) <= 1e-10);

  const auto lag = make_prefactor(PolynomialFamily::laguerre(1.0));
  CHECK(kirchhoff::relax(ChargeConfiguration({0.5}, lag.support()), lag).config[0] ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("relax keeps the ordering and the gap guard") {
  std::mt19937_64 rng(3);
  for (const auto& f : oracle::acceptance_families()) {
    const auto pref = make_prefactor(f);
    const auto [lo, hi] = oracle::sampling_range(f);
    const ChargeConfiguration start(oracle::random_configuration(rng, 8, lo, hi, 0.02), f.support());
    const auto r = kirchhoff::relax(start, pref);
    CHECK(r.min_gap_ratio >= kirchhoff::kGapGuardFactor);
    CHECK(r.collision_events == 0);
    const auto res = stieltjes::stationarity_residual(r.config, pref);
    for (double v : res) CHECK(std::abs(v) <= 1e-8);
    CHECK(oracle::max_abs_diff(r.config.values(), oracle::golub_welsch(f, 8)) <= 1e-8 * std::max(1.0, hi));
  }
}
