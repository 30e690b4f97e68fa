#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "spectralgas/errors.hpp"
#include "spectralgas/orthopoly.hpp"
#include "spectralgas/qhj.hpp"
#include "spectralgas/stieltjes.hpp"

using namespace spectralgas;
using orthopoly::PolynomialFamily;
using potentials::make_prefactor;
using qhj::Complex;

namespace {

const Complex kI(0.0, 1.0);

std::vector<double> grid(double lo, double hi, int m) {
  std::vector<double> g;
  for (int i = 0; i <= m; ++i) g.push_back(lo + (hi - lo) * i / m);
  return g;
}

potentials::Potential constant_potential(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

}  // namespace

TEST_CASE("momentum function values") {
  const qhj::QuantumMomentumFunction single({0.0}, std::nullopt);
  CHECK(std::abs(single(kI) - Complex(-1.0, 0.0)) <= 1e-15);
  CHECK_THROWS_AS(single(Complex(0.0, 0.0)), PoleEvaluationError);

  const auto h = make_prefactor(PolynomialFamily::hermite());
  const qhj::QuantumMomentumFunction ground({}, h);
  for (Complex z : {Complex(0.4, 0.0), Complex(-1.0, 0.5)}) CHECK(std::abs(ground(z) - kI * z) <= 1e-15);
  const auto p1 = qhj::qmf_from_state(h, ChargeConfiguration({0.0}));
  for (Complex z : {Complex(0.4, 0.0), Complex(-1.0, 0.5)}) {
    CHECK(std::abs(p1(z) - (-kI / z + kI * z)) <= 1e-14);
  }
  CHECK(potentials::coulomb(0.0).fixed_poles().size() == 1);
  const auto pc = qhj::qmf_from_state(potentials::coulomb(0.0), ChargeConfiguration({}, {0.0, INFINITY}));
  CHECK_THROWS_AS(pc(Complex(0.0, 0.0)), PoleEvaluationError);
}

TEST_CASE("Riccati residual") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto v = potentials::schrodinger_potential(h);
  const auto g = grid(-6, 6, 240);
  const qhj::QuantumMomentumFunction ground({}, h);
  CHECK(qhj::riccati_residual(ground, v, 1.0, g).max_abs() <= 1e-10);
  const auto p1 = qhj::qmf_from_state(h, ChargeConfiguration({0.0}));
  const auto r1 = qhj::riccati_residual(p1, v, 3.0, g);
  CHECK(r1.max_abs() <= 1e-10);
  CHECK(r1.flagged.size() == 1);  // the grid hits the node at 0
  const auto wrong = qhj::riccati_residual(ground, v, 2.0, g);
  for (const auto& r : wrong.value) CHECK(std::abs(r - Complex(-1.0, 0.0)) <= 1e-10);
}

TEST_CASE("residuals agree with direct evaluation of p") {
  const auto lag = make_prefactor(PolynomialFamily::laguerre(1.0));
  const auto v = potentials::schrodinger_potential(lag);
  const qhj::QuantumMomentumFunction p({0.7, 2.5, 4.0}, lag, 0.8);
  const std::vector<double> pts{0.3, 1.6, 3.1, 5.5, 9.0};
  const auto rr = qhj::riccati_residual(p, v, 1.7, pts);
  const auto rb = qhj::burgers_residual(p, v, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex z(pts[i], 0.0);
    const Complex pz = p(z);
    const Complex direct_r = pz * pz - kI * 0.8 * p.derivative(z) - (1.7 - v(pts[i]));
    const Complex direct_b = -kI * 0.8 * p.second_derivative(z) + 2.0 * pz * p.derivative(z) + v.derivative(pts[i]);
    CHECK(std::abs(rr.value[i] - direct_r) <= 1e-11 * std::max(1.0, std::abs(direct_r)));
    CHECK(std::abs(rb.value[i] - direct_b) <= 1e-11 * std::max(1.0, std::abs(direct_b)));
  }
  // The Burgers residual is the derivative of the Riccati one.
  for (double x : {1.2, 3.3}) {
    auto re = [&](double t) {
      const std::vector<double> one{t};
      return qhj::riccati_residual(p, v, 1.7, one).value[0];
    };
    const double hstep = 1e-4;
    const Complex fd = (re(x + hstep) - re(x - hstep)) / (2 * hstep);
    const std::vector<double> one{x};
    CHECK(std::abs(qhj::burgers_residual(p, v, one).value[0] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("Burgers residual") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto v = potentials::schrodinger_potential(h);
  const auto g = grid(-6, 6, 600);
  CHECK(qhj::burgers_residual(qhj::QuantumMomentumFunction({}, h), v, g).max_abs() <= 1e-10);
  CHECK(qhj::burgers_residual(qhj::QuantumMomentumFunction({}, std::nullopt), constant_potential(2.0), g)
            .max_abs() == 0.0);
  const auto nodes = stieltjes::equilibrate(h, 2);
  CHECK(qhj::burgers_residual(qhj::qmf_from_state(h, nodes), v, g).max_abs() <= 1e-8);
}

TEST_CASE("contour action counts enclosed poles") {
  const qhj::QuantumMomentumFunction three({Complex(0.5, 0.2), Complex(-0.8, 0.0), Complex(0.1, -1.1)},
                                           std::nullopt);
  CHECK(qhj::contour_action(three, {0.0, 2.0, 256}) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(qhj::contour_action(three, {Complex(5.0, 5.0), 1.0, 256})) <= 1e-12);
  CHECK(qhj::contour_action(three, {Complex(0.5, 0.2), 0.3, 256}) == doctest::Approx(1.0).epsilon(1e-12));

  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto p5 = qhj::qmf_from_state(h, stieltjes::equilibrate(h, 5));
  CHECK(qhj::contour_action(p5, {0.0, 4.0, 256}) == doctest::Approx(5.0).epsilon(1e-10));
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(std::abs(qhj::moving_pole_residue(p5, k) - Complex(0.0, -1.0)) <= 1e-10);
  }
  CHECK_THROWS_AS(qhj::contour_integral(three, {0.0, 2.0, 32}), ContourError);
  CHECK_THROWS_AS(qhj::contour_integral(three, {0.0, 0.8, 256}), ContourError);
}

TEST_CASE("wavefunctions") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto psi0 = qhj::wavefunction(h, ChargeConfiguration());
  for (double x : {-2.0, 0.0, 0.5, 3.0}) {
    CHECK(psi0(x) == doctest::Approx(std::pow(std::numbers::pi, -0.25) * std::exp(-x * x / 2)).epsilon(1e-12));
  }
  const double r = 1.0 / std::numbers::sqrt2;
  const auto psi2 = qhj::wavefunction(h, ChargeConfiguration({-r, r}));
  const double c = 4.0 / std::sqrt(8.0 * std::sqrt(std::numbers::pi));
  for (double x : {-1.5, 0.1, 2.2}) {
    CHECK(std::abs(psi2(x)) == doctest::Approx(c * std::abs(x * x - 0.5) * std::exp(-x * x / 2)).epsilon(1e-11));
  }
  CHECK(psi2(r) == 0.0);
}

TEST_CASE("Schrodinger residual") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto v = potentials::schrodinger_potential(h);
  const auto g = grid(-6, 6, 600);
  CHECK(qhj::schrodinger_residual(qhj::wavefunction(h, ChargeConfiguration()), v, 1.0, g).max_abs() <= 1e-10);
  const auto nodes = stieltjes::equilibrate(h, 3);
  CHECK(qhj::schrodinger_residual(qhj::wavefunction(h, nodes), v, 7.0, g).max_abs() <= 1e-8);
  auto shifted = nodes.values();
  shifted[2] += 1e-3;
  CHECK(qhj::schrodinger_residual(qhj::wavefunction(h, ChargeConfiguration(shifted)), v, 7.0, g).max_abs() >= 1e-4);
}

TEST_CASE("quantize") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto q0 = qhj::quantize(h, 0);
  CHECK(q0.energy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q0.nodes.empty());
  CHECK(qhj::quantize(h, 4).energy == doctest::Approx(9.0).epsilon(1e-10));
  const auto q1 = qhj::quantize(h, 1);
  CHECK(std::abs(q1.nodes[0]) <= 1e-14);
  CHECK(q1.spread <= qhj::kQuantizeSpread);
  CHECK(q1.certificate_points.size() == 3);
  CHECK_THROWS_AS(qhj::quantize(make_prefactor(PolynomialFamily::laguerre(1.0)), 2), ConventionError);
}

TEST_CASE("Dirac action check") {
  const auto h = make_prefactor(PolynomialFamily::hermite());
  const auto g = grid(-4, 4, 801);
  for (int n = 0; n <= 3; ++n) {
    const auto d = qhj::dirac_action_check(h, n, g);
    INFO("n=", n);
    CHECK(d.max_dev <= 1e-8);
    CHECK(d.fd_dev <= 1e-6);
    CHECK(d.branch_failures.empty());
    CHECK(d.energy == doctest::Approx(2 * n + 1));
  }
}
