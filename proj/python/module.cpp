#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spectralgas/errors.hpp"
#include "spectralgas/kirchhoff.hpp"
#include "spectralgas/orthopoly.hpp"
#include "spectralgas/qhj.hpp"
#include "spectralgas/rmt.hpp"
#include "spectralgas/stieltjes.hpp"

namespace py = pybind11;
using namespace spectralgas;
using orthopoly::PolynomialFamily;
using potentials::StatePrefactor;

namespace {

ChargeConfiguration config(const std::vector<double>& x, const StatePrefactor& pref) {
  return ChargeConfiguration(x, pref.support());
}

}  // namespace

PYBIND11_MODULE(spectralgas, m) {
  m.doc() = "Log-gas equilibria, pole dynamics, quantum Hamilton-Jacobi checks and GUE sampling";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<CapabilityError>(m, "CapabilityError", base);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base);
  py::register_exception<ConfigurationError>(m, "ConfigurationError", base);
  py::register_exception<ConventionError>(m, "ConventionError", base);
  py::register_exception<ContourError>(m, "ContourError", base);
  py::register_exception<PoleEvaluationError>(m, "PoleEvaluationError", base);
  auto numeric = py::register_exception<NumericError>(m, "NumericError", base);
  py::register_exception<stieltjes::NonConvergenceError>(m, "NonConvergenceError", numeric);
  py::register_exception<CollisionError>(m, "CollisionError", base);

  py::class_<PolynomialFamily>(m, "PolynomialFamily")
      .def_static("hermite", &PolynomialFamily::hermite)
      .def_static("laguerre", &PolynomialFamily::laguerre, py::arg("alpha"))
      .def_static("jacobi", &PolynomialFamily::jacobi, py::arg("alpha"), py::arg("beta"))
      .def_property_readonly("name", &PolynomialFamily::name)
      .def_property_readonly("alpha", &PolynomialFamily::alpha)
      .def_property_readonly("beta", &PolynomialFamily::beta)
      .def("__repr__", [](const PolynomialFamily& f) { return "<PolynomialFamily " + f.name() + ">"; });

  py::class_<StatePrefactor>(m, "StatePrefactor")
      .def_property_readonly("family", &StatePrefactor::family)
      .def_property_readonly("hbar", &StatePrefactor::hbar)
      .def("g", &StatePrefactor::g)
      .def("drift", py::overload_cast<double>(&StatePrefactor::drift, py::const_))
      .def("superpotential", &StatePrefactor::superpotential)
      .def_property_readonly("energy_shift", &StatePrefactor::energy_shift);

  m.def("make_prefactor",
        [](const PolynomialFamily& f, std::optional<double> l, double hbar) {
          return potentials::make_prefactor(f, {l, hbar});
        },
        py::arg("family"), py::arg("l") = py::none(), py::arg("hbar") = 1.0);
  m.def("coulomb", &potentials::coulomb, py::arg("l"));

  m.def("eval", [](const PolynomialFamily& f, int degree, double x) {
    const auto v = orthopoly::eval(f, degree, x);
    return py::make_tuple(v.value, v.derivative, v.second_derivative);
  }, py::arg("family"), py::arg("degree"), py::arg("x"), "(value, derivative, second derivative)");
  m.def("zeros", [](const PolynomialFamily& f, int n) { return orthopoly::zeros(f, n).values(); },
        py::arg("family"), py::arg("degree"));
  m.def("weight", &orthopoly::weight, py::arg("family"), py::arg("x"));

  m.def("energy", [](const std::vector<double>& x, const StatePrefactor& pref) {
    const auto e = stieltjes::energy(config(x, pref), pref);
    return py::make_tuple(e.energy, e.gradient);
  }, py::arg("positions"), py::arg("prefactor"), "(energy, gradient)");
  m.def("stationarity_residual", [](const std::vector<double>& x, const StatePrefactor& pref) {
    return stieltjes::stationarity_residual(config(x, pref), pref);
  }, py::arg("positions"), py::arg("prefactor"));
  m.def("equilibrate", [](const StatePrefactor& pref, int n, double grad_tol) {
    stieltjes::EquilibrateOptions o;
    o.grad_tol = grad_tol;
    return stieltjes::equilibrate(pref, n, std::nullopt, o).values();
  }, py::arg("prefactor"), py::arg("n"), py::arg("grad_tol") = 1e-10);
  m.def("quantum_action", [](const std::vector<double>& x, const StatePrefactor& pref) {
    return stieltjes::quantum_action(config(x, pref), pref).value();
  }, py::arg("positions"), py::arg("prefactor"));

  m.def("relax", [](const std::vector<double>& x, const StatePrefactor& pref, double tol) {
    kirchhoff::RelaxOptions o;
    o.tol = tol;
    const auto r = kirchhoff::relax(config(x, pref), pref, o);
    return py::dict(py::arg("positions") = r.config.values(), py::arg("residual_norm") = r.residual_norm,
                    py::arg("steps") = r.steps, py::arg("collision_events") = r.collision_events);
  }, py::arg("positions"), py::arg("prefactor"), py::arg("tol") = 1e-10);
  m.def("integrate_poles",
        [](const std::vector<std::complex<double>>& poles, double t_end, double tol, double gamma,
           std::optional<StatePrefactor> pref) {
          kirchhoff::FlowOptions o;
          o.pref = std::move(pref);
          const auto traj = kirchhoff::integrate({poles, 0.0, gamma}, o, t_end, tol);
          py::list out;
          for (const auto& s : traj.samples) out.append(py::make_tuple(s.time, s.poles));
          return out;
        },
        py::arg("poles"), py::arg("t_end"), py::arg("tol") = 1e-10, py::arg("gamma") = 0.5,
        py::arg("prefactor") = py::none(), "Kirchhoff flow; list of (t, poles)");

  m.def("quantize", [](const StatePrefactor& pref, int n) {
    const auto q = qhj::quantize(pref, n);
    return py::dict(py::arg("energy") = q.energy, py::arg("nodes") = q.nodes.values(),
                    py::arg("spread") = q.spread);
  }, py::arg("prefactor"), py::arg("n"));
  m.def("contour_action",
        [](const std::vector<std::complex<double>>& poles, std::complex<double> center, double radius,
           int samples, std::optional<StatePrefactor> pref) {
          const qhj::QuantumMomentumFunction p(poles, std::move(pref));
          return qhj::contour_action(p, {center, radius, samples});
        },
        py::arg("poles"), py::arg("center"), py::arg("radius"), py::arg("samples") = 256,
        py::arg("prefactor") = py::none());
  m.def("wavefunction", [](const StatePrefactor& pref, const std::vector<double>& nodes) {
    const auto psi = qhj::wavefunction(pref, config(nodes, pref));
    return py::cpp_function([psi](double x) { return psi(x); });
  }, py::arg("prefactor"), py::arg("nodes"), "Normalized psi as a callable");

  m.def("sample_gue", [](int dim, std::uint64_t seed, std::uint64_t index) {
    return rmt::sample_gue(dim, seed, index).eigenvalues;
  }, py::arg("dim"), py::arg("seed"), py::arg("index") = 0);
  m.def("sample_gue_eigenvalues",
        [](int dim, std::uint64_t seed, std::size_t count, std::optional<int> threads) {
          std::vector<double> flat;
          {
            py::gil_scoped_release release;
            flat = rmt::sample_gue_eigenvalues(dim, seed, count, threads.value_or(rmt::max_threads()));
          }
          py::list out;
          for (std::size_t i = 0; i < count; ++i) {
            out.append(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(i * dim),
                                           flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)));
          }
          return out;
        },
        py::arg("dim"), py::arg("seed"), py::arg("count"), py::arg("threads") = py::none());
  m.def("joint_pdf", [](const std::vector<double>& x, const PolynomialFamily& f, bool normalized) {
    return rmt::joint_pdf(ChargeConfiguration(x, f.support()), f, normalized);
  }, py::arg("positions"), py::arg("family"), py::arg("normalized") = false);
  m.def("compare_to_quantum", [](const StatePrefactor& pref, int n_states, std::size_t samples,
                                 std::uint64_t seed) {
    const auto d = rmt::compare_to_quantum(pref, n_states, samples, seed);
    py::list bins;
    for (const auto& b : d.bins) bins.append(py::make_tuple(b.center, b.empirical, b.theoretical));
    return py::dict(py::arg("ks_statistic") = d.ks_statistic, py::arg("bins") = bins,
                    py::arg("included_mass") = d.included_mass);
  }, py::arg("prefactor"), py::arg("n_states"), py::arg("samples"), py::arg("seed"));
  m.def("fokker_planck_residual",
        [](const StatePrefactor& pref, const std::vector<std::vector<double>>& points, double beta,
           std::optional<double> exponent_beta) {
          std::vector<ChargeConfiguration> pts;
          for (const auto& p : points) pts.push_back(config(p, pref));
          const int n = pts.empty() ? 1 : static_cast<int>(pts.front().size());
          return rmt::fokker_planck_residual({pref, n}, pts, beta, exponent_beta).max_relative_residual;
        },
        py::arg("prefactor"), py::arg("points"), py::arg("beta"), py::arg("exponent_beta") = py::none());
}
