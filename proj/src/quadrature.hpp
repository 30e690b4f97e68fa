#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "spectralgas/configuration.hpp"

namespace spectralgas::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// Double-exponential quadrature over an interval of any kind. The integrand
// is only evaluated strictly inside the interval. Nested integrals need one
// Integrator per nesting level.
class Integrator {
 public:
  template <typename F>
  QuadratureResult operator()(const Interval& range, F f, double tol) {
    auto guarded = [&](double x) { return range.contains(x) ? f(x) : 0.0; };
    QuadratureResult r;
    const bool lo_inf = std::isinf(range.lo);
    const bool hi_inf = std::isinf(range.hi);
    if (lo_inf && hi_inf) {
      r.value = sinh_sinh_.integrate(guarded, tol, &r.error);
    } else if (lo_inf || hi_inf) {
      r.value = exp_sinh_.integrate(guarded, range.lo, range.hi, tol, &r.error);
    } else {
      r.value = tanh_sinh_.integrate(guarded, range.lo, range.hi, tol, &r.error);
    }
    return r;
  }

 private:
  boost::math::quadrature::tanh_sinh<double> tanh_sinh_;
  boost::math::quadrature::exp_sinh<double> exp_sinh_;
  boost::math::quadrature::sinh_sinh<double> sinh_sinh_;
};

template <typename F>
QuadratureResult integrate(const Interval& range, F f, double tol) {
  thread_local Integrator integrator;
  return integrator(range, f, tol);
}

}  // namespace spectralgas::detail
