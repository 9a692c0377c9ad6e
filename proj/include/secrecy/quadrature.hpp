#pragma once

#include <functional>
#include <string>

#include "secrecy/error.hpp"

namespace secrecy::quad {

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions = 0;
};

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_intervals = 10000;
  // Equal-width panels the domain is cut into before adaptive refinement
  // starts, so narrow features are not missed by a single coarse rule.
  int initial_panels = 32;
};

/// Thrown when the interval budget is exhausted; carries the best estimate
/// reached so far.
class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, QuadResult partial)
      : NumericError(what), partial_(partial) {}
  const QuadResult& partial() const noexcept { return partial_; }

 private:
  QuadResult partial_;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod integration over [a, b].
/// The interval with the largest error estimate is bisected until the total
/// estimate drops below max(abs_tol, rel_tol * |value|).
QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadOptions& opts = {});

/// Integral over (0, inf) after the change of variables z = s*u/(1-u),
/// which maps the half line onto (0, 1) with z = s at u = 1/2. Pick `scale`
/// near where the integrand's mass sits.
QuadResult integrate_half_line(const Integrand& f, double scale,
                               const QuadOptions& opts = {});

}  // namespace secrecy::quad
