#include <doctest.h>

#include <cmath>

#include "secrecy/oracle.hpp"
#include "secrecy/quadrature.hpp"

using namespace secrecy;

TEST_CASE("Gauss-Kronrod panel is exact on low-degree polynomials") {
  quad::QuadOptions one_panel;
  one_panel.initial_panels = 1;
  one_panel.rel_tol = 1e-13;
  for (int degree = 0; degree <= 19; ++degree) {
    auto f = [degree](double x) { return std::pow(x, degree); };
    const auto r = quad::integrate(f, 0.0, 1.0, one_panel);
    CAPTURE(degree);
    CHECK(r.value == doctest::Approx(1.0 / (degree + 1)).epsilon(1e-14));
  }
}

TEST_CASE("half-line integrals") {
  auto exp_decay = [](double z) { return std::exp(-z); };
  auto gamma2 = [](double z) { return z * std::exp(-z); };
  CHECK(std::abs(quad::integrate_half_line(exp_decay, 1.0, {.rel_tol = 1e-12}).value - 1.0) < 1e-10);
  CHECK(std::abs(quad::integrate_half_line(gamma2, 1.0, {.rel_tol = 1e-12}).value - 1.0) < 1e-10);
  for (double c : {0.1, 2.5, 100.0}) {
    auto pdf = [c](double z) { return c / ((c + z) * (c + z)); };
    const auto params = ChannelParams::from_scales(c, c);
    const auto r = oracle::integrate_half_line(pdf, params, 1e-12);
    CAPTURE(c);
    CHECK(std::abs(r.value - 1.0) < 1e-10);
    CHECK(r.abs_error_estimate <= 1e-12 * r.value);
  }
}

TEST_CASE("tightening the tolerance moves the result by at most 10 tol") {
  auto f = [](double z) { return std::pow(z, 1.5) * std::exp(-z) / (1.0 + z); };
  for (double tol : {1e-5, 1e-7, 1e-9}) {
    const double coarse = quad::integrate_half_line(f, 1.0, {.rel_tol = tol}).value;
    const double fine = quad::integrate_half_line(f, 1.0, {.rel_tol = tol / 10}).value;
    CHECK(std::abs(coarse - fine) <= 10.0 * tol * std::abs(fine));
  }
}

TEST_CASE("interval budget exhaustion carries the partial result") {
  // 1/sqrt(x) near 0 needs deep refinement; a tiny budget cannot finish.
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  quad::QuadOptions opts;
  opts.rel_tol = 1e-14;
  opts.initial_panels = 4;
  opts.max_intervals = 8;
  try {
    quad::integrate(f, 0.0, 1.0, opts);
    FAIL("expected QuadratureError");
  } catch (const quad::QuadratureError& e) {
    CHECK(e.partial().subdivisions == 8);
    CHECK(e.partial().value == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("invalid integrals are rejected") {
  auto f = [](double) { return 1.0; };
  CHECK_THROWS_AS(quad::integrate(f, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(quad::integrate_half_line(f, 0.0), DomainError);
  auto bad = [](double) { return std::nan(""); };
  CHECK_THROWS_AS(quad::integrate(bad, 0.0, 1.0), NumericError);
}
