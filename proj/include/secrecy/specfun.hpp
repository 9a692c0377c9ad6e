#pragma once

#include "secrecy/error.hpp"

// Real-valued special functions used by the secrecy closed forms.
// Every function is pure and reentrant. Out-of-domain arguments throw
// DomainError; a series or continued fraction that hits its iteration cap
// throws NumericError.
namespace secrecy::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kLn2 = 0.69314718055994530941723212145817657;

inline constexpr int kMaxSeriesTerms = 2000;
inline constexpr int kMaxFractionLevels = 1000;

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// ln B(x, y) = ln Gamma(x) + ln Gamma(y) - ln Gamma(x + y).
double ln_beta(double x, double y);

/// ln of the binomial coefficient C(n, v), 0 <= v <= n.
double ln_binomial(int n, int v);

/// H_m = 1 + 1/2 + ... + 1/m, with H_0 = 0.
double harmonic(int m);

/// psi(k) = -gamma_E + H_{k-1} for integer k >= 1.
double digamma_int(int k);

/// E_1(x) = integral_x^inf e^{-t}/t dt, x > 0.
double exp_integral_e1(double x);

/// e^x E_1(x), evaluated without forming e^x so it stays finite for large x.
double exp_scaled_e1(double x);

/// b^k e^b Gamma(1 - k, b) for integer k >= 1, b > 0. Lies in (0, 1) and
/// tends to 1 as b grows. Gamma(1 - k, b) itself is never formed.
double upper_gamma_scaled(int k, double b);

/// Regularized lower incomplete gamma gamma(k, x)/(k-1)! for integer k.
double lower_gamma_reg(int k, double x);

/// Regularized upper incomplete gamma Gamma(k, x)/(k-1)! for integer k.
/// Summed directly, so it keeps full relative accuracy in the tail.
double upper_gamma_reg(int k, double x);

/// Partial-sum record of the 2F1 power series.
struct SeriesSum {
  double value = 0.0;
  int terms = 0;
  double max_abs_term = 0.0;  // max |term| / |value| bounds cancellation loss
};

/// Plain power series of 2F1(a, b; c; z), requires |z| < 1.
SeriesSum gauss_2f1_series(double a, double b, double c, double z);

/// Pfaff route (1 - z)^{-a} 2F1(a, c - b; c; z/(z - 1)), requires z < 1/2.
SeriesSum gauss_2f1_pfaff(double a, double b, double c, double z);

/// Gauss hypergeometric 2F1(a, b; c; z) for z < 1: direct series for
/// z >= -1/2, Pfaff transformation below that.
double gauss_2f1(double a, double b, double c, double z);

/// Tricomi confluent hypergeometric U(a, b, z) for a > 0, z > 0 from
///   U = 1/Gamma(a) * integral_0^inf e^{-z t} t^{a-1} (1 + t)^{b-a-1} dt.
double tricomi_u(double a, double b, double z);

}  // namespace secrecy::specfun
