#pragma once

#include <string_view>

#include "secrecy/model.hpp"

// Closed-form and asymptotic secrecy metrics for k-th best user selection
// against a selection-combining eavesdropper, interference-limited links.
namespace secrecy {

/// How a metric value was obtained.
enum class Method { exact, asymptotic_n, asymptotic_nl, quadrature, monte_carlo };

std::string_view to_string(Method m) noexcept;

struct SecrecyMetrics {
  double sop = 0.0;   // Pr{C_s <= R_s}
  double spsc = 0.0;  // Pr{C_s > 0}
  Method method = Method::exact;
};

namespace analytic {

/// Exact secrecy outage probability for any N, k, L.
///
/// Finite double sum over v = N-k+1..N and j = 0..v of Beta-function and
/// Gauss-2F1 terms. Each term is assembled in log space, and the terms are
/// summed smallest first. At R_s = 0 the (tau-1)^{v-j} factor is taken as
/// 0^0 = 1 for j = v, which makes the result the exact complement of
/// spsc_exact. Results within 1e-9 outside [0, 1] are clamped; anything
/// further out throws NumericError.
double sop_exact(const ChannelParams& params, const SelectionConfig& sel,
                 const SecrecyTarget& target);

/// Exact probability of strictly positive secrecy capacity.
double spsc_exact(const ChannelParams& params, const SelectionConfig& sel);

/// Large-N outage: 1 - x^k U(k, k+1-L, x), x = b_N / (tau c_e).
double sop_asymptotic_n(const ChannelParams& params, const SelectionConfig& sel,
                        const SecrecyTarget& target);

/// Large-N SPSC: x^k U(k, k+1-L, x), x = b_N / c_e.
double spsc_asymptotic_n(const ChannelParams& params,
                         const SelectionConfig& sel);

/// Large-N, large-L outage: 1 - (1 + tau b_L / b_N)^{-k}. Needs N, L >= 2.
double sop_asymptotic_nl(const ChannelParams& params,
                         const SelectionConfig& sel,
                         const SecrecyTarget& target);

/// Constant that sop_asymptotic_nl approaches when N = L grows:
/// 1 - (1 + tau beta_e lambda_m / (lambda_e beta_m))^{-k}.
double sop_equal_nl_limit(const ChannelParams& params, int rank,
                          const SecrecyTarget& target);

/// V(k; a) = E[ln(t + a)] for t ~ Gamma(k, 1), via the finite
/// exponential-integral sum. e^a E_1(a) is taken in scaled form.
double v_log_moment(int k, double a);

/// Large-N ergodic secrecy capacity in bits/s/Hz for a single-antenna
/// eavesdropper. Switches to the c_e = 1 form when |c_e - 1| <= 1e-6.
double esc_asymptotic(const ChannelParams& params, int n_users, int rank);

/// Logarithmic scaling law of esc_asymptotic, replacing V(k; b_N) by
/// ln b_N and b_N^k e^{b_N} Gamma(1-k, b_N) by 1. Only accurate for N >> k.
double esc_scaling_approx(const ChannelParams& params, int n_users, int rank);

/// Limiting ESC loss of rank-k against rank-1 selection, H_{k-1} / ln 2.
double esc_gap_limit(int rank);

SecrecyMetrics metrics_exact(const ChannelParams& params,
                             const SelectionConfig& sel,
                             const SecrecyTarget& target);
SecrecyMetrics metrics_asymptotic_n(const ChannelParams& params,
                                    const SelectionConfig& sel,
                                    const SecrecyTarget& target);

inline constexpr double kClampTolerance = 1e-9;
inline constexpr double kUnitScaleSwitch = 1e-6;

}  // namespace analytic
}  // namespace secrecy
