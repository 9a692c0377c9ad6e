#pragma once

#include <cmath>

#include "secrecy/error.hpp"

namespace secrecy {

/// Fading and interference parameters of the interference-limited link.
///
/// All exponential channel gains are parameterized by their *rate*
/// (|h|^2 ~ Exp(lambda_m), |g|^2 ~ Exp(beta_m), |t|^2 ~ Exp(lambda_e),
/// |e|^2 ~ Exp(beta_e)). Every distribution in the model depends on these
/// only through the SIR scale constants
///   c_m = rho * beta_m / lambda_m,   c_e = rho * beta_e / lambda_e,
/// with rho = P / P_I the transmit-power ratio.
class ChannelParams {
 public:
  ChannelParams(double power_ratio, double beta_m, double lambda_m,
                double beta_e, double lambda_e);

  /// Parameters with unit power ratio and unit rates for |h|^2 and |t|^2,
  /// so that c_m() == c_m and c_e() == c_e exactly.
  static ChannelParams from_scales(double c_m, double c_e);

  double power_ratio() const noexcept { return power_ratio_; }
  double beta_m() const noexcept { return beta_m_; }
  double lambda_m() const noexcept { return lambda_m_; }
  double beta_e() const noexcept { return beta_e_; }
  double lambda_e() const noexcept { return lambda_e_; }

  double c_m() const noexcept { return power_ratio_ * beta_m_ / lambda_m_; }
  double c_e() const noexcept { return power_ratio_ * beta_e_ / lambda_e_; }

 private:
  double power_ratio_;
  double beta_m_;
  double lambda_m_;
  double beta_e_;
  double lambda_e_;
};

/// N users, selection of the k-th strongest (rank 1 = best), and an
/// eavesdropper with L selection-combining antennas.
class SelectionConfig {
 public:
  SelectionConfig(int n_users, int rank, int eve_antennas);

  int n_users() const noexcept { return n_users_; }
  int rank() const noexcept { return rank_; }
  int eve_antennas() const noexcept { return eve_antennas_; }

 private:
  int n_users_;
  int rank_;
  int eve_antennas_;
};

/// Target secrecy rate R_s in bits/s/Hz and its SIR threshold 2^{R_s}.
class SecrecyTarget {
 public:
  explicit SecrecyTarget(double rate);

  double rate() const noexcept { return rate_; }
  double threshold() const noexcept { return std::exp2(rate_); }
  /// 2^{R_s} - 1 without cancellation for small R_s.
  double threshold_minus_one() const noexcept {
    return std::expm1(rate_ * 0.69314718055994530942);
  }

 private:
  double rate_;
};

namespace model {

/// CDF of a single SIR, z/(c + z) for z > 0 and 0 otherwise.
double sir_cdf(double z, double c);

/// Binomial summand C(N, v) F^v (1 - F)^{N-v} of the order-statistic CDF,
/// evaluated in log space.
double order_stat_term(double z, int n_users, int v, double c_m);

/// CDF of the k-th largest of N i.i.d. SIRs.
double kth_best_cdf(double z, const SelectionConfig& sel, double c_m);

/// 1 - kth_best_cdf, computed without cancellation when the CDF is near 1.
double kth_best_ccdf(double z, const SelectionConfig& sel, double c_m);

/// CDF of the eavesdropper's selection-combining output, (z/(c_e+z))^L.
double eve_sc_cdf(double z, int eve_antennas, double c_e);

/// Density L c_e z^{L-1} / (c_e + z)^{L+1}.
double eve_sc_pdf(double z, int eve_antennas, double c_e);

/// Large-N limit law Gamma(k, b_N/z)/(k-1)! with b_N = c_m (N - 1).
/// Needs N >= 2.
double kth_best_cdf_asymptotic(double z, const SelectionConfig& sel,
                               double c_m);

/// Large-L limit law exp(-b_L / z) with b_L = c_e (L - 1). Needs L >= 2.
double eve_sc_cdf_asymptotic(double z, int eve_antennas, double c_e);

inline double scale_b_n(double c_m, int n_users) {
  return c_m * (n_users - 1.0);
}
inline double scale_b_l(double c_e, int eve_antennas) {
  return c_e * (eve_antennas - 1.0);
}

}  // namespace model
}  // namespace secrecy
