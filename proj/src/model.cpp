#include "secrecy/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "secrecy/specfun.hpp"

namespace secrecy {
namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

double sum_ascending(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

ChannelParams::ChannelParams(double power_ratio, double beta_m,
                             double lambda_m, double beta_e, double lambda_e)
    : power_ratio_(power_ratio),
      beta_m_(beta_m),
      lambda_m_(lambda_m),
      beta_e_(beta_e),
      lambda_e_(lambda_e) {
  require_positive(power_ratio, "power_ratio");
  require_positive(beta_m, "beta_m");
  require_positive(lambda_m, "lambda_m");
  require_positive(beta_e, "beta_e");
  require_positive(lambda_e, "lambda_e");
  if (!(c_m() > 0.0) || !std::isfinite(c_m())) {
    throw DomainError("c_m must be positive and finite");
  }
  if (!(c_e() > 0.0) || !std::isfinite(c_e())) {
    throw DomainError("c_e must be positive and finite");
  }
}

ChannelParams ChannelParams::from_scales(double c_m, double c_e) {
  return ChannelParams(1.0, c_m, 1.0, c_e, 1.0);
}

SelectionConfig::SelectionConfig(int n_users, int rank, int eve_antennas)
    : n_users_(n_users), rank_(rank), eve_antennas_(eve_antennas) {
  if (n_users < 1) throw DomainError("n_users must be at least 1");
  if (rank < 1) throw DomainError("rank must be at least 1");
  if (rank > n_users) throw DomainError("rank exceeds n_users");
  if (eve_antennas < 1) throw DomainError("eve_antennas must be at least 1");
}

SecrecyTarget::SecrecyTarget(double rate) : rate_(rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DomainError("rate must be nonnegative and finite");
  }
}

namespace model {

double sir_cdf(double z, double c) {
  require_positive(c, "sir_cdf scale");
  if (!(z > 0.0)) return 0.0;
  if (!std::isfinite(z)) return 1.0;
  return z / (c + z);
}

double order_stat_term(double z, int n_users, int v, double c_m) {
  require_positive(c_m, "c_m");
  if (n_users < 1 || v < 0 || v > n_users) {
    throw DomainError("order_stat_term: need 0 <= v <= n_users");
  }
  if (!(z > 0.0)) return v == 0 ? 1.0 : 0.0;
  if (!std::isfinite(z)) return v == n_users ? 1.0 : 0.0;
  const double log_denom = std::log(c_m + z);
  const double log_f = std::log(z) - log_denom;
  const double log_fc = std::log(c_m) - log_denom;
  double e = specfun::ln_binomial(n_users, v);
  if (v > 0) e += v * log_f;
  if (n_users > v) e += (n_users - v) * log_fc;
  return std::exp(e);
}

double kth_best_cdf(double z, const SelectionConfig& sel, double c_m) {
  require_positive(c_m, "c_m");
  if (!(z > 0.0)) return 0.0;
  const int n = sel.n_users();
  std::vector<double> terms;
  terms.reserve(sel.rank());
  for (int v = n - sel.rank() + 1; v <= n; ++v) {
    terms.push_back(order_stat_term(z, n, v, c_m));
  }
  return std::min(1.0, sum_ascending(terms));
}

double kth_best_ccdf(double z, const SelectionConfig& sel, double c_m) {
  require_positive(c_m, "c_m");
  if (!(z > 0.0)) return 1.0;
  const double cdf = kth_best_cdf(z, sel, c_m);
  if (cdf <= 0.5) return 1.0 - cdf;
  const int n = sel.n_users();
  std::vector<double> terms;
  terms.reserve(n - sel.rank() + 1);
  for (int v = 0; v <= n - sel.rank(); ++v) {
    terms.push_back(order_stat_term(z, n, v, c_m));
  }
  return std::min(1.0, sum_ascending(terms));
}

double eve_sc_cdf(double z, int eve_antennas, double c_e) {
  require_positive(c_e, "c_e");
  if (eve_antennas < 1) throw DomainError("eve_antennas must be at least 1");
  if (!(z > 0.0)) return 0.0;
  if (!std::isfinite(z)) return 1.0;
  return std::pow(z / (c_e + z), eve_antennas);
}

double eve_sc_pdf(double z, int eve_antennas, double c_e) {
  require_positive(c_e, "c_e");
  if (eve_antennas < 1) throw DomainError("eve_antennas must be at least 1");
  if (!(z > 0.0) || !std::isfinite(z)) return 0.0;
  const double s = c_e + z;
  const double ratio = z / s;
  return eve_antennas * c_e * std::pow(ratio, eve_antennas - 1) / (s * s);
}

double kth_best_cdf_asymptotic(double z, const SelectionConfig& sel,
                               double c_m) {
  require_positive(c_m, "c_m");
  if (sel.n_users() < 2) {
    throw DomainError("asymptotic order-statistic law needs n_users >= 2");
  }
  if (!(z > 0.0)) return 0.0;
  if (!std::isfinite(z)) return 1.0;
  return specfun::upper_gamma_reg(sel.rank(), scale_b_n(c_m, sel.n_users()) / z);
}

double eve_sc_cdf_asymptotic(double z, int eve_antennas, double c_e) {
  require_positive(c_e, "c_e");
  if (eve_antennas < 2) {
    throw DomainError("asymptotic eavesdropper law needs eve_antennas >= 2");
  }
  if (!(z > 0.0)) return 0.0;
  if (!std::isfinite(z)) return 1.0;
  return std::exp(-scale_b_l(c_e, eve_antennas) / z);
}

}  // namespace model
}  // namespace secrecy
