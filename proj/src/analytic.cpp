#include "secrecy/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "secrecy/specfun.hpp"

namespace secrecy {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::exact: return "exact";
    case Method::asymptotic_n: return "asymptotic_n";
    case Method::asymptotic_nl: return "asymptotic_nl";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

namespace analytic {
namespace {

using specfun::kLn2;

// A term held as sign * exp(log_mag).
struct LogTerm {
  double log_mag;
  int sign;
};

double sum_log_terms(std::vector<LogTerm>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const LogTerm& x, const LogTerm& y) { return x.log_mag < y.log_mag; });
  double s = 0.0;
  for (const auto& t : terms) s += t.sign * std::exp(t.log_mag);
  return s;
}

LogTerm log_of(double x) {
  if (x == 0.0 || !std::isfinite(x)) {
    std::ostringstream os;
    os << "closed-form term is " << x;
    throw NumericError(os.str());
  }
  return {std::log(std::abs(x)), x < 0.0 ? -1 : 1};
}

double clamp_probability(double p, const char* what) {
  if (!std::isfinite(p)) {
    throw NumericError(std::string(what) + " is not finite");
  }
  if (p < 0.0) {
    if (p >= -kClampTolerance) return 0.0;
  } else if (p > 1.0) {
    if (p <= 1.0 + kClampTolerance) return 1.0;
  } else {
    return p;
  }
  std::ostringstream os;
  os.precision(17);
  os << what << " evaluated to " << p << ", outside [0, 1]";
  throw NumericError(os.str());
}

void require_asymptotic_n(const SelectionConfig& sel) {
  if (sel.n_users() < 2) {
    throw DomainError("asymptotic forms need n_users >= 2");
  }
}

// x^k U(k, k+1-L, x): the probability that the inverse-gamma limit beats
// the eavesdropper, in the large-N regime.
double positive_capacity_limit(int k, int eve_antennas, double x) {
  const double u = specfun::tricomi_u(k, k + 1.0 - eve_antennas, x);
  return std::exp(k * std::log(x) + std::log(u));
}

}  // namespace

double sop_exact(const ChannelParams& params, const SelectionConfig& sel,
                 const SecrecyTarget& target) {
  const int n = sel.n_users();
  const int k = sel.rank();
  const int l = sel.eve_antennas();
  const double cm = params.c_m();
  const double ce = params.c_e();
  const double tau = target.threshold();
  const double tau_m1 = target.threshold_minus_one();
  const bool at_zero_rate = tau_m1 == 0.0;

  const double shift = tau_m1 + cm;
  const double arg = 1.0 - shift / (tau * ce);
  const double log_prefix = std::log(static_cast<double>(l)) -
                            l * std::log(ce) - l * std::log(tau);
  const double log_cm = std::log(cm);
  const double log_shift = std::log(shift);
  const double log_tau_m1 = at_zero_rate ? 0.0 : std::log(tau_m1);

  std::vector<LogTerm> terms;
  for (int v = n - k + 1; v <= n; ++v) {
    const double log_v = specfun::ln_binomial(n, v) + (n - v) * log_cm;
    for (int j = at_zero_rate ? v : 0; j <= v; ++j) {
      const LogTerm hyp = log_of(specfun::gauss_2f1(l + 1.0, l + j, n + l + 1.0, arg));
      double e = log_prefix + log_v + specfun::ln_binomial(v, j) +
                 specfun::ln_beta(l + j, n - j + 1.0) +
                 (l + j - n) * log_shift + hyp.log_mag;
      if (j < v) e += (v - j) * log_tau_m1;
      terms.push_back({e, hyp.sign});
    }
  }
  return clamp_probability(sum_log_terms(terms), "exact SOP");
}

double spsc_exact(const ChannelParams& params, const SelectionConfig& sel) {
  const int n = sel.n_users();
  const int k = sel.rank();
  const int l = sel.eve_antennas();
  const double cm = params.c_m();
  const double ce = params.c_e();
  const double arg = 1.0 - cm / ce;
  const double log_prefix =
      std::log(static_cast<double>(l)) + l * (std::log(cm) - std::log(ce));

  std::vector<LogTerm> terms;
  for (int v = n - k + 1; v <= n; ++v) {
    const LogTerm hyp = log_of(specfun::gauss_2f1(l + 1.0, l + v, n + l + 1.0, arg));
    terms.push_back({log_prefix + specfun::ln_binomial(n, v) +
                         specfun::ln_beta(l + v, n - v + 1.0) + hyp.log_mag,
                     hyp.sign});
  }
  return clamp_probability(1.0 - sum_log_terms(terms), "exact SPSC");
}

double sop_asymptotic_n(const ChannelParams& params, const SelectionConfig& sel,
                        const SecrecyTarget& target) {
  require_asymptotic_n(sel);
  const double x = model::scale_b_n(params.c_m(), sel.n_users()) /
                   (target.threshold() * params.c_e());
  return clamp_probability(
      1.0 - positive_capacity_limit(sel.rank(), sel.eve_antennas(), x),
      "asymptotic SOP");
}

double spsc_asymptotic_n(const ChannelParams& params,
                         const SelectionConfig& sel) {
  require_asymptotic_n(sel);
  const double x = model::scale_b_n(params.c_m(), sel.n_users()) / params.c_e();
  return clamp_probability(
      positive_capacity_limit(sel.rank(), sel.eve_antennas(), x),
      "asymptotic SPSC");
}

double sop_asymptotic_nl(const ChannelParams& params,
                         const SelectionConfig& sel,
                         const SecrecyTarget& target) {
  require_asymptotic_n(sel);
  if (sel.eve_antennas() < 2) {
    throw DomainError("large-L asymptotic needs eve_antennas >= 2");
  }
  const double b_n = model::scale_b_n(params.c_m(), sel.n_users());
  const double b_l = model::scale_b_l(params.c_e(), sel.eve_antennas());
  return 1.0 - std::pow(1.0 + target.threshold() * b_l / b_n, -sel.rank());
}

double sop_equal_nl_limit(const ChannelParams& params, int rank,
                          const SecrecyTarget& target) {
  if (rank < 1) throw DomainError("rank must be at least 1");
  const double fading_ratio = params.beta_e() * params.lambda_m() /
                              (params.lambda_e() * params.beta_m());
  return 1.0 - std::pow(1.0 + target.threshold() * fading_ratio, -rank);
}

double v_log_moment(int k, double a) {
  if (k < 1) throw DomainError("v_log_moment: k must be at least 1");
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("v_log_moment: a must be positive and finite");
  }
  // With m = k - mu - 1 and S = e^a E_1(a) = -e^a Ei(-a), the bracket
  //   [ (-a)^m S + sum_{v=1..m} (v-1)! (-a)^{m-v} ] / m!
  // is the remainder of the asymptotic series of S, equal to e^a E_{m+1}(a).
  // Summing those positive terms avoids the cancellation of the raw form.
  double total = 0.0;
  for (int m = 1; m <= k; ++m) total += specfun::upper_gamma_scaled(m, a) / a;
  return std::log(a) + total;
}

double esc_asymptotic(const ChannelParams& params, int n_users, int rank) {
  if (n_users < 2) throw DomainError("esc_asymptotic needs n_users >= 2");
  if (rank < 1) throw DomainError("rank must be at least 1");
  if (rank > n_users) throw DomainError("rank exceeds n_users");
  const double ce = params.c_e();
  const double b_n = model::scale_b_n(params.c_m(), n_users);
  const double psi = specfun::digamma_int(rank);
  const double v_b = v_log_moment(rank, b_n);
  if (std::abs(ce - 1.0) <= kUnitScaleSwitch) {
    return (-psi + v_b - specfun::upper_gamma_scaled(rank, b_n)) / kLn2;
  }
  const double v_scaled = v_log_moment(rank, b_n / ce);
  return (-psi + (ce * v_scaled - v_b) / (ce - 1.0)) / kLn2;
}

double esc_scaling_approx(const ChannelParams& params, int n_users, int rank) {
  if (n_users < 2) throw DomainError("esc_scaling_approx needs n_users >= 2");
  if (rank < 1) throw DomainError("rank must be at least 1");
  const double ce = params.c_e();
  const double log_b = std::log(model::scale_b_n(params.c_m(), n_users));
  const double eve_term = std::abs(ce - 1.0) <= kUnitScaleSwitch
                              ? 1.0
                              : ce * std::log(ce) / (ce - 1.0);
  return (-specfun::digamma_int(rank) + log_b - eve_term) / kLn2;
}

double esc_gap_limit(int rank) {
  if (rank < 1) throw DomainError("rank must be at least 1");
  return specfun::harmonic(rank - 1) / kLn2;
}

SecrecyMetrics metrics_exact(const ChannelParams& params,
                             const SelectionConfig& sel,
                             const SecrecyTarget& target) {
  return {sop_exact(params, sel, target), spsc_exact(params, sel), Method::exact};
}

SecrecyMetrics metrics_asymptotic_n(const ChannelParams& params,
                                    const SelectionConfig& sel,
                                    const SecrecyTarget& target) {
  return {sop_asymptotic_n(params, sel, target), spsc_asymptotic_n(params, sel),
          Method::asymptotic_n};
}

}  // namespace analytic
}  // namespace secrecy
