#include <algorithm>
#include <cmath>

#include "secrecy/oracle.hpp"
#include "secrecy/specfun.hpp"

namespace secrecy::oracle {
namespace {

QuadOptions with_tolerance(double rel_tol) {
  QuadOptions opts;
  opts.rel_tol = rel_tol;
  return opts;
}

}  // namespace

double default_scale(const ChannelParams& params) {
  return std::max(params.c_m(), params.c_e());
}

QuadResult integrate_half_line(const quad::Integrand& f,
                               const ChannelParams& params, double rel_tol) {
  return quad::integrate_half_line(f, default_scale(params),
                                   with_tolerance(rel_tol));
}

QuadResult sop_quadrature(const ChannelParams& params, const SelectionConfig& sel,
                          const SecrecyTarget& target, double rel_tol) {
  const double cm = params.c_m();
  const double ce = params.c_e();
  const double tau = target.threshold();
  const double tau_m1 = target.threshold_minus_one();
  const int l = sel.eve_antennas();
  auto f = [&](double z) {
    const double pdf = model::eve_sc_pdf(z, l, ce);
    if (pdf == 0.0) return 0.0;
    return pdf * model::kth_best_cdf(tau_m1 + tau * z, sel, cm);
  };
  return integrate_half_line(f, params, rel_tol);
}

QuadResult spsc_quadrature(const ChannelParams& params,
                           const SelectionConfig& sel, double rel_tol) {
  QuadResult r = sop_quadrature(params, sel, SecrecyTarget(0.0), rel_tol);
  r.value = 1.0 - r.value;
  return r;
}

QuadResult sop_asymptotic_quadrature(const ChannelParams& params,
                                     const SelectionConfig& sel,
                                     const SecrecyTarget& target,
                                     double rel_tol) {
  if (sel.n_users() < 2) {
    throw DomainError("asymptotic forms need n_users >= 2");
  }
  const double ce = params.c_e();
  const double b_n = model::scale_b_n(params.c_m(), sel.n_users());
  const double tau = target.threshold();
  const int l = sel.eve_antennas();
  const int k = sel.rank();
  auto f = [&](double z) {
    const double pdf = model::eve_sc_pdf(z, l, ce);
    if (pdf == 0.0) return 0.0;
    return pdf * specfun::upper_gamma_reg(k, b_n / (tau * z));
  };
  return integrate_half_line(f, params, rel_tol);
}

QuadResult esc_quadrature(const ChannelParams& params, const SelectionConfig& sel,
                          double rel_tol) {
  const double cm = params.c_m();
  const double ce = params.c_e();
  const int l = sel.eve_antennas();
  auto f = [&](double z) {
    const double eve = model::eve_sc_cdf(z, l, ce);
    if (eve == 0.0) return 0.0;
    return eve / (1.0 + z) * model::kth_best_ccdf(z, sel, cm);
  };
  // The integrand spreads roughly log-uniformly between c_e and the typical
  // selected SIR; centre the map on their geometric mean.
  const double typical = cm * sel.n_users() / sel.rank();
  const double scale = std::sqrt(std::max(ce, 1e-300) * std::max(typical, ce));
  QuadResult r = quad::integrate_half_line(f, scale, with_tolerance(rel_tol));
  r.value /= specfun::kLn2;
  r.abs_error_estimate /= specfun::kLn2;
  return r;
}

QuadResult esc_asymptotic_quadrature(const ChannelParams& params, int n_users,
                                     int rank, double rel_tol) {
  if (n_users < 2) throw DomainError("esc_asymptotic needs n_users >= 2");
  if (rank < 1) throw DomainError("rank must be at least 1");
  if (rank > n_users) throw DomainError("rank exceeds n_users");
  const double ce = params.c_e();
  const double b_n = model::scale_b_n(params.c_m(), n_users);
  auto f = [&](double z) {
    return z / ((1.0 + z) * (ce + z)) * specfun::lower_gamma_reg(rank, b_n / z);
  };
  const double scale = std::sqrt(ce * std::max(b_n / rank, ce));
  QuadResult r = quad::integrate_half_line(f, scale, with_tolerance(rel_tol));
  r.value /= specfun::kLn2;
  r.abs_error_estimate /= specfun::kLn2;
  return r;
}

}  // namespace secrecy::oracle
