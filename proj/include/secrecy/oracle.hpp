#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secrecy/model.hpp"
#include "secrecy/quadrature.hpp"
#include "secrecy/rng.hpp"

// Independent ground truth for the closed forms: adaptive quadrature of the
// defining integrals, and a seeded Monte Carlo simulation of the physical
// channel model.
namespace secrecy::oracle {

using quad::QuadOptions;
using quad::QuadResult;

/// Default scale for the half-line map: the larger SIR scale constant.
double default_scale(const ChannelParams& params);

/// integral_0^inf f(z) dz using the scale max(c_m, c_e).
QuadResult integrate_half_line(const quad::Integrand& f,
                               const ChannelParams& params, double rel_tol);

/// Outage probability integral_0^inf f_X(z) F_{Z(N-k+1)}(tau - 1 + tau z) dz
/// with the exact order-statistic CDF.
QuadResult sop_quadrature(const ChannelParams& params, const SelectionConfig& sel,
                          const SecrecyTarget& target, double rel_tol = 1e-9);

/// 1 - sop_quadrature at R_s = 0.
QuadResult spsc_quadrature(const ChannelParams& params,
                           const SelectionConfig& sel, double rel_tol = 1e-9);

/// Same integral with the inverse-gamma large-N CDF evaluated at tau z.
QuadResult sop_asymptotic_quadrature(const ChannelParams& params,
                                     const SelectionConfig& sel,
                                     const SecrecyTarget& target,
                                     double rel_tol = 1e-11);

/// Ergodic secrecy capacity (bits/s/Hz) for any N, k, L:
/// (1/ln 2) integral_0^inf F_X(z) / (1 + z) * (1 - F_{Z(N-k+1)}(z)) dz.
QuadResult esc_quadrature(const ChannelParams& params, const SelectionConfig& sel,
                          double rel_tol = 1e-8);

/// The ESC integral with the large-N CDF and a single eavesdropper antenna.
QuadResult esc_asymptotic_quadrature(const ChannelParams& params, int n_users,
                                     int rank, double rel_tol = 1e-10);

/// Monte Carlo mean with its standard error.
struct EstimateWithCI {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
  std::uint64_t n_samples = 0;
  double half_width_95 = 0.0;  // 1.96 * std_error

  /// From the mean and the sum of squared deviations m2.
  static EstimateWithCI from_moments(double mean, double m2, std::uint64_t n);
};

struct SimConfig {
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 42;
  // Samples per unit of work handed to a worker. Has no effect on results:
  // random streams and partial sums are keyed to fixed internal blocks.
  std::uint64_t batch_size = 65'536;
  unsigned workers = 0;  // 0 = hardware concurrency
  // Distinguishes independent runs under one seed (e.g. sweep points).
  std::uint64_t stream = 0;
};

/// Samples per random-number stream and per partial sum.
inline constexpr std::uint64_t kBlockSamples = 4096;

struct McEstimate {
  EstimateWithCI sop;
  EstimateWithCI spsc;
  EstimateWithCI esc;  // bits/s/Hz
};

/// Outage estimates for several target rates from one common sample set.
struct McRateSweep {
  std::vector<EstimateWithCI> sop;  // one per requested rate
  EstimateWithCI spsc;
  EstimateWithCI esc;
};

McEstimate mc_estimate(const ChannelParams& params, const SelectionConfig& sel,
                       const SecrecyTarget& target, const SimConfig& sim);

McRateSweep mc_estimate_rates(const ChannelParams& params,
                              const SelectionConfig& sel,
                              std::span<const double> rates,
                              const SimConfig& sim);

/// k-th largest element (k = 1 is the maximum). Equal values are ordered by
/// original index, which only matters for which copy is reported.
double kth_largest(std::span<const double> values, int k);

/// One realization of the selected user's SIR and the eavesdropper's
/// selection-combining SIR.
struct SirDraw {
  double legit = 0.0;
  double eve = 0.0;
};

/// Draws the physical model: exponential channel gains by inverse CDF,
/// SIR = rho |h|^2 / |g|^2, k-th best user selection, max over Eve's
/// antennas. Reusable scratch; not thread-safe, use one per worker.
class SirSampler {
 public:
  SirSampler(const ChannelParams& params, const SelectionConfig& sel);
  SirDraw draw(rng::Xoshiro256& gen);

 private:
  double rho_;
  double lambda_m_;
  double beta_m_;
  double lambda_e_;
  double beta_e_;
  int rank_;
  int eve_antennas_;
  std::vector<double> scratch_;
};

}  // namespace secrecy::oracle
