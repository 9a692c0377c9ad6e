#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "secrecy/analytic.hpp"
#include "secrecy/oracle.hpp"
#include "secrecy/specfun.hpp"
#include "test_support.hpp"

using namespace secrecy;
using namespace secrecy::oracle;
using secrecy::testing::rel_diff;

namespace {
const ChannelParams kFig2(2.0, 2.0, 0.5, 5.0, 4.0);
const ChannelParams kFig4(4.0, 2.0, 4.0, 3.0, 3.0);
constexpr double kZ999 = 3.29;

bool brackets(const EstimateWithCI& e, double truth) {
  return std::abs(e.mean - truth) <= kZ999 * e.std_error;
}

SimConfig sim(std::uint64_t n, std::uint64_t seed = 42) {
  SimConfig s;
  s.n_samples = n;
  s.seed = seed;
  return s;
}

// DKW half-width for n samples at 99% confidence.
double dkw(std::size_t n) { return std::sqrt(std::log(2.0 / 0.01) / (2.0 * n)); }
}  // namespace

TEST_CASE("kth_largest") {
  const std::vector<double> a{3, 1, 2};
  CHECK(kth_largest(a, 1) == 3);
  CHECK(kth_largest(a, 3) == 1);
  CHECK(kth_largest(std::vector<double>{5, 5, 1}, 2) == 5);
  CHECK_THROWS_AS(kth_largest(a, 0), DomainError);
  CHECK_THROWS_AS(kth_largest(a, 4), DomainError);
}

TEST_CASE("EstimateWithCI") {
  const auto e = EstimateWithCI::from_moments(0.3, 0.21 * 99.0, 100);
  CHECK(e.std_error == doctest::Approx(std::sqrt(0.21 / 100.0)).epsilon(1e-14));
  CHECK(std::abs(e.half_width_95 - 1.96 * e.std_error) < 1e-12);
  CHECK(e.n_samples == 100);
}

TEST_CASE("sop_quadrature and spsc_quadrature") {
  const auto sym = ChannelParams::from_scales(2.5, 2.5);
  CHECK(std::abs(sop_quadrature(sym, SelectionConfig(1, 1, 1), SecrecyTarget(0.0)).value - 0.5) < 1e-9);
  CHECK(sop_quadrature(kFig2, SelectionConfig(10, 1, 2), SecrecyTarget(30.0)).value >= 0.999);
  for (int n : {3, 20}) {
    const SelectionConfig sel(n, 2, 2);
    CHECK(spsc_quadrature(kFig2, sel).value ==
          doctest::Approx(1.0 - sop_quadrature(kFig2, sel, SecrecyTarget(0.0)).value).epsilon(1e-12));
    CHECK(rel_diff(spsc_quadrature(kFig2, sel).value, analytic::spsc_exact(kFig2, sel)) < 1e-7);
  }
  const auto r = sop_quadrature(kFig4, SelectionConfig(50, 3, 4), SecrecyTarget(4.0));
  CHECK(r.abs_error_estimate <= 1e-9 * r.value);
  CHECK(rel_diff(r.value, analytic::sop_exact(kFig4, SelectionConfig(50, 3, 4), SecrecyTarget(4.0))) < 1e-6);
}

TEST_CASE("sop_asymptotic_quadrature") {
  for (int n : {2, 30, 1000}) {
    for (double rate : {0.0, 1.0, 4.0}) {
      const double x = 8.0 * (n - 1) / (std::exp2(rate) * 2.5);
      const double expected = 1.0 - x * specfun::exp_scaled_e1(x);
      const double got = sop_asymptotic_quadrature(kFig2, SelectionConfig(n, 1, 1), SecrecyTarget(rate)).value;
      CHECK(std::abs(got - expected) <= 1e-9 * expected);
    }
  }
}

TEST_CASE("esc_quadrature") {
  SUBCASE("dominant eavesdropper drives ESC to zero") {
    const auto p = ChannelParams::from_scales(1.0, 1e6);
    CHECK(esc_quadrature(p, SelectionConfig(1, 1, 1)).value < 1e-3);
  }

  SUBCASE("doubling N adds about one bit") {
    const double e64 = esc_quadrature(kFig4, SelectionConfig(64, 1, 1)).value;
    const double e128 = esc_quadrature(kFig4, SelectionConfig(128, 1, 1)).value;
    CHECK(e64 == doctest::Approx(5.2102).epsilon(1e-4));
    CHECK(std::abs(e128 - e64 - 1.0) < 0.1);
  }

  SUBCASE("independent integral") {
    for (auto [n, k, l] : {std::tuple{1, 1, 1}, {10, 2, 2}, {40, 3, 4}}) {
      const double c_m = 2.0;
      const double c_e = 4.0;
      auto integrand = [&](double z) {
        const double fx = std::pow(z / (c_e + z), l);
        const double f = z / (c_m + z);
        double tail = 0.0;
        for (int v = 0; v <= n - k; ++v) {
          tail += static_cast<double>(secrecy::testing::binomial_exact(n, v)) *
                  std::pow(f, v) * std::pow(1.0 - f, n - v);
        }
        return fx / (1.0 + z) * tail;
      };
      const double ref = secrecy::testing::de_half_line(integrand, 0.0, 1e-12) / std::log(2.0);
      CHECK(rel_diff(esc_quadrature(kFig4, SelectionConfig(n, k, l)).value, ref) < 1e-8);
    }
  }
}

TEST_CASE("esc_asymptotic_quadrature at c_e = 1 matches the unit-scale branch") {
  const auto p = ChannelParams::from_scales(2.0, 1.0);
  for (auto [n, k] : {std::pair{50, 1}, {100, 2}, {500, 3}}) {
    CHECK(rel_diff(esc_asymptotic_quadrature(p, n, k).value, analytic::esc_asymptotic(p, n, k)) < 1e-6);
  }
}

TEST_CASE("Monte Carlo is deterministic and schedule independent") {
  const SelectionConfig sel(10, 2, 2);
  const SecrecyTarget t(1.0);
  SimConfig base = sim(100'000, 9);
  base.workers = 1;
  const McEstimate a = mc_estimate(kFig2, sel, t, base);
  const McEstimate b = mc_estimate(kFig2, sel, t, base);
  CHECK(a.sop.mean == b.sop.mean);
  CHECK(a.esc.mean == b.esc.mean);
  CHECK(a.esc.std_error == b.esc.std_error);

  for (std::uint64_t batch : {1ULL, 1000ULL, 4096ULL, 50'000ULL, 1'000'000ULL}) {
    for (unsigned workers : {1u, 3u, 8u}) {
      SimConfig s = base;
      s.batch_size = batch;
      s.workers = workers;
      const McEstimate c = mc_estimate(kFig2, sel, t, s);
      CAPTURE(batch);
      CAPTURE(workers);
      CHECK(c.sop.mean == a.sop.mean);
      CHECK(c.spsc.mean == a.spsc.mean);
      CHECK(c.esc.mean == a.esc.mean);
      CHECK(c.esc.std_error == a.esc.std_error);
    }
  }

  SimConfig other = base;
  other.seed = 10;
  CHECK(mc_estimate(kFig2, sel, t, other).esc.mean != a.esc.mean);
  other = base;
  other.stream = 1;
  CHECK(mc_estimate(kFig2, sel, t, other).esc.mean != a.esc.mean);
}

TEST_CASE("Monte Carlo rate sweep shares one sample set") {
  const SelectionConfig sel(5, 1, 2);
  const std::vector<double> rates{0.0, 0.5, 2.0};
  const SimConfig s = sim(50'000, 3);
  const McRateSweep sweep = mc_estimate_rates(kFig4, sel, rates, s);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const McEstimate one = mc_estimate(kFig4, sel, SecrecyTarget(rates[i]), s);
    CHECK(sweep.sop[i].mean == one.sop.mean);
  }
  CHECK(sweep.sop[0].mean + sweep.spsc.mean == 1.0);
  CHECK(sweep.sop[0].mean <= sweep.sop[1].mean);
  CHECK(sweep.sop[1].mean <= sweep.sop[2].mean);
}

TEST_CASE("Monte Carlo symmetric case") {
  const auto sym = ChannelParams::from_scales(2.5, 2.5);
  const McEstimate e = mc_estimate(sym, SelectionConfig(1, 1, 1), SecrecyTarget(0.0), sim(1'000'000));
  CHECK(brackets(e.sop, 0.5));
  CHECK(e.sop.mean + e.spsc.mean == 1.0);
  CHECK(e.sop.n_samples == 1'000'000);
}

TEST_CASE("Monte Carlo brackets the closed forms at 1e7 samples") {
  const SelectionConfig sel(10, 2, 2);
  const McEstimate e = mc_estimate(kFig2, sel, SecrecyTarget(1.0), sim(10'000'000));
  CHECK(brackets(e.sop, analytic::sop_exact(kFig2, sel, SecrecyTarget(1.0))));
  CHECK(brackets(e.esc, esc_quadrature(kFig2, sel).value));

  const SelectionConfig sel20(20, 1, 2);
  const McEstimate f = mc_estimate(kFig2, sel20, SecrecyTarget(0.0), sim(10'000'000, 43));
  CHECK(brackets(f.spsc, analytic::spsc_exact(kFig2, sel20)));
}

TEST_CASE("sampled SIR distributions sit inside the DKW band") {
  constexpr std::size_t kDraws = 1'000'000;
  const SelectionConfig sel(7, 2, 3);
  SirSampler sampler(kFig2, sel);
  rng::Xoshiro256 gen(rng::stream_key(42, 0, 0));
  std::vector<double> legit(kDraws);
  std::vector<double> eve(kDraws);
  for (std::size_t i = 0; i < kDraws; ++i) {
    const SirDraw d = sampler.draw(gen);
    legit[i] = d.legit;
    eve[i] = d.eve;
  }
  std::sort(legit.begin(), legit.end());
  std::sort(eve.begin(), eve.end());
  const double band = dkw(kDraws);
  for (int i = 1; i <= 20; ++i) {
    const double z = 0.25 * std::pow(1.5, i);
    const double emp_legit =
        static_cast<double>(std::upper_bound(legit.begin(), legit.end(), z) - legit.begin()) / kDraws;
    const double emp_eve =
        static_cast<double>(std::upper_bound(eve.begin(), eve.end(), z) - eve.begin()) / kDraws;
    CAPTURE(z);
    CHECK(std::abs(emp_legit - model::kth_best_cdf(z, sel, kFig2.c_m())) < band);
    CHECK(std::abs(emp_eve - model::eve_sc_cdf(z, 3, kFig2.c_e())) < band);
  }
}

TEST_CASE("invalid simulation settings") {
  const SelectionConfig sel(3, 1, 1);
  CHECK_THROWS_AS(mc_estimate(kFig2, sel, SecrecyTarget(1.0), sim(0)), DomainError);
  SimConfig s = sim(10);
  s.batch_size = 0;
  CHECK_THROWS_AS(mc_estimate(kFig2, sel, SecrecyTarget(1.0), s), DomainError);
}
