#include <doctest.h>

#include <cmath>
#include <numbers>

#include "secrecy/analytic.hpp"
#include "secrecy/oracle.hpp"
#include "secrecy/specfun.hpp"
#include "test_support.hpp"

using namespace secrecy;
using namespace secrecy::analytic;
using secrecy::testing::rel_diff;

namespace {
const ChannelParams kFig2(2.0, 2.0, 0.5, 5.0, 4.0);  // c_m = 8, c_e = 2.5
const ChannelParams kFig4(4.0, 2.0, 4.0, 3.0, 3.0);  // c_m = 2, c_e = 4
constexpr double kInvLn2 = 1.4426950408889634;

// Outage integral written out from the model with no library code:
// f_X is the Eve SC density, F_Z the order-statistic CDF as a binomial tail.
double sop_reference(double c_m, double c_e, int n, int k, int l, double rate) {
  const double tau = std::exp2(rate);
  auto integrand = [&](double z) {
    const double pdf = l * c_e * std::pow(z, l - 1) / std::pow(c_e + z, l + 1);
    const double y = tau - 1.0 + tau * z;
    const double f = y / (c_m + y);
    double cdf = 0.0;
    for (int v = n - k + 1; v <= n; ++v) {
      cdf += static_cast<double>(secrecy::testing::binomial_exact(n, v)) *
             std::pow(f, v) * std::pow(1.0 - f, n - v);
    }
    return pdf * cdf;
  };
  return secrecy::testing::de_half_line(integrand, 0.0, 1e-13);
}
}  // namespace

TEST_CASE("Method names") {
  CHECK(to_string(Method::exact) == "exact");
  CHECK(to_string(Method::asymptotic_n) == "asymptotic_n");
  CHECK(to_string(Method::asymptotic_nl) == "asymptotic_nl");
  CHECK(to_string(Method::quadrature) == "quadrature");
  CHECK(to_string(Method::monte_carlo) == "monte_carlo");
}

TEST_CASE("sop_exact and spsc_exact examples") {
  const auto sym = ChannelParams::from_scales(3.0, 3.0);
  const SelectionConfig single(1, 1, 1);
  CHECK(sop_exact(sym, single, SecrecyTarget(0.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(spsc_exact(sym, single) == doctest::Approx(0.5).epsilon(1e-14));

  const SelectionConfig sel(10, 2, 2);
  const double exact = sop_exact(kFig2, sel, SecrecyTarget(1.0));
  const double quad = oracle::sop_quadrature(kFig2, sel, SecrecyTarget(1.0)).value;
  CHECK(rel_diff(exact, quad) < 1e-6);
  CHECK(rel_diff(exact, sop_reference(8.0, 2.5, 10, 2, 2, 1.0)) < 1e-9);

  for (int n : {2, 7, 20}) {
    for (int l : {1, 3}) {
      const SelectionConfig s(n, 2, l);
      CHECK(std::abs(sop_exact(kFig4, s, SecrecyTarget(0.0)) + spsc_exact(kFig4, s) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("sop_exact agrees with an independent integral across parameters") {
  for (int n : {1, 3, 12}) {
    for (int k = 1; k <= std::min(n, 3); ++k) {
      for (int l : {1, 2, 5}) {
        for (double rate : {0.0, 0.7, 3.0}) {
          const double ref = sop_reference(2.0, 4.0, n, k, l, rate);
          const double got = sop_exact(kFig4, SelectionConfig(n, k, l), SecrecyTarget(rate));
          CAPTURE(n);
          CAPTURE(k);
          CAPTURE(l);
          CAPTURE(rate);
          CHECK(rel_diff(got, ref) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("sop_asymptotic_n and spsc_asymptotic_n") {
  SUBCASE("k = 1, L = 1 reduces to 1 - x e^x E1(x)") {
    for (int n : {2, 10, 300}) {
      for (double rate : {0.0, 1.0, 4.0}) {
        const double x = 8.0 * (n - 1) / (std::exp2(rate) * 2.5);
        const double expected = 1.0 - x * specfun::exp_scaled_e1(x);
        const double got = sop_asymptotic_n(kFig2, SelectionConfig(n, 1, 1), SecrecyTarget(rate));
        CHECK(std::abs(got - expected) <= 1e-9 * std::max(expected, 1e-300));
      }
      const double x = 8.0 * (n - 1) / 2.5;
      CHECK(spsc_asymptotic_n(kFig2, SelectionConfig(n, 1, 1)) ==
            doctest::Approx(x * specfun::exp_scaled_e1(x)).epsilon(1e-9));
    }
  }

  SUBCASE("complement at zero rate") {
    for (int k : {1, 2, 3}) {
      for (int l : {1, 2, 4}) {
        const SelectionConfig sel(40, k, l);
        CHECK(std::abs(sop_asymptotic_n(kFig2, sel, SecrecyTarget(0.0)) +
                       spsc_asymptotic_n(kFig2, sel) - 1.0) < 1e-12);
      }
    }
  }

  SUBCASE("convergence toward the exact form") {
    const SecrecyTarget r1(1.0);
    const double e20 = rel_diff(sop_asymptotic_n(kFig2, SelectionConfig(20, 1, 2), r1),
                                sop_exact(kFig2, SelectionConfig(20, 1, 2), r1));
    const double e200 = rel_diff(sop_asymptotic_n(kFig2, SelectionConfig(200, 1, 2), r1),
                                 sop_exact(kFig2, SelectionConfig(200, 1, 2), r1));
    CHECK(e200 < 0.05);
    CHECK(e200 < e20);

    const SelectionConfig big(500, 2, 2);
    CHECK(rel_diff(spsc_asymptotic_n(kFig2, big), spsc_exact(kFig2, big)) < 0.02);
  }

  SUBCASE("matches the quadrature of the limit integral") {
    for (auto [n, k, l] : {std::tuple{50, 1, 1}, {50, 2, 2}, {200, 1, 4}}) {
      const SelectionConfig sel(n, k, l);
      for (double rate : {0.5, 2.0}) {
        const SecrecyTarget t(rate);
        CHECK(rel_diff(sop_asymptotic_n(kFig2, sel, t),
                       oracle::sop_asymptotic_quadrature(kFig2, sel, t).value) < 1e-7);
      }
    }
  }

  CHECK_THROWS_AS(sop_asymptotic_n(kFig2, SelectionConfig(1, 1, 1), SecrecyTarget(1.0)), DomainError);
}

TEST_CASE("sop_asymptotic_nl and the N = L limit") {
  // tau b_L = b_N: c_m = 2, c_e = 4, N - 1 = 2 (L - 1), R_s = 0.
  const SelectionConfig sel(5, 1, 3);
  CHECK(sop_asymptotic_nl(kFig4, sel, SecrecyTarget(0.0)) == doctest::Approx(0.5).epsilon(1e-15));

  const SecrecyTarget half(0.5);
  const double limit_k1 = 1.0 - 1.0 / (1.0 + std::numbers::sqrt2 * 0.3125);
  CHECK(limit_k1 == doctest::Approx(0.3065).epsilon(1e-3));
  CHECK(sop_equal_nl_limit(kFig2, 1, half) == doctest::Approx(limit_k1).epsilon(1e-14));
  CHECK(sop_equal_nl_limit(kFig2, 2, half) > sop_equal_nl_limit(kFig2, 1, half));

  const ChannelParams symmetric(3.0, 2.0, 1.0, 4.0, 2.0);
  CHECK(sop_equal_nl_limit(symmetric, 1, SecrecyTarget(0.0)) == doctest::Approx(0.5).epsilon(1e-15));

  for (int k : {1, 2, 3}) {
    const SelectionConfig big(1'000'000, k, 1'000'000);
    CHECK(std::abs(sop_asymptotic_nl(kFig2, big, half) - sop_equal_nl_limit(kFig2, k, half)) < 1e-6);
  }
  for (double rate : {0.0, 0.5, 4.0}) {
    CHECK(sop_asymptotic_nl(kFig2, SelectionConfig(30, 2, 7), SecrecyTarget(rate)) >
          sop_asymptotic_nl(kFig2, SelectionConfig(30, 1, 7), SecrecyTarget(rate)));
  }
  CHECK_THROWS_AS(sop_asymptotic_nl(kFig2, SelectionConfig(30, 1, 1), half), DomainError);
  CHECK_THROWS_AS(sop_equal_nl_limit(kFig2, 0, half), DomainError);
}

TEST_CASE("v_log_moment") {
  CHECK(v_log_moment(1, 1.0) == doctest::Approx(0.59634736232319407).epsilon(1e-14));
  CHECK(v_log_moment(3, 2.5) == doctest::Approx(1.6595202161638793).epsilon(1e-13));
  for (int k : {1, 2, 3, 5, 8}) {
    for (double a : {0.01, 0.5, 2.5, 30.0, 700.0, 1e5}) {
      const double v = v_log_moment(k, a);
      CAPTURE(k);
      CAPTURE(a);
      CHECK(v <= std::log(k + a));
      const double lgk = std::lgamma(static_cast<double>(k));
      auto integrand = [k, a, lgk](double t) {
        return std::exp((k - 1) * std::log(t) - t - lgk) * std::log(t + a);
      };
      const double ref = secrecy::testing::de_half_line(integrand, 0.0, 1e-13);
      CHECK(std::abs(v - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
    }
  }
  CHECK_THROWS_AS(v_log_moment(0, 1.0), DomainError);
  CHECK_THROWS_AS(v_log_moment(1, 0.0), DomainError);
}

TEST_CASE("esc_asymptotic") {
  SUBCASE("matches the limit integral in both c_e regimes") {
    for (double c_e : {4.0, 1.0, 0.3}) {
      const auto p = ChannelParams::from_scales(2.0, c_e);
      for (auto [n, k] : {std::pair{50, 1}, {100, 2}, {500, 3}}) {
        CAPTURE(c_e);
        CAPTURE(n);
        CHECK(rel_diff(esc_asymptotic(p, n, k),
                       oracle::esc_asymptotic_quadrature(p, n, k).value) < 1e-6);
      }
    }
  }

  SUBCASE("branch continuity near c_e = 1") {
    for (auto [n, k] : {std::pair{50, 1}, {100, 2}, {500, 3}}) {
      const double at_one = esc_asymptotic(ChannelParams::from_scales(2.0, 1.0), n, k);
      for (double c_e : {1.0 - 1e-4, 1.0 + 1e-4, 1.0 - 1e-7, 1.0 + 1e-7}) {
        CHECK(std::abs(esc_asymptotic(ChannelParams::from_scales(2.0, c_e), n, k) - at_one) < 1e-3);
      }
    }
  }

  SUBCASE("rank gap at large N") {
    const double gap = esc_asymptotic(kFig4, 10'000, 1) - esc_asymptotic(kFig4, 10'000, 2);
    CHECK(std::abs(gap - kInvLn2) < 0.02);
  }

  CHECK_THROWS_AS(esc_asymptotic(kFig4, 1, 1), DomainError);
  CHECK_THROWS_AS(esc_asymptotic(kFig4, 10, 11), DomainError);
}

TEST_CASE("esc_scaling_approx and esc_gap_limit") {
  CHECK(esc_gap_limit(1) == 0.0);
  CHECK(esc_gap_limit(2) == doctest::Approx(1.4426950).epsilon(1e-7));
  CHECK(esc_gap_limit(3) == doctest::Approx(2.1640425).epsilon(1e-7));
  CHECK_THROWS_AS(esc_gap_limit(0), DomainError);

  for (double c_e : {4.0, 1.0}) {
    const auto p = ChannelParams::from_scales(2.0, c_e);
    for (int n : {2, 9, 101}) {
      CHECK(std::abs(esc_scaling_approx(p, 2 * n - 1, 1) - esc_scaling_approx(p, n, 1) - 1.0) < 1e-12);
    }
    for (int k = 1; k <= 10; ++k) {
      const double diff = esc_scaling_approx(p, 1000, 1) - esc_scaling_approx(p, 1000, k);
      CHECK(std::abs(diff - esc_gap_limit(k)) < 1e-14 * std::max(1.0, diff));
    }
  }
  CHECK(esc_scaling_approx(kFig4, 1000, 1) - esc_scaling_approx(kFig4, 1000, 3) ==
        doctest::Approx(2.1640425).epsilon(1e-7));
  CHECK(std::abs(esc_scaling_approx(kFig4, 10'000, 1) - esc_asymptotic(kFig4, 10'000, 1)) < 0.05);
}

TEST_CASE("sop_exact monotonicity grid") {
  const int ns[] = {2, 5, 10, 20};
  const int ks[] = {1, 2};
  const int ls[] = {1, 2, 4};
  const double rates[] = {0.0, 0.5, 1.0, 4.0};
  double sop[4][2][3][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 4; ++d) {
          sop[a][b][c][d] = sop_exact(kFig2, SelectionConfig(ns[a], ks[b], ls[c]),
                                      SecrecyTarget(rates[d]));
          REQUIRE(sop[a][b][c][d] >= 0.0);
          REQUIRE(sop[a][b][c][d] <= 1.0);
        }
  constexpr double slack = 1e-12;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 4; ++d) {
          const double s = sop[a][b][c][d];
          if (d > 0) CHECK(s >= sop[a][b][c][d - 1] - slack);
          if (b > 0) CHECK(s >= sop[a][b - 1][c][d] - slack);
          if (c > 0) CHECK(s >= sop[a][b][c - 1][d] - slack);
          if (a > 0) CHECK(s <= sop[a - 1][b][c][d] + slack);
        }
  CHECK(sop_exact(kFig2, SelectionConfig(10, 1, 2), SecrecyTarget(30.0)) > 0.999);
}

TEST_CASE("complement identity across the acceptance grid") {
  for (const auto& p : {kFig2, kFig4}) {
    for (int n : {2, 5, 10, 20, 50}) {
      for (int k : {1, 2, std::min(3, n)}) {
        for (int l : {1, 2, 4}) {
          const SelectionConfig sel(n, k, l);
          CHECK(std::abs(sop_exact(p, sel, SecrecyTarget(0.0)) + spsc_exact(p, sel) - 1.0) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("asymptotic error shrinks from N = 20 to N = 200") {
  for (int k : {1, 2}) {
    for (double rate : {1.0, 4.0}) {
      const SecrecyTarget t(rate);
      const double e20 = rel_diff(sop_asymptotic_n(kFig2, SelectionConfig(20, k, 2), t),
                                  sop_exact(kFig2, SelectionConfig(20, k, 2), t));
      const double e200 = rel_diff(sop_asymptotic_n(kFig2, SelectionConfig(200, k, 2), t),
                                   sop_exact(kFig2, SelectionConfig(200, k, 2), t));
      CAPTURE(k);
      CAPTURE(rate);
      CHECK(e200 < e20);
    }
  }
}

TEST_CASE("metrics are invariant to rescaling each fading pair") {
  for (double c : {0.25, 3.0, 1e3}) {
    const ChannelParams scaled(2.0, 2.0 * c, 0.5 * c, 5.0 / c, 4.0 / c);
    const SelectionConfig sel(12, 2, 3);
    const SecrecyTarget t(1.5);
    CHECK(sop_exact(scaled, sel, t) == doctest::Approx(sop_exact(kFig2, sel, t)).epsilon(1e-13));
    CHECK(spsc_exact(scaled, sel) == doctest::Approx(spsc_exact(kFig2, sel)).epsilon(1e-13));
    CHECK(sop_asymptotic_n(scaled, sel, t) == doctest::Approx(sop_asymptotic_n(kFig2, sel, t)).epsilon(1e-13));
    CHECK(sop_asymptotic_nl(scaled, sel, t) == doctest::Approx(sop_asymptotic_nl(kFig2, sel, t)).epsilon(1e-13));
    CHECK(sop_equal_nl_limit(scaled, 2, t) == doctest::Approx(sop_equal_nl_limit(kFig2, 2, t)).epsilon(1e-13));
    CHECK(esc_asymptotic(scaled, 40, 2) == doctest::Approx(esc_asymptotic(kFig2, 40, 2)).epsilon(1e-13));
    CHECK(esc_scaling_approx(scaled, 40, 2) == doctest::Approx(esc_scaling_approx(kFig2, 40, 2)).epsilon(1e-13));
  }
}

TEST_CASE("metrics wrappers") {
  const SelectionConfig sel(10, 2, 2);
  const SecrecyTarget t(1.0);
  const auto m = metrics_exact(kFig2, sel, t);
  CHECK(m.method == Method::exact);
  CHECK(m.sop == sop_exact(kFig2, sel, t));
  CHECK(m.spsc == spsc_exact(kFig2, sel));
  const auto a = metrics_asymptotic_n(kFig2, sel, t);
  CHECK(a.method == Method::asymptotic_n);
  CHECK(a.sop == sop_asymptotic_n(kFig2, sel, t));
  CHECK(a.spsc == spsc_asymptotic_n(kFig2, sel));
}
