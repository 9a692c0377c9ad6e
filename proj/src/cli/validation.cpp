#include "secrecy/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <vector>

#include "secrecy/analytic.hpp"
#include "secrecy/cli.hpp"
#include "secrecy/oracle.hpp"
#include "secrecy/specfun.hpp"

namespace secrecy::validation {
namespace {

constexpr double kZ999 = 3.29;
constexpr double kInvLn2 = 1.0 / specfun::kLn2;

const ChannelParams kFig2(2.0, 2.0, 0.5, 5.0, 4.0);  // c_m = 8, c_e = 2.5
const ChannelParams kFig4(4.0, 2.0, 4.0, 3.0, 3.0);  // c_m = 2, c_e = 4

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Parameters seen by the closed forms; differs from the truth only in
// fault-injection mode.
ChannelParams closed_side(const ChannelParams& p, const ValidationOptions& o) {
  return ChannelParams(p.power_ratio(), p.beta_m() * o.fault_cm_scale, p.lambda_m(),
                       p.beta_e(), p.lambda_e());
}

std::uint64_t samples(const ValidationOptions& o) {
  return o.quick ? std::min<std::uint64_t>(o.mc_samples, 100'000) : o.mc_samples;
}

struct GridPoint {
  const ChannelParams* params;
  int n;
  int k;
  int l;
};

std::vector<GridPoint> sop_grid(bool quick) {
  std::vector<int> ns{2, 5, 10, 20, 50};
  if (quick) ns = {2, 5, 10};
  std::vector<GridPoint> grid;
  for (const ChannelParams* p : {&kFig2, &kFig4}) {
    for (int n : ns) {
      std::vector<int> ks{1, 2, std::min(3, n)};
      ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
      for (int k : ks) {
        for (int l : {1, 2, 4}) grid.push_back({p, n, k, l});
      }
    }
  }
  return grid;
}

CheckResult three_way_sop(const ValidationOptions& o) {
  const std::vector<double> rates{0.0, 0.5, 1.0, 4.0};
  double max_rel = 0.0;
  int bracketed = 0;
  int total = 0;
  std::uint64_t stream = 0;
  for (const GridPoint& g : sop_grid(o.quick)) {
    const SelectionConfig sel(g.n, g.k, g.l);
    oracle::SimConfig sim;
    sim.n_samples = samples(o);
    sim.seed = o.seed;
    sim.workers = o.workers;
    sim.stream = stream++;
    const oracle::McRateSweep mc = oracle::mc_estimate_rates(*g.params, sel, rates, sim);
    for (std::size_t i = 0; i < rates.size(); ++i) {
      const SecrecyTarget t(rates[i]);
      const double exact = analytic::sop_exact(closed_side(*g.params, o), sel, t);
      const double quad = oracle::sop_quadrature(*g.params, sel, t).value;
      max_rel = std::max(max_rel, rel(exact, quad));
      const auto& e = mc.sop[i];
      if (std::abs(e.mean - exact) <= kZ999 * e.std_error) ++bracketed;
      ++total;
    }
  }
  CheckResult r;
  r.pass = max_rel <= 1e-6 && bracketed >= 0.95 * total;
  r.detail = fmt("max rel diff exact vs quadrature %.2e (<= 1e-6); MC within 3.29 SE at %d/%d "
                 "points (>= 95%%), %llu samples",
                 max_rel, bracketed, total, static_cast<unsigned long long>(samples(o)));
  return r;
}

CheckResult spsc_complement(const ValidationOptions& o) {
  double worst = 0.0;
  int count = 0;
  for (const GridPoint& g : sop_grid(false)) {
    const SelectionConfig sel(g.n, g.k, g.l);
    const ChannelParams p = closed_side(*g.params, o);
    worst = std::max(worst, std::abs(analytic::sop_exact(p, sel, SecrecyTarget(0.0)) +
                                     analytic::spsc_exact(p, sel) - 1.0));
    ++count;
  }
  CheckResult r;
  r.pass = worst <= 1e-12;
  r.detail = fmt("max |sop(0) + spsc - 1| = %.2e over %d points (<= 1e-12)", worst, count);
  return r;
}

CheckResult asymptotic_convergence(const ValidationOptions& o) {
  const ChannelParams p = closed_side(kFig2, o);
  bool shrinks = true;
  double e200_k1_r1 = 0.0;
  std::ostringstream d;
  for (int k : {1, 2}) {
    for (double rs : {1.0, 4.0}) {
      const SecrecyTarget t(rs);
      double err[2];
      int i = 0;
      for (int n : {20, 200}) {
        const SelectionConfig sel(n, k, 2);
        err[i++] = rel(analytic::sop_asymptotic_n(p, sel, t), analytic::sop_exact(kFig2, sel, t));
      }
      shrinks = shrinks && err[1] < err[0];
      if (k == 1 && rs == 1.0) e200_k1_r1 = err[1];
      d << fmt("k=%d rs=%g: %.4f -> %.4f; ", k, rs, err[0], err[1]);
    }
  }
  CheckResult r;
  r.pass = shrinks && e200_k1_r1 <= 0.10;
  r.detail = d.str() + fmt("rel err N=20 -> N=200 shrinks everywhere, k=1 rs=1 at N=200 "
                           "%.4f (<= 0.10)", e200_k1_r1);
  return r;
}

CheckResult equal_nl_limit(const ValidationOptions& o) {
  const SecrecyTarget t(0.5);
  bool pass = true;
  std::ostringstream d;
  for (int k : {1, 2}) {
    oracle::SimConfig sim;
    sim.n_samples = samples(o);
    sim.seed = o.seed;
    sim.workers = o.workers;
    sim.stream = static_cast<std::uint64_t>(k);
    const oracle::McEstimate mc = oracle::mc_estimate(kFig2, SelectionConfig(256, k, 256), t, sim);
    const double limit = analytic::sop_equal_nl_limit(closed_side(kFig2, o), k, t);
    const double tol = std::max(kZ999 * mc.sop.std_error, 0.02);
    const double diff = std::abs(mc.sop.mean - limit);
    pass = pass && diff <= tol;
    d << fmt("k=%d: MC %.5f vs limit %.5f, |diff| %.5f (<= %.4f); ", k, mc.sop.mean, limit,
             diff, tol);
  }
  CheckResult r;
  r.pass = pass;
  r.detail = d.str() + fmt("N=L=256, %llu samples", static_cast<unsigned long long>(samples(o)));
  return r;
}

CheckResult esc_log_scaling(const ValidationOptions&) {
  const double e64 = oracle::esc_quadrature(kFig4, SelectionConfig(64, 1, 1)).value;
  const double e128 = oracle::esc_quadrature(kFig4, SelectionConfig(128, 1, 1)).value;
  CheckResult r;
  r.pass = std::abs(e128 - e64 - 1.0) <= 0.1;
  r.detail = fmt("ESC(N=128) - ESC(N=64) = %.4f - %.4f = %.4f (1 +- 0.1)", e128, e64, e128 - e64);
  return r;
}

CheckResult harmonic_gap(const ValidationOptions&) {
  double esc[3];
  for (int k = 1; k <= 3; ++k) esc[k - 1] = oracle::esc_quadrature(kFig4, SelectionConfig(512, k, 1)).value;
  const double g2 = esc[0] - esc[1];
  const double g3 = esc[0] - esc[2];
  CheckResult r;
  r.pass = std::abs(g2 - kInvLn2) <= 0.05 && std::abs(g3 - 1.5 * kInvLn2) <= 0.08;
  r.detail = fmt("N=512: k1-k2 %.4f vs %.7f (+- 0.05); k1-k3 %.4f vs %.7f (+- 0.08)", g2,
                 kInvLn2, g3, 1.5 * kInvLn2);
  return r;
}

CheckResult closed_form_esc(const ValidationOptions& o) {
  const ChannelParams unit(4.0, 2.0, 4.0, 3.0, 12.0);  // c_m = 2, c_e = 1
  double max_rel = 0.0;
  for (const ChannelParams* p : {&kFig4, &unit}) {
    for (auto [n, k] : {std::pair{50, 1}, {100, 2}, {500, 3}}) {
      const double closed = analytic::esc_asymptotic(closed_side(*p, o), n, k);
      const double quad = oracle::esc_asymptotic_quadrature(*p, n, k).value;
      max_rel = std::max(max_rel, rel(closed, quad));
    }
  }
  double max_jump = 0.0;
  for (auto [n, k] : {std::pair{50, 1}, {100, 2}, {500, 3}}) {
    const double at_one = analytic::esc_asymptotic(ChannelParams::from_scales(2.0, 1.0), n, k);
    for (double ce : {1.0 - 1e-4, 1.0 + 1e-4}) {
      const double v = analytic::esc_asymptotic(ChannelParams::from_scales(2.0, ce), n, k);
      max_jump = std::max(max_jump, std::abs(v - at_one));
    }
  }
  CheckResult r;
  r.pass = max_rel <= 1e-6 && max_jump <= 1e-3;
  r.detail = fmt("max rel diff closed form vs quadrature %.2e (<= 1e-6), c_e = 4 and 1; "
                 "max jump across c_e = 1 +- 1e-4 %.2e (<= 1e-3)",
                 max_rel, max_jump);
  return r;
}

CheckResult identity_suite(const ValidationOptions&) {
  using namespace specfun;
  double worst = 0.0;
  std::string worst_name;
  int count = 0;
  auto expect = [&](const char* name, double got, double want) {
    const double e = std::isfinite(got) ? rel(got, want) : INFINITY;
    ++count;
    if (e > worst) {
      worst = e;
      worst_name = name;
    }
  };
  bool psi_ok = true;
  for (double z : {-0.9, -0.3, 0.25, 0.5, 0.8}) {
    expect("2F1(1,1;2;z)", gauss_2f1(1, 1, 2, z), -std::log1p(-z) / z);
    expect("2F1(a,b;b;z)", gauss_2f1(2.5, 3, 3, z), std::pow(1.0 - z, -2.5));
    expect("2F1(a,b;c;0)", gauss_2f1(2.5, 3, 4.5, 0.0), 1.0);
  }
  for (double x : {0.5, 1.0, 2.0}) {
    expect("2F1(1/2,1;3/2;-x^2)", gauss_2f1(0.5, 1, 1.5, -x * x), std::atan(x) / x);
  }
  for (int a = 1; a <= 6; ++a) {
    for (double z : {0.1, 1.0, 10.0, 100.0}) {
      expect("U(a,a+1,z)", tricomi_u(a, a + 1, z), std::pow(z, -a));
    }
  }
  for (double z : {0.1, 1.0, 10.0}) {
    expect("U(1,1,z)", tricomi_u(1, 1, z), exp_scaled_e1(z));
    expect("Gamma(1,x)", upper_gamma_reg(1, z), std::exp(-z));
    expect("gamma(1,x)", lower_gamma_reg(1, z), -std::expm1(-z));
    expect("upper_gamma_scaled(1,b)", upper_gamma_scaled(1, z), z * exp_scaled_e1(z));
  }
  expect("psi(1)", digamma_int(1), -kEulerGamma);
  for (int k = 1; k <= 50; ++k) {
    psi_ok = psi_ok && std::abs(digamma_int(k + 1) - digamma_int(k) - 1.0 / k) <= 1e-14;
    ++count;
  }
  CheckResult r;
  r.pass = worst <= 1e-9 && psi_ok;
  r.detail = fmt("%d identities, worst rel err %.2e (%s) (<= 1e-9); psi recurrence %s", count,
                 worst, worst_name.c_str(), psi_ok ? "exact to 1e-14" : "FAILED");
  return r;
}

CheckResult determinism(const ValidationOptions& o) {
  cli::RunConfig cfg;
  cfg.metric = cli::Metric::sop;
  cfg.methods = {Method::exact, Method::monte_carlo};
  cfg.var = cli::SweepVar::n_users;
  cfg.values = {2, 4, 8, 16};
  cfg.samples = o.quick ? 20'000 : 200'000;
  cfg.seed = o.seed;
  auto csv = [&](unsigned workers) {
    std::ostringstream s;
    cli::write_csv(s, cli::run_curves(std::span(&cfg, 1), workers));
    return s.str();
  };
  const std::string a = csv(1);
  const bool repeat = a == csv(1);
  const bool threads = a == csv(4);

  oracle::SimConfig sim;
  sim.n_samples = 100'003;
  sim.seed = o.seed;
  sim.workers = 1;
  const SelectionConfig sel(10, 2, 2);
  const auto base = oracle::mc_estimate(kFig2, sel, SecrecyTarget(1.0), sim);
  bool batches = true;
  for (std::uint64_t batch : {1000ULL, 65'536ULL, 1'000'000ULL}) {
    for (unsigned w : {1u, 3u}) {
      sim.batch_size = batch;
      sim.workers = w;
      const auto e = oracle::mc_estimate(kFig2, sel, SecrecyTarget(1.0), sim);
      batches = batches && e.sop.mean == base.sop.mean && e.esc.mean == base.esc.mean &&
                e.esc.std_error == base.esc.std_error;
    }
  }
  CheckResult r;
  r.pass = repeat && threads && batches;
  r.detail = fmt("sweep CSV repeat %s, 1 vs 4 workers %s; MC over batch sizes and workers %s",
                 repeat ? "identical" : "DIFFERS", threads ? "identical" : "DIFFERS",
                 batches ? "bit-identical" : "DIFFERS");
  return r;
}

struct Check {
  const char* name;
  std::function<CheckResult(const ValidationOptions&)> fn;
};

const Check kChecks[kCheckCount] = {
    {"three-way SOP agreement", three_way_sop},
    {"SPSC complement identity", spsc_complement},
    {"asymptotic SOP convergence", asymptotic_convergence},
    {"N=L constant limit", equal_nl_limit},
    {"ESC log(N) scaling", esc_log_scaling},
    {"harmonic-number ESC gap", harmonic_gap},
    {"closed-form ESC", closed_form_esc},
    {"special-function identities", identity_suite},
    {"determinism", determinism},
};

}  // namespace

CheckResult run_check(int id, const ValidationOptions& opts) {
  if (id < 1 || id > kCheckCount) throw DomainError("check id out of range");
  const Check& c = kChecks[id - 1];
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = c.fn(opts);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = id;
  r.name = c.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (id == 8 && r.seconds > 5.0) {
    r.pass = false;
    r.detail += fmt("; took %.1f s (> 5 s)", r.seconds);
  }
  return r;
}

std::string format_result(const CheckResult& r) {
  return fmt("%s [%d] %s: ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str()) + r.detail +
         fmt(" (%.1f s)", r.seconds);
}

}  // namespace secrecy::validation
