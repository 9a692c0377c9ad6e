#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "secrecy/cli.hpp"

namespace secrecy::cli {
namespace {

bool is_integral(double x) { return std::isfinite(x) && x == std::floor(x); }

std::string join_methods(const std::vector<Method>& methods) {
  std::string s;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) s += ',';
    s += to_string(methods[i]);
  }
  return s;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

double sop_nl_complement(const ChannelParams& p, const SelectionConfig& sel) {
  return 1.0 - analytic::sop_asymptotic_nl(p, sel, SecrecyTarget(0.0));
}

}  // namespace

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::sop: return "sop";
    case Metric::spsc: return "spsc";
    case Metric::esc: return "esc";
  }
  return "?";
}

std::string_view to_string(SweepVar v) noexcept {
  switch (v) {
    case SweepVar::none: return "";
    case SweepVar::n_users: return "n_users";
    case SweepVar::eve_antennas: return "eve_antennas";
    case SweepVar::rate: return "rate";
    case SweepVar::rank: return "rank";
  }
  return "?";
}

Metric parse_metric(std::string_view s) {
  if (s == "sop") return Metric::sop;
  if (s == "spsc") return Metric::spsc;
  if (s == "esc") return Metric::esc;
  throw DomainError("unknown metric '" + std::string(s) + "' (sop, spsc, esc)");
}

Method parse_method(std::string_view s) {
  for (Method m : {Method::exact, Method::asymptotic_n, Method::asymptotic_nl,
                   Method::quadrature, Method::monte_carlo}) {
    if (s == to_string(m)) return m;
  }
  throw DomainError("unknown method '" + std::string(s) +
                    "' (exact, asymptotic_n, asymptotic_nl, quadrature, monte_carlo)");
}

SweepVar parse_sweep_var(std::string_view s) {
  if (s == "n_users" || s == "n") return SweepVar::n_users;
  if (s == "eve_antennas" || s == "l") return SweepVar::eve_antennas;
  if (s == "rate" || s == "rs") return SweepVar::rate;
  if (s == "rank" || s == "k") return SweepVar::rank;
  throw DomainError("unknown sweep variable '" + std::string(s) +
                    "' (n_users, eve_antennas, rate, rank)");
}

std::vector<double> make_range(double from, double to, double step) {
  if (!std::isfinite(from) || !std::isfinite(to)) throw DomainError("range bounds must be finite");
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step must be positive");
  if (to < from) throw DomainError("range is empty: to < from");
  const double count = std::floor((to - from) / step + 1e-9);
  if (count > 1e6) throw DomainError("range has more than 1e6 points");
  std::vector<double> out;
  for (int i = 0; i <= static_cast<int>(count); ++i) out.push_back(from + i * step);
  return out;
}

void check_supported(Metric metric, Method method, const SelectionConfig& sel) {
  switch (method) {
    case Method::exact:
      if (metric == Metric::esc) throw DomainError("exact ESC unsupported; use quadrature");
      break;
    case Method::asymptotic_n:
      if (sel.n_users() < 2) throw DomainError("asymptotic_n needs n_users >= 2");
      if (metric == Metric::esc && sel.eve_antennas() != 1) {
        throw DomainError("asymptotic ESC needs eve_antennas = 1; use quadrature");
      }
      break;
    case Method::asymptotic_nl:
      if (metric == Metric::esc) throw DomainError("asymptotic_nl ESC unsupported; use quadrature");
      if (sel.n_users() < 2) throw DomainError("asymptotic_nl needs n_users >= 2");
      if (sel.eve_antennas() < 2) throw DomainError("asymptotic_nl needs eve_antennas >= 2");
      break;
    case Method::quadrature:
    case Method::monte_carlo:
      break;
  }
}

std::vector<Point> expand_points(const RunConfig& cfg) {
  if (cfg.methods.empty()) throw DomainError("at least one method is required");
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.methods[i] == cfg.methods[j]) throw DomainError("methods must not repeat");
    }
  }
  if (cfg.samples < 1) throw DomainError("samples must be at least 1");
  if (cfg.batch_size < 1) throw DomainError("batch_size must be at least 1");
  static_cast<void>(cfg.params());  // throws on invalid channel parameters

  std::vector<double> values = cfg.values;
  if (cfg.var == SweepVar::none) {
    if (!values.empty()) throw DomainError("values given without a sweep variable");
    if (cfg.lockstep) throw DomainError("lockstep needs a sweep over n_users or eve_antennas");
    values.push_back(0.0);
  } else {
    if (values.empty()) throw DomainError("sweep values must be nonempty");
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i] > values[i - 1])) throw DomainError("sweep values must be strictly increasing");
    }
    if (cfg.lockstep && cfg.var != SweepVar::n_users && cfg.var != SweepVar::eve_antennas) {
      throw DomainError("lockstep needs a sweep over n_users or eve_antennas");
    }
  }

  std::vector<Point> points;
  points.reserve(values.size());
  for (double v : values) {
    Point p{v, cfg.n, cfg.k, cfg.l, cfg.rs};
    if (cfg.var != SweepVar::none && cfg.var != SweepVar::rate) {
      if (!is_integral(v) || v < 1.0 || v > 1e9) {
        throw DomainError(std::string(to_string(cfg.var)) + " values must be positive integers");
      }
    }
    switch (cfg.var) {
      case SweepVar::none: break;
      case SweepVar::n_users:
        p.n = static_cast<int>(v);
        if (cfg.lockstep) p.l = p.n;
        break;
      case SweepVar::eve_antennas:
        p.l = static_cast<int>(v);
        if (cfg.lockstep) p.n = p.l;
        break;
      case SweepVar::rate: p.rs = v; break;
      case SweepVar::rank: p.k = static_cast<int>(v); break;
    }
    const SelectionConfig sel(p.n, p.k, p.l);
    static_cast<void>(SecrecyTarget(p.rs));
    for (Method m : cfg.methods) check_supported(cfg.metric, m, sel);
    points.push_back(p);
  }
  return points;
}

Evaluation evaluate(Metric metric, Method method, const ChannelParams& params,
                    const SelectionConfig& sel, const SecrecyTarget& target,
                    const oracle::SimConfig& sim) {
  check_supported(metric, method, sel);
  Evaluation e;
  try {
    switch (method) {
      case Method::exact:
        e.estimate = metric == Metric::sop ? analytic::sop_exact(params, sel, target)
                                           : analytic::spsc_exact(params, sel);
        break;
      case Method::asymptotic_n:
        if (metric == Metric::sop) {
          e.estimate = analytic::sop_asymptotic_n(params, sel, target);
        } else if (metric == Metric::spsc) {
          e.estimate = analytic::spsc_asymptotic_n(params, sel);
        } else {
          e.estimate = analytic::esc_asymptotic(params, sel.n_users(), sel.rank());
        }
        break;
      case Method::asymptotic_nl:
        e.estimate = metric == Metric::sop ? analytic::sop_asymptotic_nl(params, sel, target)
                                           : sop_nl_complement(params, sel);
        break;
      case Method::quadrature:
        if (metric == Metric::sop) {
          e.estimate = oracle::sop_quadrature(params, sel, target).value;
        } else if (metric == Metric::spsc) {
          e.estimate = oracle::spsc_quadrature(params, sel).value;
        } else {
          e.estimate = oracle::esc_quadrature(params, sel).value;
        }
        break;
      case Method::monte_carlo: {
        const oracle::McEstimate mc = oracle::mc_estimate(params, sel, target, sim);
        e.mc = metric == Metric::sop ? mc.sop : metric == Metric::spsc ? mc.spsc : mc.esc;
        e.estimate = e.mc->mean;
        break;
      }
    }
  } catch (const NumericError& ex) {
    e.estimate = std::numeric_limits<double>::quiet_NaN();
    e.mc.reset();
    e.error = ex.what();
  }
  return e;
}

std::vector<Row> run_curves(std::span<const RunConfig> curves, unsigned workers) {
  std::vector<Row> rows;
  std::vector<oracle::SimConfig> sims;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const RunConfig& cfg = curves[c];
    const std::vector<Point> points = expand_points(cfg);
    for (std::size_t p = 0; p < points.size(); ++p) {
      for (Method m : cfg.methods) {
        Row r;
        r.var = cfg.var;
        r.point = points[p];
        r.metric = cfg.metric;
        r.method = m;
        r.params = cfg.params();
        r.seed = cfg.seed;
        rows.push_back(r);
        oracle::SimConfig sim;
        sim.n_samples = cfg.samples;
        sim.seed = cfg.seed;
        sim.batch_size = cfg.batch_size;
        sim.stream = (static_cast<std::uint64_t>(c) << 32) | p;
        sims.push_back(sim);
      }
    }
  }

  unsigned pool = workers != 0 ? workers : std::thread::hardware_concurrency();
  pool = std::max(1u, std::min<unsigned>(pool, static_cast<unsigned>(rows.size())));
  // A lone task may parallelize its own Monte Carlo run instead.
  const unsigned inner = rows.size() == 1 ? workers : 1;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      Row& r = rows[i];
      oracle::SimConfig sim = sims[i];
      sim.workers = inner;
      r.result = evaluate(r.metric, r.method, r.params,
                          SelectionConfig(r.point.n, r.point.k, r.point.l),
                          SecrecyTarget(r.point.rs), sim);
    }
  };
  if (pool == 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    for (unsigned t = 0; t < pool; ++t) threads.emplace_back(work);
  }
  return rows;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv_header(std::ostream& out) {
  out << "sweep_var,sweep_value,metric,method,n,k,l,rs,power_ratio,beta_m,"
         "lambda_m,beta_e,lambda_e,estimate,std_error,n_samples,seed,error\n";
}

void write_csv(std::ostream& out, std::span<const Row> rows) {
  write_csv_header(out);
  for (const Row& r : rows) {
    const bool swept = r.var != SweepVar::none;
    out << to_string(r.var) << ','
        << (swept ? format_double(r.point.sweep_value) : "") << ','
        << to_string(r.metric) << ',' << to_string(r.method) << ','
        << r.point.n << ',' << r.point.k << ',' << r.point.l << ','
        << format_double(r.point.rs) << ',' << format_double(r.params.power_ratio()) << ','
        << format_double(r.params.beta_m()) << ',' << format_double(r.params.lambda_m()) << ','
        << format_double(r.params.beta_e()) << ',' << format_double(r.params.lambda_e()) << ','
        << (r.result.error.empty() ? format_double(r.result.estimate) : "") << ',';
    if (r.result.mc) {
      out << format_double(r.result.mc->std_error) << ',' << r.result.mc->n_samples << ','
          << r.seed;
    } else {
      out << ",,";
    }
    out << ',' << csv_field(r.result.error) << '\n';
  }
}

std::vector<RunConfig> figure_preset(int figure) {
  std::vector<RunConfig> curves;
  if (figure == 2) {
    // SOP vs N for k = 1, 2, R_s = 1, 4; P/P_I = 2, beta_M = 2,
    // lambda_M = 1/2, beta_E = 5, lambda_E = 4, L = 2.
    for (int k : {1, 2}) {
      for (double rs : {1.0, 4.0}) {
        RunConfig c;
        c.metric = Metric::sop;
        c.methods = {Method::exact, Method::asymptotic_n, Method::monte_carlo};
        c.power_ratio = 2.0;
        c.beta_m = 2.0;
        c.lambda_m = 0.5;
        c.beta_e = 5.0;
        c.lambda_e = 4.0;
        c.l = 2;
        c.k = k;
        c.rs = rs;
        c.var = SweepVar::n_users;
        c.values = make_range(2, 100, 1);
        curves.push_back(c);
      }
    }
  } else if (figure == 3) {
    // SOP vs L for N = 20 and N = L, k = 1, 2, R_s = 1/2; P/P_I = 2,
    // beta_M = 2, lambda_M = 1/2, beta_E = 5, lambda_E = 4.
    for (bool lockstep : {false, true}) {
      for (int k : {1, 2}) {
        RunConfig c;
        c.metric = Metric::sop;
        c.methods = {Method::exact, Method::asymptotic_n, Method::asymptotic_nl};
        c.power_ratio = 2.0;
        c.beta_m = 2.0;
        c.lambda_m = 0.5;
        c.beta_e = 5.0;
        c.lambda_e = 4.0;
        c.n = 20;
        c.k = k;
        c.rs = 0.5;
        c.var = SweepVar::eve_antennas;
        c.values = make_range(2, 50, 1);
        c.lockstep = lockstep;
        curves.push_back(c);
      }
    }
  } else if (figure == 4) {
    // ESC vs N for k = 1, 2, 3; P/P_I = 4, beta_M = 2, lambda_M = 4,
    // beta_E = 3, lambda_E = 3, L = 1.
    for (int k : {1, 2, 3}) {
      RunConfig c;
      c.metric = Metric::esc;
      c.methods = {Method::asymptotic_n, Method::quadrature, Method::monte_carlo};
      c.power_ratio = 4.0;
      c.beta_m = 2.0;
      c.lambda_m = 4.0;
      c.beta_e = 3.0;
      c.lambda_e = 3.0;
      c.l = 1;
      c.k = k;
      c.rs = 0.0;
      c.var = SweepVar::n_users;
      c.values = make_range(3, 100, 1);
      curves.push_back(c);
    }
  } else {
    throw DomainError("figure must be 2, 3 or 4");
  }
  return curves;
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "metric=" << to_string(cfg.metric) << '\n'
      << "method=" << join_methods(cfg.methods) << '\n'
      << "n=" << cfg.n << '\n'
      << "k=" << cfg.k << '\n'
      << "l=" << cfg.l << '\n'
      << "rs=" << format_double(cfg.rs) << '\n'
      << "power-ratio=" << format_double(cfg.power_ratio) << '\n'
      << "beta-m=" << format_double(cfg.beta_m) << '\n'
      << "lambda-m=" << format_double(cfg.lambda_m) << '\n'
      << "beta-e=" << format_double(cfg.beta_e) << '\n'
      << "lambda-e=" << format_double(cfg.lambda_e) << '\n'
      << "samples=" << cfg.samples << '\n'
      << "seed=" << cfg.seed << '\n'
      << "batch-size=" << cfg.batch_size << '\n'
      << "workers=" << cfg.workers << '\n';
  if (cfg.var != SweepVar::none) {
    out << "var=" << to_string(cfg.var) << '\n' << "values=";
    for (std::size_t i = 0; i < cfg.values.size(); ++i) {
      if (i) out << ',';
      out << format_double(cfg.values[i]);
    }
    out << '\n' << "lockstep=" << (cfg.lockstep ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace secrecy::cli
