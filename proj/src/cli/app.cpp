#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "secrecy/cli.hpp"
#include "secrecy/validation.hpp"

namespace secrecy::cli {
namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    const std::string item = trim(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("not a number: '" + s + "'");
  }
  return v;
}

// Reads key=value lines into --key=value tokens. '#' starts a comment line.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    std::string key = eq == std::string::npos ? "" : trim(t.substr(0, eq));
    if (key.empty()) {
      throw DomainError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw DomainError(path + ": config files cannot include other files");
    tokens.push_back("--" + key + "=" + trim(t.substr(eq + 1)));
  }
  return tokens;
}

// Splices config-file tokens in right after the subcommand so that flags
// given on the command line come later and win.
void expand_config(std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    const std::vector<std::string> tokens = config_tokens(path);
    args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    return;
  }
}

struct ModelFlags {
  RunConfig cfg;
  std::string metric = "sop";
  std::string method = "exact";
  std::string var;
  std::string values;
  std::optional<double> from;
  std::optional<double> to;
  double step = 1.0;
  std::string output;
  std::string config;
};

void add_sim_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--samples", cfg.samples, "Monte Carlo samples per point")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
  sub->add_option("--batch-size", cfg.batch_size, "Samples per unit of work")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

void add_model_options(CLI::App* sub, ModelFlags& f, bool sweep) {
  sub->add_option("--metric", f.metric, "sop, spsc or esc")
      ->check(CLI::IsMember({"sop", "spsc", "esc"}))->capture_default_str();
  sub->add_option("--method", f.method,
                  "Comma list of exact, asymptotic_n, asymptotic_nl, quadrature, monte_carlo")
      ->capture_default_str();
  sub->add_option("--n", f.cfg.n, "Number of users N")->capture_default_str();
  sub->add_option("--k", f.cfg.k, "Selection rank k (1 = best)")->capture_default_str();
  sub->add_option("--l", f.cfg.l, "Eavesdropper antennas L")->capture_default_str();
  sub->add_option("--rs", f.cfg.rs, "Target secrecy rate R_s (bits/s/Hz)")->capture_default_str();
  sub->add_option("--power-ratio", f.cfg.power_ratio, "Transmit power ratio P/P_I")
      ->capture_default_str();
  sub->add_option("--beta-m", f.cfg.beta_m, "Rate of the users' interference gain")
      ->capture_default_str();
  sub->add_option("--lambda-m", f.cfg.lambda_m, "Rate of the users' channel gain")
      ->capture_default_str();
  sub->add_option("--beta-e", f.cfg.beta_e, "Rate of the eavesdropper's interference gain")
      ->capture_default_str();
  sub->add_option("--lambda-e", f.cfg.lambda_e, "Rate of the eavesdropper's channel gain")
      ->capture_default_str();
  add_sim_options(sub, f.cfg);
  if (sweep) {
    sub->add_option("--var", f.var, "Swept variable: n_users, eve_antennas, rate, rank");
    sub->add_option("--values", f.values, "Comma list of sweep values");
    sub->add_option("--from", f.from, "First sweep value");
    sub->add_option("--to", f.to, "Last sweep value (inclusive)");
    sub->add_option("--step", f.step, "Sweep step")->capture_default_str();
    sub->add_flag("--lockstep", f.cfg.lockstep, "Tie eve_antennas to n_users");
  }
  sub->add_option("--config", f.config, "key=value file; command-line flags override it");
}

RunConfig resolve(ModelFlags& f) {
  RunConfig cfg = f.cfg;
  cfg.metric = parse_metric(f.metric);
  cfg.methods.clear();
  for (const std::string& m : split_list(f.method)) cfg.methods.push_back(parse_method(m));
  cfg.values.clear();
  if (!f.var.empty()) {
    cfg.var = parse_sweep_var(f.var);
    if (!f.values.empty()) {
      if (f.from || f.to) throw DomainError("give either --values or --from/--to, not both");
      for (const std::string& v : split_list(f.values)) cfg.values.push_back(parse_number(v));
    } else if (f.from && f.to) {
      cfg.values = make_range(*f.from, *f.to, f.step);
    } else {
      throw DomainError("sweep needs --values or both --from and --to");
    }
  } else if (!f.values.empty() || f.from || f.to) {
    throw DomainError("sweep values given without --var");
  }
  expand_points(cfg);
  return cfg;
}

std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  if (path.empty() || path == "-") return nullptr;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*f) throw IoError("cannot open output file '" + path + "'");
  return f;
}

int emit_rows(const std::vector<Row>& rows, std::ofstream* file,
              std::ostream& out, std::ostream& err) {
  std::ostringstream csv;
  write_csv(csv, rows);
  std::ostream& dest = file ? *file : out;
  dest << csv.str();
  dest.flush();
  if (!dest) throw IoError("failed writing output");
  std::size_t failed = 0;
  for (const Row& r : rows) {
    if (!r.result.error.empty()) ++failed;
  }
  if (failed) {
    err << "error: " << failed << " point(s) failed numerically; see the error column\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secrecy outage and ergodic secrecy capacity of k-th best user selection "
               "in interference-limited networks.",
               "secrecy"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  ModelFlags eval_f;
  ModelFlags sweep_f;
  ModelFlags dump_f;
  auto* eval = app.add_subcommand("eval", "Evaluate one metric at one parameter point");
  add_model_options(eval, eval_f, false);
  eval->add_option("--output", eval_f.output, "CSV output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Sweep one variable and write CSV");
  add_model_options(sweep, sweep_f, true);
  sweep->add_option("--output", sweep_f.output, "CSV output file (default stdout)");

  int figure_no = 0;
  RunConfig figure_sim;
  std::string figure_output;
  std::string figure_config;
  auto* figure = app.add_subcommand("figure", "Write the CSV data behind figure 2, 3 or 4");
  figure->add_option("figure", figure_no, "2, 3 or 4")->required()->check(CLI::IsMember({2, 3, 4}));
  add_sim_options(figure, figure_sim);
  figure->add_option("--output", figure_output, "CSV output file (default stdout)");
  figure->add_option("--config", figure_config, "key=value file");

  validation::ValidationOptions vopts;
  bool inject_fault = false;
  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Run the acceptance checks");
  validate->add_flag("--quick", vopts.quick, "Reduced grids, under 30 s");
  validate->add_option("--samples", vopts.mc_samples, "Monte Carlo samples per check point")
      ->check(CLI::PositiveNumber)->capture_default_str();
  validate->add_option("--seed", vopts.seed, "Monte Carlo seed")->capture_default_str();
  validate->add_option("--workers", vopts.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  validate->add_flag("--inject-fault", inject_fault)->group("");
  validate->add_option("--config", validate_config, "key=value file");

  std::optional<int> dump_figure;
  auto* dump = app.add_subcommand("dump-config", "Print the resolved configuration as key=value");
  add_model_options(dump, dump_f, true);
  dump->add_option("--figure", dump_figure, "Print a figure preset instead")
      ->check(CLI::IsMember({2, 3, 4}));

  try {
    expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (*eval) {
      const RunConfig cfg = resolve(eval_f);
      auto file = open_output(eval_f.output);
      return emit_rows(run_curves(std::span(&cfg, 1), cfg.workers), file.get(), out, err);
    }
    if (*sweep) {
      const RunConfig cfg = resolve(sweep_f);
      auto file = open_output(sweep_f.output);
      return emit_rows(run_curves(std::span(&cfg, 1), cfg.workers), file.get(), out, err);
    }
    if (*figure) {
      std::vector<RunConfig> curves = figure_preset(figure_no);
      for (RunConfig& c : curves) {
        c.samples = figure_sim.samples;
        c.seed = figure_sim.seed;
        c.batch_size = figure_sim.batch_size;
        c.workers = figure_sim.workers;
      }
      auto file = open_output(figure_output);
      return emit_rows(run_curves(curves, figure_sim.workers), file.get(), out, err);
    }
    if (*validate) {
      if (inject_fault) vopts.fault_cm_scale = 1.01;
      bool all = true;
      for (int id = 1; id <= validation::kCheckCount; ++id) {
        const validation::CheckResult r = validation::run_check(id, vopts);
        out << validation::format_result(r) << '\n' << std::flush;
        all = all && r.pass;
      }
      return all ? kExitOk : kExitAcceptance;
    }
    if (*dump) {
      if (dump_figure) {
        const std::vector<RunConfig> curves = figure_preset(*dump_figure);
        for (std::size_t i = 0; i < curves.size(); ++i) {
          out << (i ? "\n" : "") << "# figure " << *dump_figure << ", curve " << i + 1 << '\n'
              << dump_config(curves[i]);
        }
      } else {
        out << dump_config(resolve(dump_f));
      }
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}

}  // namespace secrecy::cli
