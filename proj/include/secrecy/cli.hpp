#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "secrecy/analytic.hpp"
#include "secrecy/oracle.hpp"

// Command-line front end: single-point evaluation, parameter sweeps, figure
// presets and CSV output.
namespace secrecy::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitValidation = 2,
  kExitNumeric = 3,
  kExitAcceptance = 4,
};

enum class Metric { sop, spsc, esc };
enum class SweepVar { none, n_users, eve_antennas, rate, rank };

std::string_view to_string(Metric m) noexcept;
std::string_view to_string(SweepVar v) noexcept;
Metric parse_metric(std::string_view s);
Method parse_method(std::string_view s);
/// Accepts the canonical names and the short aliases n, l, rs, k.
SweepVar parse_sweep_var(std::string_view s);

/// Everything needed to produce one CSV curve. Defaults are the figure 2
/// operating point.
struct RunConfig {
  Metric metric = Metric::sop;
  std::vector<Method> methods{Method::exact};
  int n = 10;
  int k = 1;
  int l = 2;
  double rs = 1.0;
  double power_ratio = 2.0;
  double beta_m = 2.0;
  double lambda_m = 0.5;
  double beta_e = 5.0;
  double lambda_e = 4.0;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  std::uint64_t batch_size = 65'536;
  unsigned workers = 0;
  SweepVar var = SweepVar::none;
  std::vector<double> values;  // strictly increasing; empty when var == none
  bool lockstep = false;       // eve_antennas follows n_users

  ChannelParams params() const {
    return ChannelParams(power_ratio, beta_m, lambda_m, beta_e, lambda_e);
  }
};

/// One parameter point of a curve.
struct Point {
  double sweep_value = 0.0;
  int n = 0;
  int k = 0;
  int l = 0;
  double rs = 0.0;
};

/// Expands the sweep into points and checks every invariant up front:
/// value ordering, integrality, selection bounds, method/metric support.
/// Throws DomainError naming the violated invariant.
std::vector<Point> expand_points(const RunConfig& cfg);

/// Throws DomainError when `method` cannot produce `metric` at `sel`.
void check_supported(Metric metric, Method method, const SelectionConfig& sel);

/// Arithmetic range from, from+step, ..., up to `to` inclusive.
std::vector<double> make_range(double from, double to, double step);

struct Evaluation {
  double estimate = std::numeric_limits<double>::quiet_NaN();
  std::optional<oracle::EstimateWithCI> mc;  // set for monte_carlo
  std::string error;                         // nonempty on numeric failure
};

/// Evaluates one metric by one method. Numeric failures are reported in
/// Evaluation::error rather than thrown.
Evaluation evaluate(Metric metric, Method method, const ChannelParams& params,
                    const SelectionConfig& sel, const SecrecyTarget& target,
                    const oracle::SimConfig& sim);

struct Row {
  SweepVar var = SweepVar::none;
  Point point;
  Metric metric = Metric::sop;
  Method method = Method::exact;
  ChannelParams params{1.0, 1.0, 1.0, 1.0, 1.0};
  std::uint64_t seed = 0;
  Evaluation result;
};

/// Evaluates every (curve, point, method) concurrently on `workers` threads
/// (0 = hardware concurrency). Monte Carlo for point p of curve c uses the
/// stream (c << 32) | p, so output is independent of scheduling. Rows come
/// back in curve, point, method order.
std::vector<Row> run_curves(std::span<const RunConfig> curves, unsigned workers);

std::string format_double(double x);
void write_csv_header(std::ostream& out);
void write_csv(std::ostream& out, std::span<const Row> rows);

/// Preset curves for figures 2, 3 and 4.
std::vector<RunConfig> figure_preset(int figure);

/// key=value text that reproduces `cfg` when passed back through --config.
std::string dump_config(const RunConfig& cfg);

/// Runs the command line `args` (without the program name).
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace secrecy::cli
