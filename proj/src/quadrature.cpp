#include "secrecy/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace secrecy::quad {
namespace {

// Abscissae and weights of the 21-point Kronrod rule and the embedded
// 10-point Gauss rule (QUADPACK qk21). Odd-indexed xgk are Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked_eval(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "integrand returned non-finite value " << y << " at x = " << x;
    throw NumericError(os.str());
  }
  return y;
}

Segment gauss_kronrod21(const Integrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked_eval(f, centre);
  double res_g = 0.0;
  double res_k = kWgk[10] * fc;
  double res_abs = std::abs(res_k);
  std::array<double, 10> fv1{};
  std::array<double, 10> fv2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked_eval(f, centre - dx);
    const double f2 = checked_eval(f, centre + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    res_k += kWgk[j] * (f1 + f2);
    res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }
  const double scale = std::abs(half);
  res_k *= half;
  res_g *= half;
  res_abs *= scale;
  res_asc *= scale;

  double err = std::abs(res_k - res_g);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * res_abs, err);
  }
  return {a, b, res_k, err};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadOptions& opts) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: need finite a < b");
  }
  if (!(opts.rel_tol > 0.0) && !(opts.abs_tol > 0.0)) {
    throw DomainError("integrate: need a positive tolerance");
  }
  const int panels = std::max(1, opts.initial_panels);
  if (opts.max_intervals < panels) {
    throw DomainError("integrate: max_intervals below initial_panels");
  }

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  const double width = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == panels) ? b : a + (i + 1) * width;
    Segment s = gauss_kronrod21(f, lo, hi);
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  auto tolerance = [&] {
    return std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  };

  int intervals = panels;
  while (total_err > tolerance()) {
    if (intervals + 1 > opts.max_intervals) {
      std::ostringstream os;
      os << "integrate: interval budget " << opts.max_intervals
         << " exhausted, value " << total << " +/- " << total_err;
      throw QuadratureError(os.str(), {total, total_err, intervals});
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod21(f, worst.a, mid);
    const Segment right = gauss_kronrod21(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    ++intervals;
    // Recompute from scratch occasionally to stop drift in the running sums.
    if (intervals % 256 == 0) {
      total = 0.0;
      total_err = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    } else {
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
    }
  }

  // Final pass sums in ascending-error order for a reproducible total.
  std::vector<Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  double value = 0.0;
  double err = 0.0;
  for (const auto& s : segs) {
    value += s.value;
    err += s.error;
  }
  return {value, err, intervals};
}

QuadResult integrate_half_line(const Integrand& f, double scale,
                               const QuadOptions& opts) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("integrate_half_line: scale must be positive");
  }
  auto mapped = [&](double u) {
    const double one_minus = 1.0 - u;
    const double z = scale * u / one_minus;
    if (!std::isfinite(z)) return 0.0;
    const double jac = scale / (one_minus * one_minus);
    const double fz = f(z);
    if (fz == 0.0) return 0.0;
    return fz * jac;
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace secrecy::quad
