#include "sdl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "sdl/errors.hpp"

namespace sdl {

namespace {

// Kronrod abscissae on [0, 1); odd indices are the 10-point Gauss nodes.
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
    0.295524224714752870173892994651146};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_21(const Integrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = kWgk[10] * fc;
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  double err = std::abs(kronrod - gauss);
  if (!std::isfinite(kronrod)) err = std::numeric_limits<double>::infinity();
  return {a, b, kronrod, err};
}

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGl5Nodes = {-0.906179845938663992797626878299392,
                                             -0.538469310105683091036314420700208, 0.0,
                                             0.538469310105683091036314420700208,
                                             0.906179845938663992797626878299392};
constexpr std::array<double, 5> kGl5Weights = {
    0.236926885056189087514264040719917, 0.478628670499366468041291514835638,
    0.568888888888888888888888888888889, 0.478628670499366468041291514835638,
    0.236926885056189087514264040719917};

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, double a, double b, const QuadOptions& options,
                              std::span<const double> breakpoints) {
  QuadResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  double left = a;
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  cuts.push_back(b);
  for (double right : cuts) {
    Segment s = gauss_kronrod_21(f, left, right);
    total += s.value;
    total_err += s.error;
    heap.push(s);
    result.evaluations += 21;
    left = right;
  }

  const auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
  while (total_err > tolerance() && heap.size() < options.max_intervals) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Interval can no longer be split in floating point.
    if (!(std::min(worst.a, worst.b) < mid && mid < std::max(worst.a, worst.b))) break;
    heap.pop();
    Segment l = gauss_kronrod_21(f, worst.a, mid);
    Segment r = gauss_kronrod_21(f, mid, worst.b);
    result.evaluations += 42;
    total += l.value + r.value - worst.value;
    total_err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
  }

  // Re-sum from the leaves to avoid drift from the running updates.
  result.intervals = heap.size();
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  result.value = total;
  result.abs_error = total_err;
  result.converged = std::isfinite(total) && total_err <= tolerance();
  return result;
}

QuadResult integrate_checked(const Integrand& f, double a, double b, const QuadOptions& options,
                             std::string_view what, std::span<const double> breakpoints) {
  QuadResult r = integrate_adaptive(f, a, b, options, breakpoints);
  if (!r.converged) {
    throw QuadratureFailure(std::string(what) + ": quadrature tolerance not met (estimate " +
                            std::to_string(r.value) + ", error " + std::to_string(r.abs_error) +
                            ", " + std::to_string(r.intervals) + " intervals)");
  }
  return r;
}

double integrate_gauss_panels(const Integrand& f, double a, double b, std::size_t panels) {
  if (panels == 0) throw InvalidConfig("panel count must be positive");
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double centre = lo + 0.5 * width;
    double panel = 0.0;
    for (int j = 0; j < 5; ++j) panel += kGl5Weights[j] * f(centre + 0.5 * width * kGl5Nodes[j]);
    total += 0.5 * width * panel;
  }
  return total;
}

}  // namespace sdl
