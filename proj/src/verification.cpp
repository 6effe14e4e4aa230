#include "sdl/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sdl/errors.hpp"
#include "sdl/holder_constants.hpp"
#include "sdl/value_function.hpp"

namespace sdl {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double window_indicator(double y, const WindowPair& w) {
  double j = 0.0;
  if (y >= w.k() && y <= w.k() + w.h()) j += 1.0;
  if (y >= 0.0 && y <= w.h()) j -= 1.0;
  return j;
}

}  // namespace

WindowMean window_mean(std::span<const double> terminal, const WindowPair& window) {
  if (terminal.size() < 2) throw InvalidConfig("window mean needs at least two samples");
  double s1 = 0.0;
  double s2 = 0.0;
  for (double y : terminal) {
    const double j = window_indicator(y, window);
    s1 += j;
    s2 += j * j;
  }
  const double n = static_cast<double>(terminal.size());
  const double mean = s1 / n;
  const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

CheckRecord check_error_estimate(std::span<const double> terminal, double x, double T, const WindowPair& window,
                                 HolderOrder alpha) {
  const WindowMean m = window_mean(terminal, window);
  const ErrorBound eb = error_bound(T, window, x, alpha);
  CheckRecord r;
  r.name = "error_estimate";
  r.label = fmt("window mean <= tight bound + 3 SE (h=%g, k=%g, x=%g)", window.h(), window.k(), x);
  r.value = m.mean;
  r.threshold = eb.tight;
  r.budget = kStatSigmas * m.std_error;
  r.pass = r.value <= r.threshold + r.budget;
  r.statistical = true;
  r.note = eb.note;
  return r;
}

CheckRecord check_reference_value(std::span<const double> terminal, double x, double T, const WindowPair& window) {
  const WindowMean m = window_mean(terminal, window);
  const double v = reference_value({0.0, x, T, window});
  CheckRecord r;
  r.name = "reference_equality";
  r.label = fmt("|window mean - reference value| <= 3 SE for u = -1 (h=%g, k=%g, x=%g)", window.h(), window.k(), x);
  r.value = std::abs(m.mean - v);
  r.threshold = 0.0;
  r.budget = kStatSigmas * m.std_error;
  r.pass = r.value <= r.budget;
  r.statistical = true;
  return r;
}

CheckRecord check_sandwich(const SandwichReport& report, bool statistical) {
  CheckRecord r;
  r.name = "density_sandwich";
  r.label = fmt("lower(x) - budget <= density(x) <= upper(x) + budget (t=%g, C=%g)", report.t, report.C);
  r.value = static_cast<double>(report.violations);
  r.threshold = 0.0;
  for (const auto& p : report.points) r.budget = std::max(r.budget, p.budget);
  r.pass = report.pass();
  r.statistical = statistical;
  r.note = fmt("%g grid points, max quadrature error %.3g", static_cast<double>(report.points.size()),
               report.max_quad_error);
  return r;
}

CheckRecord check_holder(const EmpiricalCdf& cdf, HolderOrder alpha, const HolderCheckSettings& settings,
                         HolderEstimate* estimate) {
  const ConstantEvaluation c = holder_constant(settings.T, settings.K, alpha);
  EmpiricalHolderOptions opts;
  opts.budget = settings.budget_fraction * c.value;
  opts.delta = settings.delta;
  opts.threads = settings.threads;
  opts.cap = c.value;
  const HolderEstimate est = holder_modulus(cdf, alpha, opts);
  if (estimate) *estimate = est;
  CheckRecord r;
  r.name = "holder_modulus";
  r.label = fmt("grid modulus - stat error <= Hölder constant (alpha=%g, T=%g, K=%g)", alpha.value(), settings.T,
                settings.K);
  r.value = est.modulus;
  r.threshold = c.value;
  r.budget = est.stat_error;
  r.pass = est.modulus - est.stat_error <= c.value;
  r.statistical = true;
  r.note = fmt("h_min %.4g, DKW epsilon %.4g", est.grid.h_min, est.dkw_epsilon);
  return r;
}

CheckRecord check_kolmogorov(double T, const WindowPair& window, std::size_t n) {
  if (n < 2) throw InvalidConfig("residual grid needs n >= 2");
  double worst = 0.0;
  const double x_lo = -2.0;
  const double x_hi = window.h() + window.k() + 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 0.99 * T * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = x_lo + (x_hi - x_lo) * static_cast<double>(j) / static_cast<double>(n - 1);
      worst = std::max(worst, kolmogorov_residual({s, x, T, window}));
    }
  }
  CheckRecord r;
  r.name = "kolmogorov_residual";
  r.label = fmt("backward-equation residual < 1e-8 (T=%g, h=%g, k=%g)", T, window.h(), window.k());
  r.value = worst;
  r.threshold = 1e-8;
  r.pass = worst < 1e-8;
  return r;
}

CheckRecord check_window_bound(const NormalParams& params, const WindowPair& window, HolderOrder alpha) {
  params.validate();
  const double lo = -params.mu - 10.0 * params.sigma;
  const double hi = -params.mu + window.h() + window.k() + 10.0 * params.sigma;
  const double step = params.sigma / 1000.0;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  double worst = 0.0;
  for (std::size_t i = 0; i <= n; ++i)
    worst = std::max(worst, std::abs(window_mass_difference(lo + step * static_cast<double>(i), params, window)));
  CheckRecord r;
  r.name = "window_bound";
  r.label = fmt("sup |N| <= h k^alpha / (sqrt(2 pi e^alpha) sigma^(1+alpha)) (h=%g, k=%g, alpha=%g)", window.h(),
                window.k(), alpha.value());
  r.value = worst;
  r.threshold = window_mass_bound(window, alpha, params.sigma);
  r.budget = 1e-12;
  r.pass = worst <= r.threshold + r.budget;
  return r;
}

std::vector<CheckRecord> run_verify_suite(const Control& control, const VerifySuiteConfig& config) {
  config.sim.validate();
  if (config.window_sizes.empty() || config.alphas.empty())
    throw InvalidConfig("verify needs window sizes and alphas");
  const double T = config.sim.T;
  const HolderOrder bound_alpha(config.bound_alpha);
  bound_alpha.require_below_one();

  std::vector<CheckRecord> out;
  std::vector<WindowPair> windows;
  for (double h : config.window_sizes)
    for (double k : config.window_sizes)
      if (h <= k) windows.emplace_back(h, k);

  // Terminal samples per start point; the bound applies to drift bound 1.
  if (control.bound > 1.0) throw InvalidConfig("verify needs a control with bound <= 1");
  std::vector<std::pair<double, std::vector<double>>> cache;
  const auto samples_from = [&](double x) -> const std::vector<double>& {
    for (const auto& [x0, v] : cache)
      if (x0 == x) return v;
    SimulationConfig sim = config.sim;
    sim.x0 = x;
    cache.emplace_back(x, simulate_terminal(control, sim).values);
    return cache.back().second;
  };

  for (const WindowPair& w : windows) {
    for (double x : {-1.0, 0.0, 0.5 * (w.h() + w.k()), 2.0})
      out.push_back(check_error_estimate(samples_from(x), x, T, w, bound_alpha));
  }

  const std::vector<double>& base = samples_from(0.0);
  std::vector<double> xs;
  const auto steps = static_cast<long>(std::llround(6.0 / config.sandwich_step));
  for (long i = 0; i <= steps; ++i) xs.push_back(-3.0 + config.sandwich_step * static_cast<double>(i));
  const KernelDensity kde(base, silverman_bandwidth(base));
  out.push_back(check_sandwich(sandwich_check(kde, T, 1.0, xs, curvature_proxy(T, 1.0)), true));

  const EmpiricalCdf cdf(base);
  for (double a : config.alphas) {
    const HolderOrder alpha(a);
    alpha.require_below_one();
    out.push_back(check_holder(cdf, alpha, {T, 1.0, 0.1, 0.01, config.sim.threads}));
  }

  for (const WindowPair& w : windows) {
    out.push_back(check_kolmogorov(T, w));
    out.push_back(check_window_bound({-T, std::sqrt(T)}, w, bound_alpha));
  }
  return out;
}

}  // namespace sdl
