// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and mirrored in the README.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cli.hpp"
#include "sdl/density_bounds.hpp"
#include "sdl/empirical.hpp"
#include "sdl/hitting_densities.hpp"
#include "sdl/holder_constants.hpp"
#include "sdl/lamperti.hpp"
#include "sdl/normal_core.hpp"
#include "sdl/quadrature.hpp"
#include "sdl/sde_sim.hpp"
#include "sdl/value_function.hpp"
#include "sdl/verification.hpp"

using namespace sdl;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }
double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

// 1. Closed-form Gaussian product integral against quadrature of its definition.
Verdict gaussian_product() {
  auto g = rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double sigma = uniform(g, 0.1, 10.0);
    const double y = uniform(g, -5.0, 5.0);
    const double z = uniform(g, -5.0, 5.0);
    const auto f = [&](double x) { return normal_pdf((x - y) / sigma) * normal_pdf((x - z) / sigma) / (sigma * sigma); };
    const std::vector<double> cuts{std::min(y, z), std::max(y, z)};
    const QuadResult q = integrate_checked(f, cuts[0] - 40.0 * sigma, cuts[1] + 40.0 * sigma, {1e-15, 1e-13, 10000},
                                           "product integral", cuts);
    worst = std::max(worst, std::abs(q.value - gaussian_product_integral(sigma, y, z)));
  }
  return {worst < 1e-10, fmt("max |closed form - quadrature| = %.2e over 100 cases (tol 1e-10)", worst)};
}

// 2. Grid supremum of |N| against its closed-form bound.
Verdict window_bound() {
  auto g = rng(202);
  double worst_ratio = 0.0;
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    const double h = uniform(g, 0.05, 2.0);
    const WindowPair w(h, uniform(g, h, 3.0));
    const HolderOrder a(uniform(g, 0.05, 1.0));
    const NormalParams p{uniform(g, -2.0, 2.0), uniform(g, 0.1, 3.0)};
    const CheckRecord r = check_window_bound(p, w, a);
    ok = ok && r.pass;
    worst_ratio = std::max(worst_ratio, r.value / r.threshold);
  }
  return {ok, fmt("20 random cases, max sup|N| / bound = %.4f (allowance 1e-12)", worst_ratio)};
}

// 3. Sign structure of N' and its zeros.
Verdict slope_structure() {
  auto g = rng(303);
  bool ok = true;
  double worst_zero = 0.0;
  double worst_sum = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double h = uniform(g, 0.05, 2.0);
    const WindowPair w(h, uniform(g, h, 2.5));
    const bool standard = i >= 20;
    const NormalParams p = standard ? NormalParams{0.0, 1.0} : NormalParams{uniform(g, -2.0, 2.0), uniform(g, 0.1, 3.0)};
    const double inner_lo = -p.mu - p.sigma;
    const double inner_hi = w.h() + w.k() - p.mu + p.sigma;
    const double lo = inner_lo - 8.0 * p.sigma;
    const double hi = inner_hi + 8.0 * p.sigma;
    const int n = 20000;
    int changes = 0;
    int prev = 0;
    for (int j = 0; j <= n; ++j) {
      const double x = lo + (hi - lo) * j / n;
      const int s = window_mass_slope_sign(x, p, w);
      if ((x < inner_lo || x > inner_hi) && s != -1) ok = false;
      if (s != 0 && prev != 0 && s != prev) ++changes;
      if (s != 0) prev = s;
    }
    if (changes != 2) ok = false;
    const SlopeZeros z = find_slope_zeros(p, w);
    worst_zero = std::max({worst_zero, std::abs(window_mass_slope(z.lower, p, w)),
                           std::abs(window_mass_slope(z.upper, p, w))});
    if (standard) worst_sum = std::max(worst_sum, std::abs(z.lower + z.upper - (w.h() + w.k())));
  }
  ok = ok && worst_zero < 1e-12 && worst_sum < 1e-10;
  return {ok, fmt("two sign changes, negative outside the band; max |N'(zero)| = %.1e (tol 1e-12), "
                  "max |a+b-(h+k)| = %.1e (tol 1e-10)",
                  worst_zero, worst_sum)};
}

// 4. Backward-equation residual and the analytic x-derivative.
Verdict kolmogorov() {
  bool ok = true;
  double worst_res = 0.0;
  double worst_fd = 0.0;
  const double cases[3][3] = {{1.0, 1.0, 1.0}, {1.0, 0.5, 2.0}, {2.0, 0.25, 0.25}};
  for (const auto& c : cases) {
    const WindowPair w(c[1], c[2]);
    const CheckRecord r = check_kolmogorov(c[0], w, 50);
    ok = ok && r.pass;
    worst_res = std::max(worst_res, r.value);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) {
        const double s = 0.99 * c[0] * i / 49.0;
        const double x = -2.0 + (w.h() + w.k() + 4.0) * j / 49.0;
        const double eps = 1e-5 * std::sqrt(c[0] - s);
        const double fd = (reference_value({s, x + eps, c[0], w}) - reference_value({s, x - eps, c[0], w})) / (2 * eps);
        worst_fd = std::max(worst_fd, std::abs(fd - reference_value_dx({s, x, c[0], w})));
      }
  }
  ok = ok && worst_fd < 1e-7;
  return {ok, fmt("max residual %.1e (tol 1e-8), max |dV/dx - central difference| %.1e (tol 1e-7)", worst_res, worst_fd)};
}

struct NamedControl {
  std::string label;
  Control control;
  bool shift_invariant;  // constant drift: X^x = x + X^0 path by path
  bool reference;        // the control v = -1 of the value function
};

std::vector<NamedControl> acceptance_controls() {
  return {{"constant -1", controls::constant(-1.0), true, true},
          {"constant 0", controls::constant(0.0), true, false},
          {"bang-bang", controls::bang_bang(), false, false},
          {"running max", controls::running_max(), false, false}};
}

std::vector<WindowPair> window_pairs() {
  const double sizes[] = {0.1, 0.5, 1.0};
  std::vector<WindowPair> out;
  for (double h : sizes)
    for (double k : sizes)
      if (h <= k) out.emplace_back(h, k);
  return out;
}

constexpr std::size_t kPaths = 1000000;
constexpr std::size_t kSteps = 1024;
constexpr std::uint64_t kSeed = 20240601;

// Terminal samples from x = 0 per control, shared by criteria 5 to 7.
std::map<std::string, std::vector<double>> g_origin_samples;

// 5. Error estimate over the window matrix for four controls.
Verdict error_estimate() {
  const auto pairs = window_pairs();
  std::set<double> starts{-1.0, 0.0, 2.0};
  for (const auto& w : pairs) starts.insert(0.5 * (w.h() + w.k()));
  const HolderOrder alpha(0.5);

  bool ok = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double worst_slack = -1e9;  // max (mean - bound) / SE
  double worst_ref = 0.0;     // max |mean - V| / SE for u = -1
  for (const auto& nc : acceptance_controls()) {
    SimulationConfig cfg;
    cfg.T = 1.0;
    cfg.n_steps = kSteps;
    cfg.n_paths = kPaths;
    cfg.seed = kSeed;
    cfg.threads = threads();
    std::map<double, std::vector<double>> by_start;
    if (nc.shift_invariant) {
      cfg.x0 = 0.0;
      const auto base = simulate_terminal(nc.control, cfg).values;
      for (double x : starts) {
        auto v = base;
        for (auto& e : v) e += x;
        by_start[x] = std::move(v);
      }
    } else {
      for (double x : starts) {
        cfg.x0 = x;
        by_start[x] = simulate_terminal(nc.control, cfg).values;
      }
    }
    g_origin_samples[nc.label] = by_start.at(0.0);
    for (const auto& w : pairs)
      for (double x : {-1.0, 0.0, 0.5 * (w.h() + w.k()), 2.0}) {
        const auto& sample = by_start.at(x);
        const CheckRecord r = check_error_estimate(sample, x, 1.0, w, alpha);
        ++checks;
        if (!r.pass) ++failures;
        const WindowMean m = window_mean(sample, w);
        worst_slack = std::max(worst_slack, (m.mean - r.threshold) / m.std_error);
        if (nc.reference) {
          const CheckRecord ref = check_reference_value(sample, x, 1.0, w);
          ++checks;
          if (!ref.pass) ++failures;
          worst_ref = std::max(worst_ref, ref.value / m.std_error);
        }
      }
  }
  ok = failures == 0;
  return {ok, fmt("%zu checks, %zu failed; max (mean - tight bound)/SE = %.2f (limit 3), "
                  "u = -1 max |mean - V(0,x)|/SE = %.2f (limit 3)",
                  checks, failures, worst_slack, worst_ref)};
}

std::vector<double> sandwich_grid() {
  std::vector<double> xs;
  for (int i = -30; i <= 30; ++i) xs.push_back(0.1 * i);
  return xs;
}

// 6. Density sandwich for bang-bang via KDE, and for closed-form densities.
Verdict density_sandwich() {
  const auto& s = g_origin_samples.at("bang-bang");
  const KernelDensity kde(s, silverman_bandwidth(s));
  const auto xs = sandwich_grid();
  const SandwichReport r = sandwich_check(kde, 1.0, 1.0, xs, curvature_proxy(1.0, 1.0));
  std::size_t closed_violations = 0;
  for (double drift : {0.0, -1.0}) {
    const auto rho = [drift](double x) { return normal_pdf(x - drift); };
    closed_violations += sandwich_check(rho, 1.0, 1.0, xs).violations;
  }
  double worst_margin = 1e9;
  for (const auto& p : r.points)
    worst_margin = std::min({worst_margin, p.estimate - (p.lower - p.budget), (p.upper + p.budget) - p.estimate});
  return {r.pass() && closed_violations == 0,
          fmt("bang-bang KDE (bandwidth %.4f): %zu of %zu points outside; closed forms u = 0, -1: %zu violations; "
              "smallest margin %.4f",
              kde.bandwidth(), r.violations, r.points.size(), closed_violations, worst_margin)};
}

// 7. Empirical Hölder modulus against the constant, per control and order.
Verdict holder_claim() {
  bool ok = true;
  double worst = 0.0;
  std::size_t checks = 0;
  for (const auto& [name, samples] : g_origin_samples) {
    const EmpiricalCdf F(samples);
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
      HolderCheckSettings st;
      st.threads = threads();
      const CheckRecord r = check_holder(F, HolderOrder(a), st);
      ok = ok && r.pass;
      worst = std::max(worst, r.value / r.threshold);
      ++checks;
    }
  }
  return {ok && checks == 16, fmt("%zu checks; max (modulus - stat error) / constant = %.4f (limit 1)", checks, worst)};
}

// Second route for the singular integral: s = T sin^2(theta), endpoint value
// subtracted, midpoint rule with 10^7 cells; the subtracted part is a Beta
// function.
double sine_route_integral(double T, double alpha) {
  const double p = 0.5 * (1.0 + alpha);
  const double rt = std::sqrt(T);
  const auto G = [&](double th) {
    const double sn = std::sin(th);
    return 2.0 * rt * normal_pdf(rt * sn) + 2.0 * T * sn * normal_cdf(rt * sn);
  };
  const double G_end = G(0.5 * std::numbers::pi);
  const std::size_t n = 10000000;
  const double width = 0.5 * std::numbers::pi / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = (static_cast<double>(i) + 0.5) * width;
    sum += (G(th) - G_end) * std::pow(std::cos(th), -alpha);
  }
  const double beta_part =
      0.5 * std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (1.0 - alpha)) / std::tgamma(1.0 - 0.5 * alpha);
  return std::pow(T, -p) * (sum * width + G_end * beta_part);
}

// Third route, Boost tanh-sinh in s with the (T - s) endpoint subtracted.
double tanh_sinh_integral(double T, double alpha) {
  const double p = 0.5 * (1.0 + alpha);
  const auto w = [](double s) { return normal_pdf(std::sqrt(s)) / std::sqrt(s) + normal_cdf(std::sqrt(s)); };
  const double wT = w(T);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double body = ts.integrate(
      [&](double s) { return (s <= 0.0 || s >= T) ? 0.0 : (w(s) - wT) * std::pow(T - s, -p); }, 0.0, T, 1e-13);
  return body + wT * std::pow(T, 1.0 - p) / (1.0 - p);
}

// 8. The constant by independent routes, and its scaling identity.
Verdict constant_routes() {
  const HolderOrder a(0.5);
  const ConstantEvaluation own = holder_constant_unit(1.0, a);
  const double c_phi = phi_holder_constant(a);
  const double sine = own.first_term + 4.0 * c_phi * sine_route_integral(1.0, 0.5);
  const double ts = own.first_term + 4.0 * c_phi * tanh_sinh_integral(1.0, 0.5);
  const double rel_sine = std::abs(sine / own.value - 1.0);
  const double rel_ts = std::abs(ts / own.value - 1.0);

  auto g = rng(808);
  double worst_scale = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double T = std::exp(uniform(g, -2.0, 2.0));
    const double K = std::exp(uniform(g, -1.5, 1.5));
    const HolderOrder al(uniform(g, 0.05, 0.95));
    const double lhs = holder_constant(T, K, al).value;
    const double rhs = std::pow(K, 1.0 + al.value()) * holder_constant_unit(T * K * K, al).value;
    worst_scale = std::max(worst_scale, std::abs(lhs / rhs - 1.0));
  }
  const bool ok = rel_sine < 1e-6 && rel_ts < 1e-6 && worst_scale < 1e-12;
  return {ok, fmt("C(1, 0.5) = %.15g; sine-substitution midpoint rel diff %.1e, tanh-sinh rel diff %.1e (tol 1e-6); "
                  "scaling identity max rel diff %.1e (tol 1e-12)",
                  own.value, rel_sine, rel_ts, worst_scale)};
}

// 9. Total masses of the two hitting densities.
Verdict hitting_masses() {
  double worst = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    // s = e^y spreads both tails over a finite y range.
    const auto towards = [x](double y) { return hitting_density_towards({x, std::exp(y)}) * std::exp(y); };
    const auto away = [x](double y) { return hitting_density_away({x, std::exp(y)}) * std::exp(y); };
    const QuadOptions opts{1e-14, 1e-12, 10000};
    const double m1 = integrate_checked(towards, -60.0, 60.0, opts, "hitting mass").value;
    const double m2 = integrate_checked(away, -60.0, 60.0, opts, "hitting mass").value;
    worst = std::max({worst, std::abs(m1 - 1.0), std::abs(m2 - std::exp(-2.0 * x))});
  }
  return {worst < 1e-8, fmt("max mass error %.1e over x in {0.1, 0.5, 1, 2, 5} (tol 1e-8)", worst)};
}

// 10. Reduction of dX = cos X dt + (2 + sin X) dW to unit diffusion.
Verdict lamperti_pipeline() {
  DiffusionSpec spec;
  spec.sigma = [](double, double x) { return 2.0 + std::sin(x); };
  spec.drift = [](double, double x) { return std::cos(x); };
  spec.sigma_dx = [](double, double x) { return std::cos(x); };

  double worst_trip = 0.0;
  for (int i = -500; i <= 500; ++i) {
    const double x = 0.01 * i;
    worst_trip = std::max(worst_trip, std::abs(lamperti_inverse(spec, lamperti_forward(spec, x)) - x));
  }
  // |b / sigma| <= 1 and sigma is 1-Lipschitz.
  const double drift_cap = 1.0 + 0.5;
  double worst_drift = 0.0;
  for (int i = -20000; i <= 20000; ++i) worst_drift = std::max(worst_drift, std::abs(transformed_drift(spec, 0.0, 1e-3 * i)));

  SimulationConfig cfg;
  cfg.T = 1.0;
  cfg.n_steps = 1024;
  cfg.n_paths = 100000;
  cfg.seed = kSeed + 10;
  cfg.threads = threads();
  const auto xs = simulate_diffusion_terminal(spec, cfg);
  const LampertiTable table(spec, -60.0, 60.0, 1 << 16);
  cfg.x0 = lamperti_forward(spec, 0.0);
  const auto ys = simulate_terminal(transformed_control(table), cfg).values;

  const KernelDensity kde_x(xs, silverman_bandwidth(xs));
  const KernelDensity kde_y(ys, silverman_bandwidth(ys));
  const double curv_x = kde_x.pilot_curvature(-2.5, 2.5);
  const double curv_y = kde_y.pilot_curvature(lamperti_forward(spec, -2.5), lamperti_forward(spec, 2.5));
  const auto pushed = density_pushforward([&](double y) { return kde_y(y); }, spec);
  std::size_t outside = 0;
  double worst_ratio = 0.0;
  for (int i = -20; i <= 20; ++i) {
    const double x = 0.1 * i;
    const KdePoint px = kde_x.evaluate(x, curv_x);
    const KdePoint py = kde_y.evaluate(lamperti_forward(spec, x), curv_y);
    const double budget = px.budget + py.budget / (2.0 + std::sin(x));
    const double diff = std::abs(px.density - pushed(x));
    worst_ratio = std::max(worst_ratio, diff / budget);
    if (diff > budget) ++outside;
  }
  const bool ok = worst_trip < 1e-8 && worst_drift <= drift_cap && table.max_abs_drift() <= drift_cap && outside == 0;
  return {ok, fmt("round trip max error %.1e (tol 1e-8); max |u| on grid %.4f (cap %.1f); "
                  "KDE(X) vs pushforward of KDE(Y): %zu of 41 points outside, max diff/budget %.3f",
                  worst_trip, worst_drift, drift_cap, outside, worst_ratio)};
}

// 11. Byte-identical outputs across repeated runs and thread counts.
std::map<std::string, std::string> run_command_set(const fs::path& dir, unsigned n_threads) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path home = fs::current_path();
  fs::current_path(dir);
  std::map<std::string, std::string> out;
  const std::string t = std::to_string(n_threads);
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"bounds", {"bounds", "--t", "0.7", "--c", "1.5", "--x-grid", "-2:2:0.1"}},
      {"bounds_file", {"bounds", "--out", "b.csv"}},
      {"constants", {"constants", "--T", "2", "--K", "1.5", "--alpha", "0.7", "--literal-subscript"}},
      {"simulate", {"simulate", "--control", "running_max", "--n-paths", "2000", "--n-steps", "128", "--seed", "9",
                    "--out", "p.sdl1"}},
      {"simulate_csv", {"simulate", "--control", "bang_bang", "--n-paths", "20", "--n-steps", "16", "--format", "csv",
                        "--out", "p.csv"}},
      {"estimate", {"estimate", "--input", "p.sdl1", "--alphas", "0.3,0.9", "--report", "r.jsonl"}},
      {"verify", {"verify", "--control", "bang_bang", "--n-paths", "3000", "--n-steps", "64", "--seed", "5",
                  "--window-sizes", "0.5,1", "--alphas", "0.5", "--report", "r.jsonl"}},
      {"report", {"report", "--input", "r.jsonl", "--check"}},
  };
  for (auto [name, args] : commands) {
    args.push_back("--threads");
    args.push_back(t);
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    out[name] = std::to_string(code) + "\n" + o.str();
  }
  for (const char* file : {"b.csv", "p.sdl1", "p.csv", "r.jsonl"}) {
    std::ifstream f(file, std::ios::binary);
    out[file] = std::string(std::istreambuf_iterator<char>(f), {});
  }
  fs::current_path(home);
  fs::remove_all(dir);
  return out;
}

Verdict determinism() {
  const fs::path base = fs::temp_directory_path() / "sdl_acceptance_determinism";
  const unsigned many = std::max(2u, threads());
  const auto a = run_command_set(base / "one_a", 1);
  const auto b = run_command_set(base / "one_b", 1);
  const auto c = run_command_set(base / "many", many);
  fs::remove_all(base);
  std::size_t mismatches = 0;
  std::string which;
  bool all_ok_codes = true;
  for (const auto& [k, v] : a) {
    if (b.at(k) != v || c.at(k) != v) {
      ++mismatches;
      which += " " + k;
    }
    if (k.find('.') == std::string::npos && v.rfind("0\n", 0) != 0) {
      all_ok_codes = false;
      which += " exit(" + k + ")";
    }
  }
  return {mismatches == 0 && all_ok_codes,
          fmt("%zu outputs compared across runs at 1, 1 and %u threads; mismatches: %zu%s", a.size(), many,
              mismatches, which.c_str())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "gaussian product integral", gaussian_product},
      {2, "window mass bound", window_bound},
      {3, "window slope structure", slope_structure},
      {4, "backward equation", kolmogorov},
      {5, "error estimate", error_estimate},
      {6, "density sandwich", density_sandwich},
      {7, "hölder modulus vs constant", holder_claim},
      {8, "constant by independent routes", constant_routes},
      {9, "hitting-time masses", hitting_masses},
      {10, "lamperti pipeline", lamperti_pipeline},
      {11, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
