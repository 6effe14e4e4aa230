#pragma once

// Individual inequality checks on simulated terminal samples, and the suite
// run by `sdl verify`. Statistical checks use one policy throughout: a
// Monte Carlo mean may exceed its deterministic ceiling by at most three
// standard errors, and density or modulus estimates carry 99% budgets.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sdl/empirical.hpp"
#include "sdl/normal_core.hpp"
#include "sdl/sde_sim.hpp"

namespace sdl {

inline constexpr double kStatSigmas = 3.0;

struct CheckRecord {
  std::string name;   // machine-readable identifier
  std::string label;  // what inequality is being tested
  double value = 0.0;
  double threshold = 0.0;
  double budget = 0.0;  // statistical or numerical allowance added to the threshold
  bool pass = false;
  bool statistical = false;
  std::string note;
};

struct WindowMean {
  double mean;
  double std_error;
};

/// Sample mean and standard error of 1{X in [k, k+h]} - 1{X in [0, h]}.
WindowMean window_mean(std::span<const double> terminal, const WindowPair& window);

/// MC mean of the window functional started at x <= tight error bound + 3 SE.
CheckRecord check_error_estimate(std::span<const double> terminal, double x, double T, const WindowPair& window,
                                 HolderOrder alpha);

/// |MC mean - reference value| <= 3 SE, for samples driven by u = -1.
CheckRecord check_reference_value(std::span<const double> terminal, double x, double T, const WindowPair& window);

/// Zero violations in a sandwich comparison.
CheckRecord check_sandwich(const SandwichReport& report, bool statistical);

struct HolderCheckSettings {
  double T = 1.0;
  double K = 1.0;                 // drift bound of the sampled process
  double budget_fraction = 0.1;   // stat_error ceiling as a fraction of the constant
  double delta = 0.01;            // DKW confidence parameter
  unsigned threads = 1;
};

/// Grid modulus - stat_error <= C^K_alpha(T), with the statistical budget a
/// fixed fraction of the constant.
CheckRecord check_holder(const EmpiricalCdf& cdf, HolderOrder alpha, const HolderCheckSettings& settings,
                         HolderEstimate* estimate = nullptr);

/// Backward-equation residual on an n x n grid of (s, x), s in [0, 0.99 T].
CheckRecord check_kolmogorov(double T, const WindowPair& window, std::size_t n = 50);

/// Grid sup of |N| against its closed-form bound.
CheckRecord check_window_bound(const NormalParams& params, const WindowPair& window, HolderOrder alpha);

struct VerifySuiteConfig {
  SimulationConfig sim;            // x0 is ignored; start points come from the matrix
  std::vector<double> window_sizes{0.1, 0.5, 1.0};
  std::vector<double> alphas{0.3, 0.5, 0.7, 0.9};
  double sandwich_step = 0.1;      // x grid on [-3, 3]
  double bound_alpha = 0.5;        // order used for the error-estimate tail term
};

/// Error-estimate matrix (h <= k from window_sizes; x in {-1, 0, (h+k)/2, 2}),
/// density sandwich at t = T with C = 1, Hölder moduli for each
/// alpha, plus the deterministic residual and bound checks.
std::vector<CheckRecord> run_verify_suite(const Control& control, const VerifySuiteConfig& config);

}  // namespace sdl
