#pragma once

// Estimators on samples of X(T): the empirical distribution function, the
// second-difference Hölder criterion
//
//   sup |F(x+h+k) - F(x+k) - F(x+h) + F(x)| / (h k^alpha),   0 < h <= k,
//
// Gaussian kernel density estimates with explicit error budgets, and the
// comparison of those estimates against the density bounds.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sdl/density_bounds.hpp"
#include "sdl/normal_core.hpp"

namespace sdl {

using CdfFunction = std::function<double(double)>;

class EmpiricalCdf {
 public:
  /// Sorts the samples. Throws InvalidConfig for fewer than two samples or
  /// non-finite values.
  explicit EmpiricalCdf(std::vector<double> samples);

  /// (number of samples <= x) / n.
  double operator()(double x) const;
  /// Smallest sample s with F(s) >= p, p in (0, 1].
  double quantile(double p) const;

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// F(x+h+k) - F(x+k) - F(x+h) + F(x).
double window_second_difference(const CdfFunction& F, double x, const WindowPair& window);

/// sqrt(ln(2/delta) / (2n)): with probability at least 1 - delta the
/// empirical CDF is uniformly within this distance of the true one.
double dkw_epsilon(std::size_t n, double delta);

/// Search grid for the Hölder criterion. x runs over `x_points` equally
/// spaced points of [x_lo, x_hi] (endpoints included); h and k run over
/// h_min * 2^(j / per_octave) up to h_max, with h <= k. Doubling x_points - 1
/// or per_octave refines the grid without dropping old points.
struct HolderGrid {
  double x_lo = -4.0;
  double x_hi = 4.0;
  std::size_t x_points = 512;
  double h_min = 1e-3;
  double h_max = 8.0;
  unsigned per_octave = 2;

  void validate() const;
  std::vector<double> x_values() const;
  std::vector<double> scales() const;
};

struct HolderEstimate {
  double alpha = 0.0;
  double modulus = 0.0;     // largest ratio found on the grid
  double stat_error = 0.0;  // 4 eps / (h_min k_min^alpha); 0 for exact CDFs
  double dkw_epsilon = 0.0;
  double delta = 0.0;  // DKW confidence parameter
  std::size_t n_samples = 0;
  double argmax_x = 0.0;
  double argmax_h = 0.0;
  double argmax_k = 0.0;
  bool exceeds_cap = false;  // modulus - stat_error above the requested cap
  HolderGrid grid;
};

/// Grid maximum of the criterion for a CDF known in closed form.
HolderEstimate holder_modulus(const CdfFunction& F, HolderOrder alpha, const HolderGrid& grid,
                              double cap = std::numeric_limits<double>::infinity(), unsigned threads = 1);

struct EmpiricalHolderOptions {
  double budget = 0.0;  // required stat_error ceiling, > 0
  double delta = 0.01;
  double h_min = 0.0;   // raised to the DKW floor when smaller (0: use the floor)
  std::size_t x_points = 512;
  unsigned per_octave = 2;
  double cap = std::numeric_limits<double>::infinity();
  unsigned threads = 1;
};

/// Smallest window scale keeping 4 eps / h^(1+alpha) within `budget`.
double holder_scale_floor(std::size_t n, HolderOrder alpha, double budget, double delta);

/// Criterion on an empirical CDF. The x grid spans
/// [q(0.001) - 1, q(0.999) + 1]; windows run from the DKW floor up to that
/// width. Throws InvalidConfig when the floor exceeds the width, i.e. the
/// budget cannot be met with this many samples.
HolderEstimate holder_modulus(const EmpiricalCdf& F, HolderOrder alpha, const EmpiricalHolderOptions& options);

/// Silverman's rule 0.9 min(sd, IQR / 1.34) n^(-1/5).
double silverman_bandwidth(std::span<const double> samples);

/// Second-derivative scale beta0(t, C) (C + 1/sqrt t)^2 used when no better
/// curvature bound for rho_t is available.
double curvature_proxy(double t, double C);

struct KdePoint {
  double density;
  double std_error;
  double bias_bound;  // bandwidth^2 * curvature / 2
  double budget;      // z_{0.995} std_error + bias_bound
};

/// Gaussian kernel density estimate.
class KernelDensity {
 public:
  /// Throws InvalidConfig for an empty sample or a non-positive bandwidth.
  KernelDensity(std::vector<double> samples, double bandwidth);

  double operator()(double x) const;
  /// Estimate with its 99% error budget for a density whose second
  /// derivative is bounded by `curvature`.
  KdePoint evaluate(double x, double curvature) const;
  /// Largest |f''| of the estimate itself (at twice the bandwidth) over a
  /// grid of `points` points on [lo, hi]; a pilot curvature bound.
  double pilot_curvature(double lo, double hi, std::size_t points = 201) const;

  double bandwidth() const { return bandwidth_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  struct Moments {
    double mean;
    double mean_sq;
  };
  Moments kernel_moments(double x, double bw) const;

  std::vector<double> sorted_;
  double bandwidth_;
};

struct SandwichPoint {
  double x;
  double estimate;
  double lower;
  double upper;
  double budget;
  bool inside;
};

struct SandwichReport {
  double t = 0.0;
  double C = 0.0;
  std::vector<SandwichPoint> points;
  std::size_t violations = 0;
  double max_quad_error = 0.0;

  bool pass() const { return violations == 0; }
};

/// lower - budget <= estimate <= upper + budget at every x.
SandwichReport sandwich_check(const KernelDensity& kde, double t, double C, std::span<const double> xs,
                              double curvature, InnerConstant inner = InnerConstant::UnitBound);

/// Same comparison for a density known in closed form (zero budget).
SandwichReport sandwich_check(const std::function<double(double)>& density, double t, double C,
                              std::span<const double> xs, InnerConstant inner = InnerConstant::UnitBound);

/// sup |F_n - F| of the empirical CDF of `samples` against `cdf`.
double ks_statistic(std::span<const double> samples, const CdfFunction& cdf);

}  // namespace sdl
