#pragma once

// Reduction of dX = b(t, X) dt + sigma(t, X) dW to unit diffusion through the
// space transform F(t, x) = \int_{origin}^x dz / sigma(t, z). Y = F(t, X)
// then solves dY = u dt + dW with
//
//   u = b / sigma - (d sigma / dx) / 2 - \int_{origin}^X (d sigma / dt) / sigma^2 dz.

#include <functional>
#include <limits>
#include <vector>

#include "sdl/sde_sim.hpp"

namespace sdl {

struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lower && x < upper; }
};

using SpaceTimeFunction = std::function<double(double t, double x)>;

struct DiffusionSpec {
  SpaceTimeFunction sigma;     // > 0 on the domain
  SpaceTimeFunction drift;     // b; may be empty (zero drift)
  SpaceTimeFunction sigma_dx;  // optional; central differences (step 1e-6) otherwise
  SpaceTimeFunction sigma_dt;  // optional; ignored when time_homogeneous
  Interval domain;
  double origin = 0.0;  // base point of F
  bool time_homogeneous = true;

  void validate() const;
};

/// F(t, x) by adaptive quadrature (absolute tolerance 1e-13).
double lamperti_forward(const DiffusionSpec& spec, double x, double t = 0.0);

/// F(t, .)^{-1}(y): monotone bracketing then safeguarded Newton. Throws
/// DomainError when y lies outside the range of F(t, .).
double lamperti_inverse(const DiffusionSpec& spec, double y, double t = 0.0);

/// The unit-diffusion drift u at (t, x).
double transformed_drift(const DiffusionSpec& spec, double t, double x);

/// x -> rho_Y(F(x)) / sigma(x): density of X(t) given the density of Y(t)
/// (time-homogeneous specs). The returned function throws DomainError
/// outside the domain.
std::function<double(double)> density_pushforward(std::function<double(double)> rho_y,
                                                  const DiffusionSpec& spec);

/// Tabulated F on [x_lo, x_hi] with `cells` uniform cells, used to drive
/// simulations of Y without a root solve per step.
class LampertiTable {
 public:
  LampertiTable(const DiffusionSpec& spec, double x_lo, double x_hi, std::size_t cells);

  /// Piecewise-linear F^{-1} on the tabulated range; exact inverse outside it.
  double inverse(double y) const;
  /// Drift of Y at y, i.e. transformed_drift at F^{-1}(y), linearly
  /// interpolated; exact evaluation outside the table.
  double drift_at(double y) const;
  double max_abs_drift() const { return max_abs_drift_; }

 private:
  DiffusionSpec spec_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> u_;
  double max_abs_drift_ = 0.0;
};

/// Control driving Y = F(X) for a time-homogeneous spec. The declared bound
/// is the table maximum of |u| (times 1 + 1e-9).
Control transformed_control(const LampertiTable& table);

/// Euler-Maruyama terminal values of X itself, using the same per-path
/// streams as simulate(). Throws DomainError if a path leaves the domain.
std::vector<double> simulate_diffusion_terminal(const DiffusionSpec& spec, const SimulationConfig& config);

}  // namespace sdl
