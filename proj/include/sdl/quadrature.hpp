#pragma once

// Globally adaptive Gauss-Kronrod (10/21-point) quadrature and fixed
// Gauss-Legendre panels. Singular integrands are expected to be
// de-singularised by a change of variables before they reach these routines.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

namespace sdl {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_intervals = 10000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive integration over [a, b], optionally pre-split at `breakpoints`
/// (which must lie inside (a, b), in increasing order). Never throws on
/// non-convergence; check `converged`.
QuadResult integrate_adaptive(const Integrand& f, double a, double b, const QuadOptions& options = {},
                              std::span<const double> breakpoints = {});

/// As integrate_adaptive, but throws QuadratureFailure (mentioning `what`)
/// when the tolerance is not met.
QuadResult integrate_checked(const Integrand& f, double a, double b, const QuadOptions& options,
                             std::string_view what, std::span<const double> breakpoints = {});

/// Composite Gauss-Legendre rule: `panels` equal panels, 5 nodes each.
double integrate_gauss_panels(const Integrand& f, double a, double b, std::size_t panels);

}  // namespace sdl
