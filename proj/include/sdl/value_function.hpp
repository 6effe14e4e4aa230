#pragma once

// Reference value function for the constant control v = -1:
//
//   V(s, x) = E[ 1{Z(T) in [k, k+h]} - 1{Z(T) in [0, h]} ],
//   Z(T) ~ Normal(x - (T - s), T - s),
//
// its derivatives, the backward-equation residual, and the right-hand side
// of the error estimate comparing an arbitrary control to v = -1.

#include <cstddef>
#include <string>

#include "sdl/normal_core.hpp"

namespace sdl {

struct ValueQuery {
  double s;
  double x;
  double T;
  WindowPair window;

  void validate() const;
  /// Law of Z(T) - x expressed in the window-function convention.
  NormalParams terminal_law() const;
};

double reference_value(const ValueQuery& q);
double reference_value_dx(const ValueQuery& q);
double reference_value_dxx(const ValueQuery& q);
double reference_value_ds(const ValueQuery& q);

/// |dV/ds + drift * dV/dx + (1/2) d^2V/dx^2|. Vanishes for drift = -1; any
/// other drift serves as a negative control.
double kolmogorov_residual(const ValueQuery& q, double drift = -1.0);

struct ErrorBound {
  double value_at_start;  // V(0, x)
  double tight;           // V(0,x) + 2 \int beta_s (V(s,b(s)) - V(s,a(s))) ds + tail bound
  double loose;           // V(0,x) + 4 h k^alpha / sqrt(2 pi e^alpha) \int beta_s (T-s)^(-(1+alpha)/2) ds
  double tail_bound;      // analytic bound on the [T - delta, T] slice included in `tight`
  double quad_error;      // estimated quadrature error of `loose`
  bool tight_available;   // false when zero bracketing failed; `tight` then equals `loose`
  std::string note;
};

/// Number of Gauss panels and the relative cutoff delta used for `tight`.
inline constexpr std::size_t kErrorBoundPanels = 512;
inline constexpr double kErrorBoundCutoff = 1e-6;

/// Upper bound on E[1{X(T) in [k,k+h]} - 1{X(T) in [0,h]}] for every adapted
/// drift bounded by 1 and X(0) = x. `alpha` enters only the loose bound.
ErrorBound error_bound(double T, const WindowPair& window, double x, HolderOrder alpha);

}  // namespace sdl
