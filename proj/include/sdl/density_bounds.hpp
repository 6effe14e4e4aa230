#pragma once

// Explicit two-sided bounds lower(x) <= rho_t(x) <= upper(x) <= upper(0) for
// the density rho_t of X(t) = \int_0^t u(s) ds + W(t), where u is any
// adapted drift with |u| <= C.
//
// At the origin the bounds are closed form. Away from it they are
// first-passage convolutions
//
//   lower(x) = \int_0^{tC^2} C a(tC^2 - s) g_away(Cx, s) ds
//   upper(x) = \int_0^{tC^2} C b(tC^2 - s) g_towards(Cx, s) ds
//
// where a, b are the origin bounds of the time-rescaled process. Under the
// rescaling Y(r) = C X(r/C^2) the drift bound becomes 1, so the inner
// constants are taken at unit drift bound (InnerConstant::UnitBound). The
// literal variant, which keeps drift bound C inside the integral, is
// available for comparison; it is not continuous at x = 0 for C != 1.

#include "sdl/quadrature.hpp"

namespace sdl {

enum class InnerConstant { UnitBound, Literal };

struct BoundQuery {
  double t;
  double C;
  double x;

  void validate() const;
};

struct BoundEvaluation {
  double lower;
  double upper;
  double quad_error;  // estimated absolute quadrature error (0 at x = 0)
};

/// (1/sqrt t) phi(C sqrt t) - C Phi(-C sqrt t), strictly positive.
double origin_lower_bound(double t, double C);

/// (1/sqrt t) phi(C sqrt t) + C Phi(C sqrt t).
double origin_upper_bound(double t, double C);

/// Tolerances used for the x != 0 convolutions.
QuadOptions bound_quadrature_options();

/// Bounds at an arbitrary point. Throws QuadratureFailure when the
/// convolution integrals do not converge.
BoundEvaluation density_bounds(const BoundQuery& q, InnerConstant inner = InnerConstant::UnitBound);

}  // namespace sdl
