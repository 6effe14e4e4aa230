#pragma once

// Hölder constants for densities of unit-diffusion processes with bounded
// drift:
//
//   C_alpha(T)   = 1 / (sqrt(2 pi e^alpha) T^((1+alpha)/2))
//                + 4 / sqrt(2 pi e^alpha) * I_alpha(T),
//   I_alpha(T)   = \int_0^T (phi(sqrt s)/sqrt s + Phi(sqrt s)) (T - s)^(-(1+alpha)/2) ds,
//   C^K_alpha(T) = K^(1+alpha) C_alpha(T K^2).

#include "sdl/normal_core.hpp"
#include "sdl/quadrature.hpp"

namespace sdl {

struct ConstantEvaluation {
  double value;       // the constant
  double first_term;  // 1 / (sqrt(2 pi e^alpha) T^((1+alpha)/2)), at the rescaled horizon
  double integral;    // I_alpha at the rescaled horizon
  double quad_error;  // absolute error estimate of `value`
};

/// I_alpha(T), split at T/2: s = v^2 on the left half, u = (T-s)^((1-alpha)/2)
/// on the right half. Requires alpha < 1.
QuadResult singular_bound_integral(double T, HolderOrder alpha);

/// C_alpha(T) for drift bound 1.
ConstantEvaluation holder_constant_unit(double T, HolderOrder alpha);

/// C^K_alpha(T) = K^(1+alpha) C_alpha(T K^2).
ConstantEvaluation holder_constant(double T, double K, HolderOrder alpha);

}  // namespace sdl
