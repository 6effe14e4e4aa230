#include "sdl/holder_constants.hpp"

#include <cmath>

#include "sdl/errors.hpp"

namespace sdl {

namespace {

void check_horizon(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidConfig("horizon T must be positive");
}

}  // namespace

QuadResult singular_bound_integral(double T, HolderOrder alpha) {
  check_horizon(T);
  alpha.require_below_one();
  const double a = alpha.value();
  const double p = 0.5 * (1.0 + a);
  const double half = 0.5 * T;
  const QuadOptions opts{1e-13, 1e-10, 10000};

  // Left half, s = v^2: 2v * beta(v^2) = 2 phi(v) + 2 v Phi(v), smooth at v = 0.
  const auto left = [&](double v) {
    return (2.0 * normal_pdf(v) + 2.0 * v * normal_cdf(v)) * std::pow(T - v * v, -p);
  };
  // Right half, T - s = u^m with m = 2/(1-alpha): the Jacobian m u^(m-1)
  // cancels (T-s)^(-p) exactly, leaving the constant m.
  const double m = 2.0 / (1.0 - a);
  const auto right = [&](double u) {
    const double s = T - std::pow(u, m);
    const double r = std::sqrt(s);
    return m * (normal_pdf(r) / r + normal_cdf(r));
  };

  const QuadResult l = integrate_checked(left, 0.0, std::sqrt(half), opts, "Hölder constant (left half)");
  const QuadResult r =
      integrate_checked(right, 0.0, std::pow(half, 1.0 / m), opts, "Hölder constant (right half)");
  return {l.value + r.value, l.abs_error + r.abs_error, l.intervals + r.intervals,
          l.evaluations + r.evaluations, true};
}

ConstantEvaluation holder_constant_unit(double T, HolderOrder alpha) {
  check_horizon(T);
  alpha.require_below_one();
  const double a = alpha.value();
  const double c_phi = phi_holder_constant(alpha);
  const double first = c_phi / std::pow(T, 0.5 * (1.0 + a));
  const QuadResult integral = singular_bound_integral(T, alpha);
  return {first + 4.0 * c_phi * integral.value, first, integral.value, 4.0 * c_phi * integral.abs_error};
}

ConstantEvaluation holder_constant(double T, double K, HolderOrder alpha) {
  check_horizon(T);
  if (!(K > 0.0) || !std::isfinite(K)) throw InvalidConfig("drift bound K must be positive");
  const double factor = std::pow(K, 1.0 + alpha.value());
  ConstantEvaluation unit = holder_constant_unit(T * K * K, alpha);
  return {factor * unit.value, unit.first_term, unit.integral, factor * unit.quad_error};
}

}  // namespace sdl
