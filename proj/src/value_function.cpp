#include "sdl/value_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "sdl/density_bounds.hpp"
#include "sdl/errors.hpp"
#include "sdl/holder_constants.hpp"
#include "sdl/quadrature.hpp"

namespace sdl {

void ValueQuery::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidConfig("value query requires T > 0");
  if (!(s >= 0.0) || !(s < T)) throw InvalidConfig("value query requires 0 <= s < T");
  if (!std::isfinite(x)) throw InvalidConfig("value query requires a finite x");
}

NormalParams ValueQuery::terminal_law() const {
  const double tau = T - s;
  return {-tau, std::sqrt(tau)};
}

double reference_value(const ValueQuery& q) {
  q.validate();
  return window_mass_difference(q.x, q.terminal_law(), q.window);
}

double reference_value_dx(const ValueQuery& q) {
  q.validate();
  return window_mass_slope(q.x, q.terminal_law(), q.window);
}

double reference_value_dxx(const ValueQuery& q) {
  q.validate();
  return window_mass_curvature(q.x, q.terminal_law(), q.window);
}

double reference_value_ds(const ValueQuery& q) {
  q.validate();
  const double tau = q.T - q.s;
  const double root = std::sqrt(tau);
  const double h = q.window.h();
  const double k = q.window.k();
  // V = sum_j c_j Phi(z_j), z_j = (e_j - x + tau) / sqrt(tau), tau = T - s.
  const std::array<double, 4> edge = {k + h, k, h, 0.0};
  const std::array<double, 4> coef = {1.0, -1.0, -1.0, 1.0};
  double sum = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double gap = edge[j] - q.x;
    const double z = (gap + tau) / root;
    sum += coef[j] * normal_pdf(z) * (gap / (2.0 * tau * root) - 0.5 / root);
  }
  return sum;
}

double kolmogorov_residual(const ValueQuery& q, double drift) {
  return std::abs(reference_value_ds(q) + drift * reference_value_dx(q) + 0.5 * reference_value_dxx(q));
}

ErrorBound error_bound(double T, const WindowPair& window, double x, HolderOrder alpha) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidConfig("error bound requires T > 0");
  if (!std::isfinite(x)) throw InvalidConfig("error bound requires a finite x");
  alpha.require_below_one();

  ErrorBound out{};
  out.value_at_start = reference_value({0.0, x, T, window});

  const double a = alpha.value();
  const double p = 0.5 * (1.0 + a);
  const double scale = window.h() * std::pow(window.k(), a) * phi_holder_constant(alpha);
  const QuadResult integral = singular_bound_integral(T, alpha);
  // The gap V(s, b) - V(s, a) is at most twice the uniform bound on |V|.
  out.loose = out.value_at_start + 4.0 * scale * integral.value;
  out.quad_error = 4.0 * scale * integral.abs_error;

  // Gap V(s, b(s)) - V(s, a(s)) over the interval where dV/dx > 0.
  const auto gap = [&](double s) {
    const ValueQuery q{s, 0.0, T, window};
    const NormalParams law = q.terminal_law();
    const SlopeZeros z = find_slope_zeros(law, window);
    return window_mass_difference(z.upper, law, window) - window_mass_difference(z.lower, law, window);
  };

  const double delta = kErrorBoundCutoff * T;
  const double s_end = T - delta;
  try {
    // s = v^2 absorbs the s^(-1/2) singularity of the density bound at s = 0.
    const auto integrand = [&](double v) {
      return (2.0 * normal_pdf(v) + 2.0 * v * normal_cdf(v)) * gap(v * v);
    };
    const double body = integrate_gauss_panels(integrand, 0.0, std::sqrt(s_end), kErrorBoundPanels);
    // On [T - delta, T]: the gap is at most min(2, 2 scale tau^(-p)) and the
    // density bound is decreasing in s.
    const double gap_mass = std::min(2.0 * delta, 2.0 * scale * std::pow(delta, 1.0 - p) / (1.0 - p));
    out.tail_bound = 2.0 * origin_upper_bound(s_end, 1.0) * gap_mass;
    out.tight = out.value_at_start + 2.0 * body + out.tail_bound;
    out.tight_available = true;
  } catch (const BracketFailure& e) {
    out.tight = out.loose;
    out.tail_bound = 0.0;
    out.tight_available = false;
    out.note = std::string("tight bound unavailable, using loose bound: ") + e.what();
  }
  return out;
}

}  // namespace sdl
