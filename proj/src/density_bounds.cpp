#include "sdl/density_bounds.hpp"

#include <cmath>

#include "sdl/errors.hpp"
#include "sdl/hitting_densities.hpp"
#include "sdl/normal_core.hpp"

namespace sdl {

void BoundQuery::validate() const {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidConfig("bound query requires t > 0");
  if (!(C > 0.0) || !std::isfinite(C)) throw InvalidConfig("bound query requires C > 0");
  if (!std::isfinite(x)) throw InvalidConfig("bound query requires a finite x");
}

double origin_lower_bound(double t, double C) {
  BoundQuery{t, C, 0.0}.validate();
  const double y = C * std::sqrt(t);
  return C * mills_gap(y) / y;
}

double origin_upper_bound(double t, double C) {
  BoundQuery{t, C, 0.0}.validate();
  const double y = C * std::sqrt(t);
  return normal_pdf(y) / std::sqrt(t) + C * normal_cdf(y);
}

QuadOptions bound_quadrature_options() { return {1e-10, 1e-8, 10000}; }

BoundEvaluation density_bounds(const BoundQuery& q, InnerConstant inner) {
  q.validate();
  if (q.x == 0.0) return {origin_lower_bound(q.t, q.C), origin_upper_bound(q.t, q.C), 0.0};

  const double horizon = q.t * q.C * q.C;
  const double root = std::sqrt(horizon);
  const double cx = q.C * q.x;
  const double c_in = inner == InnerConstant::UnitBound ? 1.0 : q.C;

  // Substituting s = horizon - u^2 turns the (horizon - s)^(-1/2) endpoint
  // singularity of the origin bounds into the smooth factors
  //   2u * lower_origin(u^2) = 2 [phi(c u) - c u Phi(-c u)],
  //   2u * upper_origin(u^2) = 2 [phi(c u) + c u Phi(c u)].
  const auto elapsed = [&](double u) { return horizon - u * u; };
  const auto lower_integrand = [&](double u) {
    const double s = elapsed(u);
    if (s <= 0.0) return 0.0;
    return q.C * 2.0 * mills_gap(c_in * u) * hitting_density_away({cx, s});
  };
  const auto upper_integrand = [&](double u) {
    const double s = elapsed(u);
    if (s <= 0.0) return 0.0;
    const double cu = c_in * u;
    return q.C * 2.0 * (normal_pdf(cu) + cu * normal_cdf(cu)) * hitting_density_towards({cx, s});
  };

  const QuadOptions opts = bound_quadrature_options();
  const QuadResult lo = integrate_checked(lower_integrand, 0.0, root, opts, "lower density bound");
  const QuadResult up = integrate_checked(upper_integrand, 0.0, root, opts, "upper density bound");
  return {lo.value, up.value, std::max(lo.abs_error, up.abs_error)};
}

}  // namespace sdl
