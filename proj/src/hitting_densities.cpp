#include "sdl/hitting_densities.hpp"

#include <cmath>
#include <numbers>

#include "sdl/errors.hpp"

namespace sdl {

namespace {

// Below this the exponential is a subnormal or zero.
constexpr double kLogUnderflow = -708.0;

double log_space_density(double ax, double s, double shifted) {
  const double log_value = std::log(ax) - 0.5 * std::log(2.0 * std::numbers::pi) - 1.5 * std::log(s) -
                           shifted * shifted / (2.0 * s);
  return log_value < kLogUnderflow ? 0.0 : std::exp(log_value);
}

}  // namespace

void HittingQuery::validate() const {
  if (!std::isfinite(x) || x == 0.0) throw InvalidConfig("hitting query requires a finite x != 0");
  if (!(s > 0.0)) throw InvalidConfig("hitting query requires s > 0");
}

double hitting_density_towards(const HittingQuery& q) {
  q.validate();
  const double ax = std::abs(q.x);
  if (std::isinf(q.s)) return 0.0;
  return log_space_density(ax, q.s, ax - q.s);
}

double hitting_density_away(const HittingQuery& q) {
  q.validate();
  const double ax = std::abs(q.x);
  if (std::isinf(q.s)) return 0.0;
  return log_space_density(ax, q.s, ax + q.s);
}

}  // namespace sdl
