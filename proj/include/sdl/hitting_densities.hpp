#pragma once

namespace sdl {

/// Offset x != 0 and elapsed time s > 0 of a first-passage query.
struct HittingQuery {
  double x;
  double s;

  void validate() const;
};

/// Density of the first time Brownian motion with unit drift towards the
/// origin, started at x, reaches 0:
///   |x| / sqrt(2 pi s^3) * exp(-(|x| - s)^2 / (2 s)).
/// Evaluated in log space; returns 0 where the value underflows.
double hitting_density_towards(const HittingQuery& q);

/// Same with unit drift away from the origin (defective law with total mass
/// exp(-2|x|)):
///   |x| / sqrt(2 pi s^3) * exp(-(|x| + s)^2 / (2 s)).
double hitting_density_away(const HittingQuery& q);

}  // namespace sdl
