#include "sdl/lamperti.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "detail/parallel.hpp"
#include "sdl/errors.hpp"
#include "sdl/quadrature.hpp"
#include "sdl/rng.hpp"

namespace sdl {

namespace {

constexpr double kDiffStep = 1e-6;

const QuadOptions kTransformQuad{1e-13, 1e-12, 2000};

void require_in_domain(const DiffusionSpec& spec, double x) {
  if (!spec.domain.contains(x))
    throw DomainError("point " + std::to_string(x) + " lies outside the diffusion domain");
}

double sigma_checked(const DiffusionSpec& spec, double t, double x) {
  const double s = spec.sigma(t, x);
  if (!(s > 0.0) || !std::isfinite(s))
    throw DomainError("diffusion coefficient is not positive at x = " + std::to_string(x));
  return s;
}

// \int_a^b dz / sigma(t, z), a and b in the domain.
double inverse_sigma_integral(const DiffusionSpec& spec, double t, double a, double b) {
  if (a == b) return 0.0;
  const auto f = [&](double z) { return 1.0 / sigma_checked(spec, t, z); };
  return integrate_checked(f, a, b, kTransformQuad, "space transform").value;
}

double sigma_dx(const DiffusionSpec& spec, double t, double x) {
  if (spec.sigma_dx) return spec.sigma_dx(t, x);
  return (spec.sigma(t, x + kDiffStep) - spec.sigma(t, x - kDiffStep)) / (2.0 * kDiffStep);
}

double sigma_dt(const DiffusionSpec& spec, double t, double x) {
  if (spec.sigma_dt) return spec.sigma_dt(t, x);
  if (t >= kDiffStep)
    return (spec.sigma(t + kDiffStep, x) - spec.sigma(t - kDiffStep, x)) / (2.0 * kDiffStep);
  return (spec.sigma(t + kDiffStep, x) - spec.sigma(t, x)) / kDiffStep;
}

}  // namespace

void DiffusionSpec::validate() const {
  if (!sigma) throw InvalidConfig("diffusion spec needs a sigma function");
  if (!(domain.lower < domain.upper)) throw InvalidConfig("diffusion domain is empty");
  if (!domain.contains(origin)) throw InvalidConfig("transform origin lies outside the domain");
}

double lamperti_forward(const DiffusionSpec& spec, double x, double t) {
  spec.validate();
  require_in_domain(spec, x);
  return inverse_sigma_integral(spec, t, spec.origin, x);
}

double lamperti_inverse(const DiffusionSpec& spec, double y, double t) {
  spec.validate();
  if (!std::isfinite(y)) throw DomainError("transform target must be finite");

  // Walk away from the origin until F crosses y. Towards an infinite end the
  // step doubles; towards a finite end we halve the remaining gap.
  const double dir = y >= 0.0 ? 1.0 : -1.0;
  const double end = dir > 0.0 ? spec.domain.upper : spec.domain.lower;
  double x_in = spec.origin;  // F(x_in) on the near side of y
  double f_in = 0.0;
  double x_out = x_in;
  double f_out = f_in;
  double step = sigma_checked(spec, t, spec.origin) * std::max(1.0, std::abs(y));
  bool bracketed = dir * (f_in - y) >= 0.0;
  for (int it = 0; !bracketed && it < 400; ++it) {
    x_out = std::isfinite(end) ? x_in + 0.5 * (end - x_in) : x_in + dir * step;
    if (x_out == x_in) break;
    f_out = f_in + inverse_sigma_integral(spec, t, x_in, x_out);
    if (dir * (f_out - y) >= 0.0) {
      bracketed = true;
    } else {
      x_in = x_out;
      f_in = f_out;
      step *= 2.0;
    }
  }
  if (!bracketed) throw DomainError("transform target " + std::to_string(y) + " is outside the range of F");
  if (f_in == y) return x_in;

  double lo = std::min(x_in, x_out);
  double hi = std::max(x_in, x_out);
  // Anchor for incremental integrals; F(anchor) is known exactly.
  double anchor = x_in;
  double f_anchor = f_in;
  double x = x_in + (x_out - x_in) * (y - f_in) / (f_out - f_in);
  for (int it = 0; it < 200; ++it) {
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f_anchor + inverse_sigma_integral(spec, t, anchor, x);
    const double r = fx - y;
    if (r == 0.0) return x;
    if (r < 0.0) lo = x; else hi = x;
    anchor = x;
    f_anchor = fx;
    if (std::abs(r) < 1e-14 * std::max(1.0, std::abs(y)) || hi - lo <= 4e-16 * std::max(1.0, std::abs(x)))
      return x;
    x -= r * sigma_checked(spec, t, x);  // Newton step: F' = 1/sigma
  }
  return x;
}

double transformed_drift(const DiffusionSpec& spec, double t, double x) {
  spec.validate();
  require_in_domain(spec, x);
  const double s = sigma_checked(spec, t, x);
  double u = (spec.drift ? spec.drift(t, x) : 0.0) / s - 0.5 * sigma_dx(spec, t, x);
  if (!spec.time_homogeneous && x != spec.origin) {
    const auto f = [&](double z) {
      const double sz = sigma_checked(spec, t, z);
      return sigma_dt(spec, t, z) / (sz * sz);
    };
    u -= integrate_checked(f, spec.origin, x, kTransformQuad, "transformed drift").value;
  }
  return u;
}

std::function<double(double)> density_pushforward(std::function<double(double)> rho_y, const DiffusionSpec& spec) {
  spec.validate();
  if (!spec.time_homogeneous) throw InvalidConfig("density pushforward needs a time-homogeneous spec");
  return [rho_y = std::move(rho_y), spec](double x) {
    require_in_domain(spec, x);
    return rho_y(lamperti_forward(spec, x)) / sigma_checked(spec, 0.0, x);
  };
}

LampertiTable::LampertiTable(const DiffusionSpec& spec, double x_lo, double x_hi, std::size_t cells)
    : spec_(spec) {
  spec_.validate();
  if (!spec_.time_homogeneous) throw InvalidConfig("Lamperti table needs a time-homogeneous spec");
  if (!(x_lo < x_hi) || cells == 0) throw InvalidConfig("Lamperti table needs x_lo < x_hi and cells > 0");
  require_in_domain(spec_, x_lo);
  require_in_domain(spec_, x_hi);
  x_.resize(cells + 1);
  y_.resize(cells + 1);
  u_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    x_[i] = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(cells);
  y_[0] = lamperti_forward(spec_, x_lo);
  for (std::size_t i = 1; i <= cells; ++i) y_[i] = y_[i - 1] + inverse_sigma_integral(spec_, 0.0, x_[i - 1], x_[i]);
  for (std::size_t i = 0; i <= cells; ++i) {
    u_[i] = transformed_drift(spec_, 0.0, x_[i]);
    max_abs_drift_ = std::max(max_abs_drift_, std::abs(u_[i]));
  }
}

namespace {

double interpolate(const std::vector<double>& ys, const std::vector<double>& vs, double y) {
  const auto it = std::upper_bound(ys.begin(), ys.end(), y);
  const std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - ys.begin()), 1, ys.size() - 1);
  const double w = (y - ys[j - 1]) / (ys[j] - ys[j - 1]);
  return vs[j - 1] + w * (vs[j] - vs[j - 1]);
}

}  // namespace

double LampertiTable::inverse(double y) const {
  if (y < y_.front() || y > y_.back()) return lamperti_inverse(spec_, y);
  return interpolate(y_, x_, y);
}

double LampertiTable::drift_at(double y) const {
  if (y < y_.front() || y > y_.back()) return transformed_drift(spec_, 0.0, lamperti_inverse(spec_, y));
  return interpolate(y_, u_, y);
}

Control transformed_control(const LampertiTable& table) {
  auto shared = std::make_shared<const LampertiTable>(table);
  return {"lamperti", table.max_abs_drift() * (1.0 + 1e-9),
          [shared](const PathView& v) { return shared->drift_at(v.current()); }};
}

std::vector<double> simulate_diffusion_terminal(const DiffusionSpec& spec, const SimulationConfig& config) {
  spec.validate();
  config.validate();
  require_in_domain(spec, config.x0);
  const std::size_t n = config.n_steps;
  const double dt = config.T / static_cast<double>(n);
  const double sqrt_dt = std::sqrt(dt);
  std::vector<double> out(config.n_paths);
  detail::for_each_worker(config.n_paths, config.threads, [&](unsigned, std::size_t first, std::size_t last) {
    boost::random::normal_distribution<double> normal;
    for (std::size_t p = first; p < last; ++p) {
      Xoshiro256pp rng = path_stream(config.seed, p);
      double x = config.x0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = config.T * static_cast<double>(i) / static_cast<double>(n);
        const double b = spec.drift ? spec.drift(t, x) : 0.0;
        x += b * dt + spec.sigma(t, x) * sqrt_dt * normal(rng);
        if (!spec.domain.contains(x))
          throw DomainError("path " + std::to_string(p) + " left the diffusion domain");
      }
      out[p] = x;
    }
  });
  return out;
}

}  // namespace sdl
