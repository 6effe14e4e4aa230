#include "sdl/normal_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "sdl/errors.hpp"

namespace sdl {

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_interval_mass(double lo, double hi) {
  if (hi <= lo) return 0.0;
  // Both endpoints in the upper tail: difference of survival functions.
  if (lo > 0.0) return normal_cdf(-lo) - normal_cdf(-hi);
  return normal_cdf(hi) - normal_cdf(lo);
}

double mills_gap(double y) {
  if (y < 5.0) return normal_pdf(y) - y * normal_cdf(-y);
  // Laplace continued fraction R(y) = Phi(-y)/phi(y) = 1/(y + 1/(y + 2/(y + ...))).
  // With c = 1/(y + 2/(y + ...)) we have 1 - y R(y) = c / (y + c).
  double tail = 0.0;
  for (int n = 80; n >= 2; --n) tail = n / (y + tail);
  const double c = 1.0 / (y + tail);
  return normal_pdf(y) * c / (y + c);
}

void NormalParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0))
    throw InvalidConfig("normal parameters require finite mu and sigma > 0");
}

WindowPair::WindowPair(double h, double k) : h_(h), k_(k) {
  if (!std::isfinite(h) || !std::isfinite(k) || !(h > 0.0) || !(h <= k))
    throw InvalidConfig("window requires 0 < h <= k, got h=" + std::to_string(h) +
                        " k=" + std::to_string(k));
}

HolderOrder::HolderOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw InvalidConfig("Hölder order must lie in (0, 1], got " + std::to_string(alpha));
}

void HolderOrder::require_below_one() const {
  if (!(alpha_ < 1.0)) throw InvalidConfig("Hölder order must be strictly below 1");
}

double holder_interpolation(double oscillation, double lipschitz, HolderOrder alpha) {
  if (oscillation < 0.0 || lipschitz < 0.0)
    throw InvalidConfig("oscillation and Lipschitz constant must be nonnegative");
  if (lipschitz == 0.0) return 0.0;
  const double a = alpha.value();
  return std::pow(oscillation, 1.0 - a) * std::pow(lipschitz, a);
}

double phi_holder_constant(HolderOrder alpha) {
  return 1.0 / std::sqrt(2.0 * std::numbers::pi * std::exp(alpha.value()));
}

double gaussian_product_integral(double sigma, double y, double z) {
  if (!(sigma > 0.0)) throw InvalidConfig("sigma must be positive");
  const double scale = std::sqrt(2.0 * sigma * sigma);
  return normal_pdf((y - z) / scale) / scale;
}

double window_mass_difference(double x, const NormalParams& p, const WindowPair& w) {
  p.validate();
  const double h = w.h();
  const double k = w.k();
  const double shift = x + p.mu;
  const auto mass = [&](double l, double r) {
    return normal_interval_mass((l - shift) / p.sigma, (r - shift) / p.sigma);
  };
  return mass(k, k + h) - mass(0.0, h);
}

namespace {

// Standardised arguments of the four Gaussian terms of N', with their signs.
struct SlopeTerms {
  std::array<double, 4> arg;
  std::array<double, 4> sign;
};

SlopeTerms slope_terms(double x, const NormalParams& p, const WindowPair& w) {
  const double u = (x + p.mu) / p.sigma;
  const double hs = w.h() / p.sigma;
  const double ks = w.k() / p.sigma;
  return {{u, u - hs, u - ks, u - hs - ks}, {-1.0, 1.0, 1.0, -1.0}};
}

}  // namespace

double window_mass_slope(double x, const NormalParams& p, const WindowPair& w) {
  p.validate();
  const auto t = slope_terms(x, p, w);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += t.sign[i] * normal_pdf(t.arg[i]);
  return sum / p.sigma;
}

double window_mass_curvature(double x, const NormalParams& p, const WindowPair& w) {
  p.validate();
  const auto t = slope_terms(x, p, w);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += t.sign[i] * (-t.arg[i]) * normal_pdf(t.arg[i]);
  return sum / (p.sigma * p.sigma);
}

int window_mass_slope_sign(double x, const NormalParams& p, const WindowPair& w) {
  p.validate();
  const auto t = slope_terms(x, p, w);
  std::array<double, 4> expo{};
  for (int i = 0; i < 4; ++i) expo[i] = -0.5 * t.arg[i] * t.arg[i];
  const double top = *std::max_element(expo.begin(), expo.end());
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += t.sign[i] * std::exp(expo[i] - top);
  return (sum > 0.0) - (sum < 0.0);
}

double window_mass_bound(const WindowPair& w, HolderOrder alpha, double sigma) {
  if (!(sigma > 0.0)) throw InvalidConfig("sigma must be positive");
  const double a = alpha.value();
  return w.h() * std::pow(w.k(), a) * phi_holder_constant(alpha) / std::pow(sigma, 1.0 + a);
}

namespace {

// Bisection for a sign change from `neg_side` (slope < 0) to `pos_side`
// (slope > 0); the endpoints may be in either order.
double bisect_slope(double neg_side, double pos_side, const NormalParams& p,
                    const WindowPair& w) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (neg_side + pos_side);
    if (mid == neg_side || mid == pos_side) break;
    const int s = window_mass_slope_sign(mid, p, w);
    if (s == 0) return mid;
    (s < 0 ? neg_side : pos_side) = mid;
  }
  // Return whichever endpoint has the smaller |N'|.
  const double fn = std::abs(window_mass_slope(neg_side, p, w));
  const double fp = std::abs(window_mass_slope(pos_side, p, w));
  return fn <= fp ? neg_side : pos_side;
}

}  // namespace

SlopeZeros find_slope_zeros(const NormalParams& p, const WindowPair& w) {
  p.validate();
  const double h = w.h();
  const double k = w.k();
  const double centre = 0.5 * (h + k) - p.mu;
  if (window_mass_slope_sign(centre, p, w) <= 0)
    throw BracketFailure("N' is not positive at the window centre");

  const double max_widening = 50.0 * p.sigma;
  auto outer = [&](double base, double direction) {
    for (double delta = 0.0;; delta = (delta == 0.0 ? p.sigma : 2.0 * delta)) {
      if (delta > max_widening) break;
      const double x = base + direction * delta;
      if (window_mass_slope_sign(x, p, w) < 0) return x;
    }
    throw BracketFailure("no sign change of N' within 50 sigma of the analytic bracket");
  };

  const double left = outer(-p.mu - p.sigma, -1.0);
  const double right = outer(h + k - p.mu + p.sigma, 1.0);
  return {bisect_slope(left, centre, p, w), bisect_slope(right, centre, p, w)};
}

}  // namespace sdl
