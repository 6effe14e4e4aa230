#pragma once

// Scalar functions of the standard normal law, Hölder interpolation and the
// window function
//
//   N(x) = P(Z + x in [k, k+h]) - P(Z + x in [0, h]),   Z ~ Normal(mu, sigma^2)
//
// together with its derivative, a uniform bound on |N| and the two zeros of N'.
//
// Sign convention shared by every caller:
//   P(Z + x in [l, r]) = Phi((r - x - mu) / sigma) - Phi((l - x - mu) / sigma).

#include <numbers>

namespace sdl {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal distribution function, via erfc (absolute error below 1e-14).
double normal_cdf(double x);

/// P(lo <= Z <= hi) for standard normal Z, evaluated on the tail that keeps
/// the most significant digits.
double normal_interval_mass(double lo, double hi);

/// phi(y) - y * Phi(-y) for y >= 0, without cancellation for large y.
/// Strictly positive; it is the Mills-ratio gap that keeps lower density
/// bounds away from zero.
double mills_gap(double y);

struct NormalParams {
  double mu = 0.0;
  double sigma = 1.0;

  /// Throws InvalidConfig unless sigma > 0 and both fields are finite.
  void validate() const;
};

/// Window geometry 0 < h <= k of the test functional
/// 1{x in [k, k+h]} - 1{x in [0, h]}.
class WindowPair {
 public:
  WindowPair(double h, double k);

  double h() const { return h_; }
  double k() const { return k_; }

 private:
  double h_;
  double k_;
};

/// Hölder order in (0, 1].
class HolderOrder {
 public:
  explicit HolderOrder(double alpha);

  double value() const { return alpha_; }

  /// Throws InvalidConfig when alpha == 1; used by the constants that blow
  /// up at the Lipschitz endpoint.
  void require_below_one() const;

 private:
  double alpha_;
};

/// B^(1-alpha) * L^alpha: the Hölder constant of order alpha of a function
/// with oscillation B and Lipschitz constant L. Returns 0 when L == 0.
double holder_interpolation(double oscillation, double lipschitz, HolderOrder alpha);

/// 1 / sqrt(2 pi e^alpha): Hölder constant of phi of order alpha.
double phi_holder_constant(HolderOrder alpha);

/// (1/sigma^2) \int phi((x-y)/sigma) phi((x-z)/sigma) dx in closed form.
double gaussian_product_integral(double sigma, double y, double z);

/// N(x) for Z ~ Normal(mu, sigma^2).
double window_mass_difference(double x, const NormalParams& params, const WindowPair& window);

/// N'(x) in closed form:
///   (1/sigma) [ -phi(u) + phi(u - h/sigma) + phi(u - k/sigma) - phi(u - (h+k)/sigma) ],
///   u = (x + mu) / sigma.
double window_mass_slope(double x, const NormalParams& params, const WindowPair& window);

/// N''(x) in closed form (same affine change of variables as the slope).
double window_mass_curvature(double x, const NormalParams& params, const WindowPair& window);

/// Sign of N'(x) (-1, 0 or +1), computed relative to the largest of the four
/// Gaussian terms so that it stays meaningful when every term underflows.
int window_mass_slope_sign(double x, const NormalParams& params, const WindowPair& window);

/// Uniform bound h k^alpha / (sqrt(2 pi e^alpha) sigma^(1+alpha)) on |N|.
double window_mass_bound(const WindowPair& window, HolderOrder alpha, double sigma);

struct SlopeZeros {
  double lower;  // a: N' < 0 left of a
  double upper;  // b: N' < 0 right of b, N' > 0 on (a, b)
};

/// The two zeros of N', by bisection. The left zero is bracketed by
/// [-mu - sigma - delta, (h+k)/2 - mu] and the right one by
/// [(h+k)/2 - mu, h + k - mu + sigma + delta]; delta widens up to 50 sigma
/// before BracketFailure is thrown.
SlopeZeros find_slope_zeros(const NormalParams& params, const WindowPair& window);

}  // namespace sdl
