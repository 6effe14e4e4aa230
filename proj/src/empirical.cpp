#include "sdl/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/erf.hpp>

#include "detail/parallel.hpp"
#include "sdl/errors.hpp"

namespace sdl {

namespace {

constexpr double kKernelReach = 8.0;  // kernel truncated at 8 bandwidths
constexpr double kConfidence = 0.99;

double two_sided_z(double confidence) { return std::sqrt(2.0) * boost::math::erfc_inv(1.0 - confidence); }

struct Best {
  double ratio = -1.0;
  std::size_t xi = 0;
  double x = 0.0, h = 0.0, k = 0.0;
};

// Grid maximum of |second difference| / (h k^alpha), parallel over x. Ties
// keep the smallest x index so the reported argmax does not depend on the
// number of workers.
template <class Cdf>
Best search_grid(const Cdf& F, double alpha, const HolderGrid& grid, unsigned threads) {
  const std::vector<double> xs = grid.x_values();
  const std::vector<double> scales = grid.scales();
  std::vector<double> k_pow(scales.size());
  for (std::size_t j = 0; j < scales.size(); ++j) k_pow[j] = std::pow(scales[j], alpha);

  const unsigned workers = detail::worker_count(xs.size(), threads);
  std::vector<Best> best(workers);
  detail::for_each_worker(xs.size(), threads, [&](unsigned w, std::size_t first, std::size_t last) {
    Best local;
    for (std::size_t i = first; i < last; ++i) {
      const double x = xs[i];
      const double f0 = F(x);
      for (std::size_t a = 0; a < scales.size(); ++a) {
        const double h = scales[a];
        const double fh = F(x + h);
        for (std::size_t b = a; b < scales.size(); ++b) {
          const double k = scales[b];
          const double r = std::abs(F(x + h + k) - F(x + k) - fh + f0) / (h * k_pow[b]);
          if (r > local.ratio) local = {r, i, x, h, k};
        }
      }
    }
    best[w] = local;
  });
  Best out;
  for (const Best& b : best)
    if (b.ratio > out.ratio) out = b;
  return out;
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.size() < 2) throw InvalidConfig("an empirical CDF needs at least two samples");
  for (double v : sorted_)
    if (!std::isfinite(v)) throw InvalidConfig("samples must be finite");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidConfig("quantile level must lie in (0, 1]");
  const auto n = static_cast<double>(sorted_.size());
  const auto idx = static_cast<std::size_t>(std::ceil(p * n));
  return sorted_[std::clamp<std::size_t>(idx, 1, sorted_.size()) - 1];
}

double window_second_difference(const CdfFunction& F, double x, const WindowPair& w) {
  return F(x + w.h() + w.k()) - F(x + w.k()) - F(x + w.h()) + F(x);
}

double dkw_epsilon(std::size_t n, double delta) {
  if (n == 0) throw InvalidConfig("DKW bound needs at least one sample");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidConfig("DKW confidence parameter must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

void HolderGrid::validate() const {
  if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi))
    throw InvalidConfig("Hölder grid needs a finite x range with x_lo < x_hi");
  if (x_points < 2) throw InvalidConfig("Hölder grid needs at least two x points");
  if (!(h_min > 0.0) || !(h_min <= h_max) || !std::isfinite(h_max))
    throw InvalidConfig("Hölder grid needs 0 < h_min <= h_max");
  if (per_octave == 0) throw InvalidConfig("Hölder grid needs per_octave >= 1");
}

std::vector<double> HolderGrid::x_values() const {
  validate();
  std::vector<double> xs(x_points);
  const double span = x_hi - x_lo;
  for (std::size_t i = 0; i < x_points; ++i)
    xs[i] = x_lo + span * static_cast<double>(i) / static_cast<double>(x_points - 1);
  return xs;
}

std::vector<double> HolderGrid::scales() const {
  validate();
  std::vector<double> out;
  for (unsigned j = 0;; ++j) {
    const double s = h_min * std::exp2(static_cast<double>(j) / static_cast<double>(per_octave));
    if (s > h_max * (1.0 + 1e-12)) break;
    out.push_back(s);
  }
  return out;
}

HolderEstimate holder_modulus(const CdfFunction& F, HolderOrder alpha, const HolderGrid& grid, double cap,
                              unsigned threads) {
  grid.validate();
  const Best b = search_grid(F, alpha.value(), grid, threads);
  HolderEstimate est;
  est.alpha = alpha.value();
  est.modulus = b.ratio;
  est.argmax_x = b.x;
  est.argmax_h = b.h;
  est.argmax_k = b.k;
  est.exceeds_cap = est.modulus > cap;
  est.grid = grid;
  return est;
}

double holder_scale_floor(std::size_t n, HolderOrder alpha, double budget, double delta) {
  if (!(budget > 0.0)) throw InvalidConfig("statistical budget must be positive");
  return std::pow(4.0 * dkw_epsilon(n, delta) / budget, 1.0 / (1.0 + alpha.value()));
}

HolderEstimate holder_modulus(const EmpiricalCdf& F, HolderOrder alpha, const EmpiricalHolderOptions& o) {
  const double floor = holder_scale_floor(F.size(), alpha, o.budget, o.delta);
  HolderGrid grid;
  grid.x_lo = F.quantile(0.001) - 1.0;
  grid.x_hi = F.quantile(0.999) + 1.0;
  grid.x_points = o.x_points;
  grid.per_octave = o.per_octave;
  grid.h_max = grid.x_hi - grid.x_lo;
  grid.h_min = std::max(o.h_min, floor);
  if (grid.h_min > grid.h_max)
    throw InvalidConfig("statistical budget unattainable: window floor exceeds the sample range");

  const Best b = search_grid(F, alpha.value(), grid, o.threads);
  HolderEstimate est;
  est.alpha = alpha.value();
  est.modulus = b.ratio;
  est.n_samples = F.size();
  est.delta = o.delta;
  est.dkw_epsilon = dkw_epsilon(F.size(), o.delta);
  // Each of the four CDF values is off by at most eps, and the smallest
  // denominator on the grid is h_min^(1+alpha).
  est.stat_error = 4.0 * est.dkw_epsilon / (grid.h_min * std::pow(grid.h_min, alpha.value()));
  est.argmax_x = b.x;
  est.argmax_h = b.h;
  est.argmax_k = b.k;
  est.exceeds_cap = est.modulus - est.stat_error > o.cap;
  est.grid = grid;
  return est;
}

double silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw InvalidConfig("bandwidth selection needs at least two samples");
  std::vector<double> v(samples.begin(), samples.end());
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::sort(v.begin(), v.end());
  const auto at = [&](double p) {
    const double pos = p * (n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  const double iqr = at(0.75) - at(0.25);
  double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  if (!(spread > 0.0)) throw InvalidConfig("bandwidth selection needs samples with positive spread");
  return 0.9 * spread * std::pow(n, -0.2);
}

double curvature_proxy(double t, double C) {
  const double r = C + 1.0 / std::sqrt(t);
  return origin_upper_bound(t, C) * r * r;
}

KernelDensity::KernelDensity(std::vector<double> samples, double bandwidth)
    : sorted_(std::move(samples)), bandwidth_(bandwidth) {
  if (sorted_.empty()) throw InvalidConfig("kernel density estimate needs samples");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw InvalidConfig("bandwidth must be positive");
  std::sort(sorted_.begin(), sorted_.end());
}

KernelDensity::Moments KernelDensity::kernel_moments(double x, double bw) const {
  const auto first = std::lower_bound(sorted_.begin(), sorted_.end(), x - kKernelReach * bw);
  const auto last = std::upper_bound(first, sorted_.end(), x + kKernelReach * bw);
  double s1 = 0.0;
  double s2 = 0.0;
  for (auto it = first; it != last; ++it) {
    const double kv = normal_pdf((x - *it) / bw) / bw;
    s1 += kv;
    s2 += kv * kv;
  }
  const double n = static_cast<double>(sorted_.size());
  return {s1 / n, s2 / n};
}

double KernelDensity::operator()(double x) const { return kernel_moments(x, bandwidth_).mean; }

KdePoint KernelDensity::evaluate(double x, double curvature) const {
  const Moments m = kernel_moments(x, bandwidth_);
  const double n = static_cast<double>(sorted_.size());
  const double se = std::sqrt(std::max(0.0, m.mean_sq - m.mean * m.mean) / n);
  const double bias = 0.5 * bandwidth_ * bandwidth_ * std::abs(curvature);
  return {m.mean, se, bias, two_sided_z(kConfidence) * se + bias};
}

double KernelDensity::pilot_curvature(double lo, double hi, std::size_t points) const {
  if (!(lo < hi) || points < 2) throw InvalidConfig("pilot curvature needs lo < hi and two points");
  const double bw = 2.0 * bandwidth_;
  const double n = static_cast<double>(sorted_.size());
  double best = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto first = std::lower_bound(sorted_.begin(), sorted_.end(), x - kKernelReach * bw);
    const auto last = std::upper_bound(first, sorted_.end(), x + kKernelReach * bw);
    double s = 0.0;
    for (auto it = first; it != last; ++it) {
      const double u = (x - *it) / bw;
      s += (u * u - 1.0) * normal_pdf(u);
    }
    best = std::max(best, std::abs(s / (n * bw * bw * bw)));
  }
  return best;
}

namespace {

template <class Estimate>
SandwichReport sandwich_impl(double t, double C, std::span<const double> xs, InnerConstant inner,
                             Estimate&& estimate) {
  SandwichReport rep;
  rep.t = t;
  rep.C = C;
  rep.points.reserve(xs.size());
  for (double x : xs) {
    const BoundEvaluation b = density_bounds({t, C, x}, inner);
    const auto [value, budget] = estimate(x);
    const bool inside = b.lower - budget <= value && value <= b.upper + budget;
    rep.points.push_back({x, value, b.lower, b.upper, budget, inside});
    if (!inside) ++rep.violations;
    rep.max_quad_error = std::max(rep.max_quad_error, b.quad_error);
  }
  return rep;
}

}  // namespace

SandwichReport sandwich_check(const KernelDensity& kde, double t, double C, std::span<const double> xs,
                              double curvature, InnerConstant inner) {
  return sandwich_impl(t, C, xs, inner, [&](double x) {
    const KdePoint p = kde.evaluate(x, curvature);
    return std::pair{p.density, p.budget};
  });
}

SandwichReport sandwich_check(const std::function<double(double)>& density, double t, double C,
                              std::span<const double> xs, InnerConstant inner) {
  return sandwich_impl(t, C, xs, inner, [&](double x) { return std::pair{density(x), 0.0}; });
}

double ks_statistic(std::span<const double> samples, const CdfFunction& cdf) {
  if (samples.empty()) throw InvalidConfig("KS statistic needs samples");
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = cdf(v[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace sdl
