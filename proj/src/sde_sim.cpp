#include "sdl/sde_sim.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/normal_distribution.hpp>

#include "detail/parallel.hpp"
#include "sdl/errors.hpp"
#include "sdl/rng.hpp"

namespace sdl {

namespace controls {

namespace {

void check_bound(double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) throw InvalidConfig("control bound must be positive");
}

}  // namespace

Control constant(double c, double bound) {
  check_bound(bound);
  if (!(std::abs(c) <= bound)) throw InvalidConfig("constant control exceeds its bound");
  return {"constant", bound, [c](const PathView&) { return c; }};
}

Control bang_bang(double bound) {
  check_bound(bound);
  return {"bang_bang", bound, [bound](const PathView& v) { return -bound * sgn(v.current()); }};
}

Control running_max(double bound) {
  check_bound(bound);
  return {"running_max", bound,
          [bound](const PathView& v) { return -bound * sgn(v.current() + v.running_max()); }};
}

Control by_name(const std::string& name, const std::map<std::string, double>& params) {
  const auto get = [&](const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  const auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        throw InvalidConfig("control '" + name + "' does not take parameter '" + key + "'");
    }
  };
  const double bound = get("bound", 1.0);
  if (name == "constant") {
    reject_unknown({"c", "bound"});
    return constant(get("c", -1.0), bound);
  }
  if (name == "bang_bang") {
    reject_unknown({"bound"});
    return bang_bang(bound);
  }
  if (name == "running_max") {
    reject_unknown({"bound"});
    return running_max(bound);
  }
  throw InvalidConfig("unknown control '" + name + "'");
}

std::vector<std::string> catalog() { return {"constant", "bang_bang", "running_max"}; }

}  // namespace controls

void SimulationConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidConfig("simulation horizon T must be positive");
  if (n_steps == 0) throw InvalidConfig("n_steps must be positive");
  if (n_paths == 0) throw InvalidConfig("n_paths must be positive");
  if (!std::isfinite(x0)) throw InvalidConfig("x0 must be finite");
}

std::vector<double> PathBatch::terminal_values() const {
  std::vector<double> out(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) out[p] = values[p * (n_steps + 1) + n_steps];
  return out;
}

void PathBatch::validate() const {
  if (!(T > 0.0) || n_steps == 0 || n_paths == 0) throw InvalidConfig("path batch has an empty grid");
  if (values.size() != n_paths * (n_steps + 1)) throw InvalidConfig("path batch payload size mismatch");
}

namespace {

// Runs every path and hands the finished history to `sink(path, history)`.
// Workers own disjoint contiguous path ranges.
template <class Sink>
std::uint64_t run_paths(const Control& control, const SimulationConfig& cfg, Sink&& sink) {
  cfg.validate();
  if (!control.drift) throw InvalidConfig("control has no drift function");
  if (!(control.bound > 0.0)) throw InvalidConfig("control bound must be positive");

  const std::size_t n = cfg.n_steps;
  const double dt = cfg.T / static_cast<double>(n);
  const double sqrt_dt = std::sqrt(dt);
  const double bound = control.bound;
  const unsigned workers = detail::worker_count(cfg.n_paths, cfg.threads);
  std::vector<std::uint64_t> clamps(workers, 0);

  detail::for_each_worker(cfg.n_paths, cfg.threads, [&](unsigned w, std::size_t first, std::size_t last) {
    std::vector<double> history(n + 1);
    boost::random::normal_distribution<double> normal;
    for (std::size_t p = first; p < last; ++p) {
      Xoshiro256pp rng = path_stream(cfg.seed, p);
      double x = cfg.x0;
      double hi = x;
      double lo = x;
      history[0] = x;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = cfg.T * static_cast<double>(i) / static_cast<double>(n);
        double u = control.drift(PathView(t, {history.data(), i + 1}, hi, lo));
        if (!(std::abs(u) <= bound)) {
          u = std::isnan(u) ? 0.0 : std::clamp(u, -bound, bound);
          ++clamps[w];
        }
        x += u * dt + sqrt_dt * normal(rng);
        history[i + 1] = x;
        hi = std::max(hi, x);
        lo = std::min(lo, x);
      }
      sink(p, std::span<const double>(history));
    }
  });

  std::uint64_t total = 0;
  for (auto c : clamps) total += c;
  return total;
}

}  // namespace

PathBatch simulate(const Control& control, const SimulationConfig& config) {
  config.validate();
  PathBatch batch;
  batch.T = config.T;
  batch.n_steps = config.n_steps;
  batch.n_paths = config.n_paths;
  batch.seed = config.seed;
  batch.drift_bound = control.bound;
  batch.values.resize(config.n_paths * (config.n_steps + 1));
  const std::size_t stride = config.n_steps + 1;
  batch.clamp_count = run_paths(control, config, [&](std::size_t p, std::span<const double> h) {
    std::copy(h.begin(), h.end(), batch.values.begin() + static_cast<std::ptrdiff_t>(p * stride));
  });
  return batch;
}

TerminalSample simulate_terminal(const Control& control, const SimulationConfig& config) {
  config.validate();
  TerminalSample out;
  out.values.resize(config.n_paths);
  out.clamp_count =
      run_paths(control, config, [&](std::size_t p, std::span<const double> h) { out.values[p] = h.back(); });
  return out;
}

PathBatch scale_transform(const PathBatch& batch, double K) {
  if (!(K > 0.0) || !std::isfinite(K)) throw InvalidConfig("scale factor K must be positive");
  batch.validate();
  PathBatch out = batch;
  out.T = batch.T * K * K;
  if (batch.drift_bound) out.drift_bound = *batch.drift_bound / K;
  for (double& v : out.values) v *= K;
  return out;
}

}  // namespace sdl
