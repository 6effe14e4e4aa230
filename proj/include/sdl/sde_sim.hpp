#pragma once

// Monte Carlo simulation of X(t) = x0 + \int_0^t u(s) ds + W(t) on a uniform
// grid, where u is a bounded drift that may depend on the whole path history.
//
// Scheme: X_{i+1} = X_i + u(t_i, X_0..X_i) dt + sqrt(dt) xi_i with xi_i iid
// standard normal. The drift is frozen on each step. Path p draws its
// normals from path_stream(seed, p), so results do not depend on the
// number of worker threads.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sdl {

/// Read-only view of a path prefix handed to a control at grid time t_i.
class PathView {
 public:
  PathView(double time, std::span<const double> history, double running_max, double running_min)
      : time_(time), history_(history), running_max_(running_max), running_min_(running_min) {}

  double time() const { return time_; }
  std::size_t step() const { return history_.size() - 1; }
  double current() const { return history_.back(); }
  /// X_0, ..., X_i.
  std::span<const double> history() const { return history_; }
  double running_max() const { return running_max_; }
  double running_min() const { return running_min_; }

 private:
  double time_;
  std::span<const double> history_;
  double running_max_;
  double running_min_;
};

/// An adapted drift with a declared uniform bound. `drift` must be
/// reentrant: it is called concurrently from several workers. Values outside
/// [-bound, bound] are clamped and counted.
struct Control {
  std::string name;
  double bound = 1.0;
  std::function<double(const PathView&)> drift;
};

/// sgn(x) = 1 for x > 0 and -1 for x <= 0.
inline double sgn(double x) { return x > 0.0 ? 1.0 : -1.0; }

namespace controls {

/// u = c, |c| <= bound.
Control constant(double c, double bound = 1.0);
/// u = -bound * sgn(X(t)).
Control bang_bang(double bound = 1.0);
/// u = -bound * sgn(X(t) + max_{s <= t} X(s)); path dependent.
Control running_max(double bound = 1.0);

/// Build a catalog control by name: "constant" (param "c"), "bang_bang",
/// "running_max"; every control accepts param "bound" (default 1).
Control by_name(const std::string& name, const std::map<std::string, double>& params = {});

/// Names accepted by by_name.
std::vector<std::string> catalog();

}  // namespace controls

struct SimulationConfig {
  double x0 = 0.0;
  double T = 1.0;
  std::size_t n_steps = 1024;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

/// Simulated paths on the grid t_i = i T / n_steps, stored row-major
/// (n_paths rows of n_steps + 1 values).
struct PathBatch {
  double T = 0.0;
  std::size_t n_steps = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::optional<double> drift_bound;
  std::uint64_t clamp_count = 0;
  std::vector<double> values;

  double dt() const { return T / static_cast<double>(n_steps); }
  double time(std::size_t i) const { return T * static_cast<double>(i) / static_cast<double>(n_steps); }
  std::span<const double> path(std::size_t p) const {
    return {values.data() + p * (n_steps + 1), n_steps + 1};
  }
  std::vector<double> terminal_values() const;
  void validate() const;
};

struct TerminalSample {
  std::vector<double> values;  // X(T) per path, in path order
  std::uint64_t clamp_count = 0;
};

PathBatch simulate(const Control& control, const SimulationConfig& config);

/// Same paths as simulate(), keeping only X(T).
TerminalSample simulate_terminal(const Control& control, const SimulationConfig& config);

/// Y(t) = K X(t / K^2) on the grid t_i K^2: values scaled by K, horizon by
/// K^2, drift bound divided by K.
PathBatch scale_transform(const PathBatch& batch, double K);

}  // namespace sdl
