#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdl/density_bounds.hpp"
#include "sdl/empirical.hpp"
#include "sdl/errors.hpp"
#include "sdl/holder_constants.hpp"
#include "sdl/path_io.hpp"
#include "sdl/sde_sim.hpp"
#include "sdl/verification.hpp"

namespace sdl::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kPolicy =
    "Monte Carlo means may exceed their ceiling by at most 3 standard errors; density and modulus estimates "
    "carry 99% budgets";
constexpr double kAlphaCap = 0.999;

enum class Kind { Number, OptionalNumber, Integer, Boolean, String, NumberList, Params };

struct KeySpec {
  std::string name;
  Kind kind;
  json fallback;
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<KeySpec> keys;
};

const std::vector<double> kDefaultAlphas{0.3, 0.5, 0.7, 0.9};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"bounds",
       "Density bounds over an x grid (CSV: x,lower,upper,quad_error)",
       {{"t", Kind::Number, 1.0, "time t > 0"},
        {"c", Kind::Number, 1.0, "drift bound C > 0"},
        {"x_grid", Kind::String, "-3:3:0.1", "grid lo:hi:step"},
        {"literal_subscript", Kind::Boolean, false, "keep drift bound C inside the convolution"},
        {"out", Kind::String, "", "CSV file inside the output directory (default: stdout)"}}},
      {"constants",
       "Hölder constants for drift bound 1 and K",
       {{"T", Kind::Number, 1.0, "horizon T > 0"},
        {"K", Kind::Number, 1.0, "drift bound K > 0"},
        {"alpha", Kind::Number, 0.5, "Hölder order in (0, 1); capped at 0.999"},
        {"literal_subscript", Kind::Boolean, false, "also compare the two inner-constant conventions"}}},
      {"simulate",
       "Simulate a path batch",
       {{"control", Kind::String, "bang_bang", "constant | bang_bang | running_max"},
        {"control_params", Kind::Params, json::object(), "control parameters name=value"},
        {"x0", Kind::Number, 0.0, "start point"},
        {"T", Kind::Number, 1.0, "horizon"},
        {"n_steps", Kind::Integer, 1024, "time steps"},
        {"n_paths", Kind::Integer, 1000, "paths"},
        {"seed", Kind::Integer, 0, "master seed (SDL_SEED overrides the config file)"},
        {"format", Kind::String, "sdl1", "sdl1 | csv"},
        {"out", Kind::String, "paths.sdl1", "output file inside the output directory"}}},
      {"estimate",
       "Hölder modulus of the empirical CDF of terminal samples",
       {{"input", Kind::String, "", "SDL1 path batch or CSV sample list"},
        {"T", Kind::OptionalNumber, nullptr, "horizon (default: SDL1 header, else 1)"},
        {"K", Kind::Number, 1.0, "drift bound of the sampled process"},
        {"alphas", Kind::NumberList, kDefaultAlphas, "comma-separated orders in (0, 1)"},
        {"budget_fraction", Kind::Number, 0.1, "statistical budget as a fraction of the constant"},
        {"delta", Kind::Number, 0.01, "DKW confidence parameter"}}},
      {"verify",
       "Error-estimate, density-sandwich and Hölder checks for one control",
       {{"control", Kind::String, "bang_bang", "constant | bang_bang | running_max"},
        {"control_params", Kind::Params, json::object(), "control parameters name=value"},
        {"T", Kind::Number, 1.0, "horizon"},
        {"n_steps", Kind::Integer, 1024, "time steps"},
        {"n_paths", Kind::Integer, 100000, "paths per start point"},
        {"seed", Kind::Integer, 0, "master seed (SDL_SEED overrides the config file)"},
        {"window_sizes", Kind::NumberList, std::vector<double>{0.1, 0.5, 1.0}, "window sizes h, k"},
        {"alphas", Kind::NumberList, kDefaultAlphas, "Hölder orders"},
        {"bound_alpha", Kind::Number, 0.5, "order used by the error-bound tail term"}}},
      {"report",
       "Summarise a JSON-lines report; --check re-runs every record",
       {{"input", Kind::String, "", "report file"}, {"check", Kind::Boolean, false, "re-run and compare"}}},
  };
  return specs;
}

const CommandSpec& spec_for(const std::string& name) {
  for (const auto& c : command_specs())
    if (c.name == name) return c;
  throw InvalidConfig("unknown command '" + name + "'");
}

struct Exec {
  fs::path out_dir = ".";
  unsigned threads = 1;
  bool timing = false;
  std::string report;  // JSON-lines file inside out_dir, appended to
};

std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  std::replace(f.begin(), f.end(), '_', '-');
  return f;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InvalidConfig("cannot parse " + what + " value '" + text + "'");
  return v;
}

json parse_flag_value(const KeySpec& key, const std::vector<std::string>& raw) {
  const std::string what = flag_name(key.name);
  switch (key.kind) {
    case Kind::Number:
    case Kind::OptionalNumber:
      return parse_number(raw.back(), what);
    case Kind::Integer: {
      const double v = parse_number(raw.back(), what);
      if (v < 0.0 || v != std::floor(v) || v > 1.8e19) throw InvalidConfig(what + " must be a non-negative integer");
      return static_cast<std::uint64_t>(v);
    }
    case Kind::Boolean:
      return true;
    case Kind::String:
      return raw.back();
    case Kind::NumberList: {
      json list = json::array();
      for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) list.push_back(parse_number(part, what));
      }
      return list;
    }
    case Kind::Params: {
      json obj = json::object();
      for (const auto& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidConfig(what + " expects name=value, got '" + item + "'");
        obj[item.substr(0, eq)] = parse_number(item.substr(eq + 1), what);
      }
      return obj;
    }
  }
  return nullptr;
}

// Type-checks a config value against its key; returns the normalised value.
json check_value(const KeySpec& key, const json& v) {
  const auto bad = [&](const char* expected) {
    return InvalidConfig("config key '" + key.name + "' must be " + expected);
  };
  switch (key.kind) {
    case Kind::Number:
      if (!v.is_number()) throw bad("a number");
      return v.get<double>();
    case Kind::OptionalNumber:
      if (v.is_null()) return v;
      if (!v.is_number()) throw bad("a number or null");
      return v.get<double>();
    case Kind::Integer:
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw bad("a non-negative integer");
      return v.get<std::uint64_t>();
    case Kind::Boolean:
      if (!v.is_boolean()) throw bad("a boolean");
      return v;
    case Kind::String:
      if (!v.is_string()) throw bad("a string");
      return v;
    case Kind::NumberList: {
      if (!v.is_array()) throw bad("an array of numbers");
      json out = json::array();
      for (const auto& e : v) {
        if (!e.is_number()) throw bad("an array of numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
    case Kind::Params: {
      if (!v.is_object()) throw bad("an object of numbers");
      json out = json::object();
      for (const auto& [name, e] : v.items()) {
        if (!e.is_number()) throw bad("an object of numbers");
        out[name] = e.get<double>();
      }
      return out;
    }
  }
  return v;
}

// Rejects unknown keys and fills defaults; `cfg` holds explicitly set keys.
json complete_config(const CommandSpec& spec, const json& cfg) {
  json full = json::object();
  for (const auto& [name, value] : cfg.items()) {
    const auto it = std::find_if(spec.keys.begin(), spec.keys.end(), [&](const KeySpec& k) { return k.name == name; });
    if (it == spec.keys.end()) throw InvalidConfig("unknown config key '" + name + "' for command " + spec.name);
  }
  for (const auto& key : spec.keys) full[key.name] = check_value(key, cfg.contains(key.name) ? cfg[key.name] : key.fallback);
  return full;
}

fs::path output_path(const Exec& exec, const std::string& name) {
  if (name.empty()) throw InvalidConfig("output file name is empty");
  const fs::path rel(name);
  if (rel.is_absolute()) throw InvalidConfig("output file '" + name + "' must be relative to the output directory");
  fs::create_directories(exec.out_dir);
  const fs::path root = fs::weakly_canonical(exec.out_dir);
  const fs::path target = fs::weakly_canonical(root / rel);
  const fs::path inside = target.lexically_relative(root);
  if (inside.empty() || *inside.begin() == ".." || inside == ".")
    throw InvalidConfig("output file '" + name + "' escapes the output directory");
  return target;
}

void write_file(const fs::path& path, const std::string& bytes, bool append = false) {
  std::ofstream f(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("write to " + path.string() + " failed");
}

std::map<std::string, double> params_of(const json& obj) {
  std::map<std::string, double> out;
  for (const auto& [name, v] : obj.items()) out[name] = v.get<double>();
  return out;
}

json check_to_json(const CheckRecord& c) {
  json j = {{"name", c.name},   {"label", c.label},   {"value", c.value},        {"threshold", c.threshold},
            {"budget", c.budget}, {"pass", c.pass}, {"statistical", c.statistical}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

struct Outcome {
  json results = json::object();
  json checks = json::array();
  std::optional<bool> pass;
  std::optional<std::string> stdout_text;  // primary output printed instead of the record
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(parse_number(part, "--x-grid"));
  if (parts.size() != 3) throw InvalidConfig("x grid must be lo:hi:step");
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidConfig("x grid needs lo <= hi and step > 0");
  const double count = std::floor((hi - lo) / step + 1e-9) + 1.0;
  if (count > 1e6) throw InvalidConfig("x grid has more than 10^6 points");
  std::vector<double> xs;
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    // Rounded to 12 decimals so that, e.g., the 31st point of -3:3:0.1 is 0.
    xs.push_back(std::nearbyint((lo + step * static_cast<double>(i)) * 1e12) / 1e12);
  }
  return xs;
}

Outcome cmd_bounds(const json& cfg, const Exec& exec) {
  const double t = cfg["t"], c = cfg["c"];
  BoundQuery{t, c, 0.0}.validate();
  const std::vector<double> xs = parse_grid(cfg["x_grid"]);
  const InnerConstant inner = cfg["literal_subscript"].get<bool>() ? InnerConstant::Literal : InnerConstant::UnitBound;
  const std::string out_name = cfg["out"];
  const fs::path out_file = out_name.empty() ? fs::path() : output_path(exec, out_name);

  std::string csv = "x,lower,upper,quad_error\n";
  double max_err = 0.0;
  char buf[160];
  for (double x : xs) {
    const BoundEvaluation b = density_bounds({t, c, x}, inner);
    std::snprintf(buf, sizeof buf, "%.15g,%.17g,%.17g,%.17g\n", x, b.lower, b.upper, b.quad_error);
    csv += buf;
    max_err = std::max(max_err, b.quad_error);
  }
  Outcome o;
  o.results = {{"rows", xs.size()},
               {"csv_fnv1a", fnv1a_hex(csv)},
               {"max_quad_error", max_err},
               {"origin_lower", origin_lower_bound(t, c)},
               {"origin_upper", origin_upper_bound(t, c)},
               {"inner_constant", inner == InnerConstant::UnitBound ? "unit_bound" : "literal"},
               {"tolerance", {{"abs", bound_quadrature_options().abs_tol}, {"rel", bound_quadrature_options().rel_tol}}}};
  if (out_name.empty()) {
    o.stdout_text = csv;
    o.results["output"] = "stdout";
  } else {
    write_file(out_file, csv);
    o.results["output"] = out_name;
  }
  return o;
}

json constant_json(const ConstantEvaluation& c) {
  return {{"value", c.value}, {"first_term", c.first_term}, {"integral", c.integral}, {"quad_error", c.quad_error}};
}

Outcome cmd_constants(const json& cfg, const Exec&, std::ostream& err) {
  const double T = cfg["T"], K = cfg["K"];
  double a = cfg["alpha"];
  if (!(T > 0.0) || !(K > 0.0)) throw InvalidConfig("constants need T > 0 and K > 0");
  if (a > kAlphaCap && a <= 1.0) {
    err << "warning: alpha " << a << " capped at " << kAlphaCap
        << " (the constant diverges as alpha -> 1; alpha = 1 is not covered)\n";
    a = kAlphaCap;
  }
  const HolderOrder alpha(a);
  alpha.require_below_one();
  Outcome o;
  const ConstantEvaluation unit = holder_constant_unit(T, alpha);
  const ConstantEvaluation scaled = holder_constant(T, K, alpha);
  o.results = {{"alpha_used", a}, {"unit_bound", constant_json(unit)}, {"drift_bound_K", constant_json(scaled)}};
  if (cfg["literal_subscript"].get<bool>()) {
    // Density bounds at horizon T, drift bound K, under both conventions.
    json rows = json::array();
    for (double x : {0.1, 0.5, 1.0, 2.0}) {
      const BoundEvaluation u = density_bounds({T, K, x}, InnerConstant::UnitBound);
      const BoundEvaluation l = density_bounds({T, K, x}, InnerConstant::Literal);
      rows.push_back({{"x", x},
                      {"unit_bound", {{"lower", u.lower}, {"upper", u.upper}}},
                      {"literal", {{"lower", l.lower}, {"upper", l.upper}}}});
    }
    o.results["inner_constant_comparison"] = {{"origin_upper", origin_upper_bound(T, K)}, {"rows", rows}};
  }
  return o;
}

SimulationConfig sim_config(const json& cfg, const Exec& exec) {
  SimulationConfig sim;
  sim.T = cfg["T"];
  sim.n_steps = cfg["n_steps"];
  sim.n_paths = cfg["n_paths"];
  sim.seed = cfg["seed"];
  sim.threads = exec.threads;
  if (cfg.contains("x0")) sim.x0 = cfg["x0"];
  sim.validate();
  return sim;
}

Outcome cmd_simulate(const json& cfg, const Exec& exec) {
  const Control control = controls::by_name(cfg["control"], params_of(cfg["control_params"]));
  const SimulationConfig sim = sim_config(cfg, exec);
  const std::string format = cfg["format"];
  if (format != "sdl1" && format != "csv") throw InvalidConfig("format must be sdl1 or csv");
  const double values = static_cast<double>(sim.n_paths) * static_cast<double>(sim.n_steps + 1);
  if (values > 1.5e8) throw InvalidConfig("path batch too large for one file (more than 1.5e8 values)");
  const std::string out_name = cfg["out"];
  const fs::path out_file = output_path(exec, out_name);

  const PathBatch batch = simulate(control, sim);
  std::ostringstream buf(std::ios::binary);
  if (format == "sdl1") write_sdl1(buf, batch); else write_csv(buf, batch);
  const std::string bytes = buf.str();
  write_file(out_file, bytes);

  const std::vector<double> term = batch.terminal_values();
  double mean = 0.0;
  for (double v : term) mean += v;
  mean /= static_cast<double>(term.size());
  double ss = 0.0;
  for (double v : term) ss += (v - mean) * (v - mean);
  Outcome o;
  o.results = {{"output", out_name},
               {"format", format},
               {"bytes", bytes.size()},
               {"output_fnv1a", fnv1a_hex(bytes)},
               {"clamp_count", batch.clamp_count},
               {"drift_bound", control.bound},
               {"terminal_mean", mean},
               {"terminal_sd", term.size() > 1 ? std::sqrt(ss / static_cast<double>(term.size() - 1)) : 0.0}};
  return o;
}

Outcome cmd_estimate(const json& cfg, const Exec& exec) {
  const std::string input = cfg["input"];
  if (input.empty()) throw InvalidConfig("estimate needs --input");
  std::vector<double> samples;
  double T = 1.0;
  {
    std::ifstream probe(input, std::ios::binary);
    if (!probe) throw InvalidConfig("cannot open " + input);
    char head[4] = {};
    probe.read(head, 4);
    if (probe.gcount() == 4 && std::string(head, 4) == "SDL1") {
      const PathBatch batch = read_sdl1_file(input);
      T = batch.T;
      samples = batch.terminal_values();
    } else {
      samples = read_samples_file(input);
    }
  }
  if (!cfg["T"].is_null()) T = cfg["T"];
  const double K = cfg["K"];
  if (!(T > 0.0) || !(K > 0.0)) throw InvalidConfig("estimate needs T > 0 and K > 0");
  HolderCheckSettings settings{T, K, cfg["budget_fraction"], cfg["delta"], exec.threads};
  if (!(settings.budget_fraction > 0.0)) throw InvalidConfig("budget_fraction must be positive");
  std::vector<HolderOrder> alphas;
  for (double a : cfg["alphas"]) {
    alphas.emplace_back(a);
    alphas.back().require_below_one();
  }
  if (alphas.empty()) throw InvalidConfig("estimate needs at least one alpha");

  const EmpiricalCdf cdf(std::move(samples));
  Outcome o;
  json estimates = json::array();
  bool all = true;
  for (const HolderOrder& a : alphas) {
    HolderEstimate est;
    const CheckRecord rec = check_holder(cdf, a, settings, &est);
    all = all && rec.pass;
    o.checks.push_back(check_to_json(rec));
    estimates.push_back({{"alpha", est.alpha},
                         {"modulus", est.modulus},
                         {"stat_error", est.stat_error},
                         {"dkw_epsilon", est.dkw_epsilon},
                         {"constant", rec.threshold},
                         {"h_min", est.grid.h_min},
                         {"x_range", {est.grid.x_lo, est.grid.x_hi}},
                         {"argmax", {{"x", est.argmax_x}, {"h", est.argmax_h}, {"k", est.argmax_k}}}});
  }
  o.results = {{"n_samples", cdf.size()}, {"T", T}, {"K", K}, {"estimates", estimates}};
  o.pass = all;
  return o;
}

Outcome cmd_verify(const json& cfg, const Exec& exec) {
  const Control control = controls::by_name(cfg["control"], params_of(cfg["control_params"]));
  VerifySuiteConfig suite;
  suite.sim = sim_config(cfg, exec);
  suite.window_sizes = cfg["window_sizes"].get<std::vector<double>>();
  suite.alphas = cfg["alphas"].get<std::vector<double>>();
  suite.bound_alpha = cfg["bound_alpha"];
  for (double w : suite.window_sizes)
    if (!(w > 0.0)) throw InvalidConfig("window sizes must be positive");
  for (double a : suite.alphas) HolderOrder(a).require_below_one();
  HolderOrder(suite.bound_alpha).require_below_one();

  const std::vector<CheckRecord> recs = run_verify_suite(control, suite);
  Outcome o;
  std::size_t passed = 0;
  for (const auto& r : recs) {
    o.checks.push_back(check_to_json(r));
    if (r.pass) ++passed;
  }
  o.results = {{"checks", recs.size()}, {"passed", passed}, {"failed", recs.size() - passed}};
  o.pass = passed == recs.size();
  return o;
}

json execute(const std::string& command, const json& cfg, const Exec& exec, std::ostream& out, std::ostream& err,
             int& code);

Outcome cmd_report(const json& cfg, const Exec& exec, std::ostream& err) {
  const std::string input = cfg["input"];
  if (input.empty()) throw InvalidConfig("report needs --input");
  std::ifstream in(input);
  if (!in) throw InvalidConfig("cannot open " + input);
  const bool rerun = cfg["check"];
  Outcome o;
  json entries = json::array();
  std::size_t line_no = 0;
  bool all = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception&) {
      throw FormatError("report line " + std::to_string(line_no) + " is not JSON");
    }
    if (!rec.is_object() || !rec.contains("command") || !rec.contains("config") || !rec.contains("config_hash"))
      throw FormatError("report line " + std::to_string(line_no) + " is not a report record");
    json entry = {{"line", line_no}, {"command", rec["command"]}, {"verdict", rec.value("verdict", "n/a")}};
    const bool hash_ok = fnv1a_hex(rec["config"].dump()) == rec["config_hash"];
    entry["config_hash_ok"] = hash_ok;
    all = all && hash_ok;
    if (rerun && rec["command"] != "report") {
      // Re-run in a scratch directory inside the output directory.
      Exec scratch = exec;
      scratch.report.clear();
      scratch.out_dir = exec.out_dir / (".sdl-check-" + rec["config_hash"].get<std::string>());
      std::ostringstream sink;
      int code = 0;
      const json again = execute(rec["command"], rec["config"], scratch, sink, err, code);
      fs::remove_all(scratch.out_dir);
      const bool same = again["results"] == rec["results"] && again["checks"] == rec["checks"];
      entry["reproduced"] = same;
      all = all && same;
    }
    entries.push_back(entry);
  }
  o.results = {{"records", entries.size()}, {"entries", entries}, {"rerun", rerun}};
  o.pass = all;
  return o;
}

json execute(const std::string& command, const json& raw_cfg, const Exec& exec, std::ostream& out, std::ostream& err,
             int& code) {
  const CommandSpec& spec = spec_for(command);
  const json cfg = complete_config(spec, raw_cfg);
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  if (command == "bounds") o = cmd_bounds(cfg, exec);
  else if (command == "constants") o = cmd_constants(cfg, exec, err);
  else if (command == "simulate") o = cmd_simulate(cfg, exec);
  else if (command == "estimate") o = cmd_estimate(cfg, exec);
  else if (command == "verify") o = cmd_verify(cfg, exec);
  else o = cmd_report(cfg, exec, err);

  json record = {{"command", command},
                 {"version", SDL_VERSION},
                 {"config", cfg},
                 {"config_hash", fnv1a_hex(cfg.dump())},
                 {"results", o.results},
                 {"checks", o.checks},
                 {"policy", kPolicy},
                 {"verdict", o.pass ? (*o.pass ? "PASS" : "FAIL") : "n/a"}};
  if (exec.timing)
    record["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string line = record.dump() + "\n";
  if (o.stdout_text) out << *o.stdout_text; else out << line;
  if (!exec.report.empty()) write_file(output_path(exec, exec.report), line, true);
  code = o.pass && !*o.pass ? kExitStatFail : kExitOk;
  return record;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Density bounds, Hölder constants and Monte Carlo checks for diffusions with bounded drift", "sdl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SDL_VERSION);

  struct Bound {
    std::string config;
    std::string out_dir = ".";
    unsigned threads = 0;
    bool timing = false;
    std::string report;
    std::map<std::string, std::vector<std::string>> raw;
    std::map<std::string, CLI::Option*> options;
  };
  std::map<std::string, Bound> bound;
  for (const auto& spec : command_specs()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    Bound& b = bound[spec.name];
    sub->add_option("--config", b.config, "JSON config file; flags override it");
    sub->add_option("--out-dir", b.out_dir, "directory that receives every written file");
    sub->add_option("--threads", b.threads, "worker threads (default: hardware concurrency)");
    sub->add_flag("--timing", b.timing, "add wall-clock seconds to the report record");
    sub->add_option("--report", b.report, "append the report record to this JSON-lines file");
    for (const auto& key : spec.keys) {
      auto& slot = b.raw[key.name];
      CLI::Option* opt = nullptr;
      if (key.kind == Kind::Boolean) {
        opt = sub->add_flag(flag_name(key.name), key.help);
      } else if (key.kind == Kind::Params) {
        opt = sub->add_option("--param", slot, key.help)->allow_extra_args(false);
      } else if (key.kind == Kind::NumberList) {
        opt = sub->add_option(flag_name(key.name), slot, key.help)->allow_extra_args(false);
      } else {
        opt = sub->add_option(flag_name(key.name), slot, key.help)->allow_extra_args(false)->expected(1);
      }
      b.options[key.name] = opt;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << SDL_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (!app.get_subcommands().empty() && e.get_exit_code() == 0) {
      out << app.get_subcommands().front()->help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const CommandSpec& spec = spec_for(command);
  Bound& b = bound[command];

  try {
    Exec exec;
    exec.out_dir = b.out_dir;
    exec.threads = b.threads > 0 ? b.threads : default_threads();
    exec.timing = b.timing;
    exec.report = b.report;

    json cfg = json::object();
    if (!b.config.empty()) {
      std::ifstream f(b.config);
      if (!f) throw InvalidConfig("cannot open config file " + b.config);
      try {
        cfg = json::parse(f);
      } catch (const json::exception& e) {
        throw InvalidConfig("config file " + b.config + " is not valid JSON: " + e.what());
      }
      if (!cfg.is_object()) throw InvalidConfig("config file must hold a JSON object");
    }
    const bool has_seed =
        std::any_of(spec.keys.begin(), spec.keys.end(), [](const KeySpec& k) { return k.name == "seed"; });
    if (const char* env = std::getenv("SDL_SEED"); env && has_seed) {
      const double v = parse_number(env, "SDL_SEED");
      if (v < 0.0 || v != std::floor(v)) throw InvalidConfig("SDL_SEED must be a non-negative integer");
      cfg["seed"] = static_cast<std::uint64_t>(v);
    }
    for (const auto& key : spec.keys) {
      if (b.options[key.name]->count() == 0) continue;
      cfg[key.name] = parse_flag_value(key, b.raw[key.name]);
    }

    int code = kExitOk;
    execute(command, cfg, exec, out, err, code);
    return code;
  } catch (const InvalidConfig& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const QuadratureFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitQuadrature;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace sdl::cli
