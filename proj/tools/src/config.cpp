#include "qfd/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace qfd::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

struct Context {
  const std::string& key;
  std::size_t line;

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(key, line, message); }

  double real(const std::string& text) const {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) fail("expected a finite number, got '" + text + "'");
    return v;
  }

  template <class Int>
  Int integer(const std::string& text) const {
    Int v{};
    const auto* first = text.data();
    const auto* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last) fail("expected an integer, got '" + text + "'");
    return v;
  }

  std::vector<double> reals(const std::string& text) const {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(real(item));
    if (out.empty()) fail("expected a comma-separated list of numbers");
    return out;
  }

  std::vector<int> integers(const std::string& text) const {
    std::vector<int> out;
    for (const auto& item : split(text, ',')) out.push_back(integer<int>(item));
    if (out.empty()) fail("expected a comma-separated list of integers");
    return out;
  }
};

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
std::string fmt_list(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

struct Entry {
  std::string key;
  std::string help;
  std::function<void(RunConfig&, const std::string&, const Context&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"dimension", "lattice dimension d (1-3)",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.dimension = ctx.integer<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.dimension); }},
      {"side", "box side L",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.side = ctx.integer<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.side); }},
      {"spins", "spin components per site |S|",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.spins = ctx.integer<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.spins); }},
      {"beta", "inverse temperature",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.beta = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.beta); }},
      {"hopping", "nearest-neighbour hopping amplitude",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.hopping = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.hopping); }},
      {"disorder", "disorder strength (on-site values uniform in [-disorder, disorder])",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.disorder = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.disorder); }},
      {"window", "spectral window: full, or lower,upper",
       [](RunConfig& c, const std::string& v, const Context& ctx) {
         if (v == "full") {
           c.window_full = true;
           return;
         }
         const auto xs = ctx.reals(v);
         if (xs.size() != 2) ctx.fail("expected 'full' or 'lower,upper'");
         c.window_full = false;
         c.window_lower = xs[0];
         c.window_upper = xs[1];
       },
       [](const RunConfig& c) {
         return c.window_full ? std::string("full") : fmt(c.window_lower) + "," + fmt(c.window_upper);
       }},
      {"epsilon", "exponent of the power metric, in (0,1]",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.epsilon = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.epsilon); }},
      {"seed", "master seed of the disorder and time streams",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.seed = ctx.integer<std::uint64_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"samples", "disorder samples per estimate",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.samples = ctx.integer<std::size_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.samples); }},
      {"R_grid", "tail radii start:stop:step",
       [](RunConfig& c, const std::string& v, const Context& ctx) {
         const auto parts = split(v, ':');
         if (parts.size() != 3) ctx.fail("expected start:stop:step");
         c.R_start = ctx.real(parts[0]);
         c.R_stop = ctx.real(parts[1]);
         c.R_step = ctx.real(parts[2]);
       },
       [](const RunConfig& c) { return fmt(c.R_start) + ":" + fmt(c.R_stop) + ":" + fmt(c.R_step); }},
      {"t_span", "largest real time of the z grid",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.t_span = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.t_span); }},
      {"t_step", "real-time step of the z grid",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.t_step = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.t_step); }},
      {"s_levels", "imaginary levels of the z grid as fractions of beta",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.s_levels = ctx.reals(v); },
       [](const RunConfig& c) { return fmt_list(c.s_levels); }},
      {"det_N", "particles per configuration in det-decay",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.det_N = ctx.integer<std::size_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.det_N); }},
      {"pf_N", "half the configuration size in pf-decay",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.pf_N = ctx.integer<std::size_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.pf_N); }},
      {"det_shifts", "translations between the two blocks in det-decay",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.det_shifts = ctx.integers(v); },
       [](const RunConfig& c) { return fmt_list(c.det_shifts); }},
      {"pf_spacings", "spacings of the spread configurations in pf-decay",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.pf_spacings = ctx.integers(v); },
       [](const RunConfig& c) { return fmt_list(c.pf_spacings); }},
      {"pf_clusters", "pair separations of the clustered configurations in pf-decay",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.pf_clusters = ctx.integers(v); },
       [](const RunConfig& c) { return fmt_list(c.pf_clusters); }},
      {"times", "time scheme of the decay experiments: real, boundary or strip",
       [](RunConfig& c, const std::string& v, const Context& ctx) {
         if (v != "real" && v != "boundary" && v != "strip") ctx.fail("expected real, boundary or strip");
         c.times = v;
       },
       [](const RunConfig& c) { return c.times; }},
      {"t_range", "real parts of experiment times are drawn from [-t_range, t_range]",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.t_range = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.t_range); }},
      {"safety_factor", "multiplier applied to the fitted amplitude before bound checks",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.safety_factor = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.safety_factor); }},
      {"hadamard_pairs", "simplex pairs in the convexity check",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.hadamard_pairs = ctx.integer<std::size_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.hadamard_pairs); }},
      {"convexity_tol", "slack of the convexity check",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.convexity_tol = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.convexity_tol); }},
      {"boundary_tol", "slack of the boundary-maximum check",
       [](RunConfig& c, const std::string& v, const Context& ctx) { c.boundary_tol = ctx.real(v); },
       [](const RunConfig& c) { return fmt(c.boundary_tol); }},
  };
  return table;
}

const Entry& find_entry(const std::string& key, std::size_t line) {
  for (const auto& e : entries())
    if (e.key == key) return e;
  throw ConfigError(key, line, "unknown key");
}

std::string location(const std::string& key, std::size_t line) {
  return line == 0 ? "override '" + key + "'" : "line " + std::to_string(line) + ", key '" + key + "'";
}

}  // namespace

ConfigError::ConfigError(const std::string& key, std::size_t line, const std::string& message)
    : std::runtime_error(location(key, line) + ": " + message), key_(key), line_(line) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : entries()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

std::string key_help(const std::string& key) { return find_entry(key, 0).help; }

void set_value(RunConfig& config, const std::string& key, const std::string& value, std::size_t line) {
  const Entry& e = find_entry(key, line);
  const Context ctx{key, line};
  e.set(config, trim(value), ctx);
  // range checks that belong to a single key, reported where the key was set
  auto require = [&](bool ok, const std::string& message) {
    if (!ok) ctx.fail(message);
  };
  if (key == "dimension") require(config.dimension >= 1 && config.dimension <= 3, "must lie in 1..3");
  if (key == "side") require(config.side >= 1, "must be at least 1");
  if (key == "spins") require(config.spins >= 1, "must be at least 1");
  if (key == "beta") require(config.beta > 0.0, "must be positive");
  if (key == "disorder") require(config.disorder >= 0.0, "must be non-negative");
  if (key == "window") require(config.window_full || config.window_lower <= config.window_upper, "lower must not exceed upper");
  if (key == "epsilon") require(config.epsilon > 0.0 && config.epsilon <= 1.0, "epsilon must lie in (0,1]");
  if (key == "samples") require(config.samples >= 2, "must be at least 2");
  if (key == "R_grid") {
    require(config.R_start >= 0.0 && config.R_step > 0.0 && config.R_stop >= config.R_start,
            "need 0 <= start <= stop and step > 0");
  }
  if (key == "t_span") require(config.t_span >= 0.0, "must be non-negative");
  if (key == "t_step") require(config.t_step > 0.0, "must be positive");
  if (key == "s_levels") {
    for (double f : config.s_levels) require(f >= 0.0 && f <= 1.0, "levels are fractions of beta in [0,1]");
  }
  if (key == "det_N") require(config.det_N >= 1 && config.det_N <= 6, "must lie in 1..6");
  if (key == "pf_N") require(config.pf_N >= 1 && config.pf_N <= 6, "must lie in 1..6");
  if (key == "det_shifts" || key == "pf_spacings") {
    for (int g : key == "det_shifts" ? config.det_shifts : config.pf_spacings) require(g >= 1, "entries must be at least 1");
  }
  if (key == "pf_clusters") {
    for (int g : config.pf_clusters) require(g >= 2, "entries must be at least 2");
  }
  if (key == "t_range") require(config.t_range >= 0.0, "must be non-negative");
  if (key == "safety_factor") require(config.safety_factor >= 1.0, "must be at least 1");
  if (key == "hadamard_pairs") require(config.hadamard_pairs >= 1, "must be at least 1");
  if (key == "convexity_tol" || key == "boundary_tol") {
    require((key == "convexity_tol" ? config.convexity_tol : config.boundary_tol) >= 0.0, "must be non-negative");
  }
}

std::string get_value(const RunConfig& config, const std::string& key) { return find_entry(key, 0).get(config); }

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(body, line, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError(key, line, "missing key before '='");
    set_value(config, key, body.substr(eq + 1), line);
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& key, const std::string& message) { throw ConfigError(key, 0, message); };
  double sites = 1.0;
  for (int i = 0; i < c.dimension; ++i) sites *= c.side;
  if (sites * c.spins > 4096.0) fail("side", "one-particle dimension side^dimension * spins must not exceed 4096");
  const double cap = std::pow(c.side / 2.0, c.epsilon);
  if (!(c.R_stop < cap)) fail("R_grid", "stop must lie below (side/2)^epsilon = " + fmt(cap));
  for (int g : c.det_shifts)
    if (static_cast<int>(c.det_N) + g > c.side) fail("det_shifts", "shift " + std::to_string(g) + " does not fit in the box");
  for (int g : c.pf_spacings)
    if (g * (2 * static_cast<int>(c.pf_N) - 1) + 1 > c.side) fail("pf_spacings", "spacing " + std::to_string(g) + " does not fit in the box");
  for (int g : c.pf_clusters)
    if (g * (static_cast<int>(c.pf_N) - 1) + 2 > c.side) fail("pf_clusters", "separation " + std::to_string(g) + " does not fit in the box");
}

RunConfig load_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig c = path.empty() ? RunConfig{} : parse_config_file(path);
  for (const auto& [k, v] : overrides) set_value(c, k, v, 0);
  validate(c);
  return c;
}

std::map<std::string, std::string> echo(const RunConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& e : entries()) out[e.key] = e.get(config);
  return out;
}

DisorderModel RunConfig::model() const {
  DisorderModel m;
  m.box = Box(dimension, side, spins);
  m.hopping = hopping;
  m.strength = disorder;
  m.seed = seed;
  return m;
}

EnergyWindow RunConfig::window() const {
  return window_full ? EnergyWindow::full() : EnergyWindow::interval(window_lower, window_upper);
}

std::vector<double> RunConfig::R_grid() const {
  std::vector<double> out;
  const auto steps = static_cast<std::size_t>(std::floor((R_stop - R_start) / R_step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) out.push_back(R_start + static_cast<double>(i) * R_step);
  return out;
}

ZGrid RunConfig::z_grid() const { return {t_span, t_step, s_levels}; }

TimeScheme RunConfig::time_scheme() const { return parse_time_scheme(times); }

}  // namespace qfd::cli
