#include "rescatter/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "rescatter/errors.hpp"

namespace rescatter {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_multiple(double value, double unit) {
  const double r = value / unit;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r));
}

struct Invalid {
  std::string key;
  std::string message;
};

std::optional<Invalid> find_violation(const RunConfig& c) {
  const auto& ph = c.physical;
  if (!(ph.electron_mass > 0.0)) return Invalid{"electron_mass", "must be positive"};
  if (!(ph.core_mass > 0.0)) return Invalid{"core_mass", "must be positive"};
  if (!(ph.target_bound_energy < 0.0)) return Invalid{"bound_energy", "must be negative"};
  if (!(c.com_sigma > 0.0)) return Invalid{"com_sigma", "must be positive"};
  if (!(c.pulse.amplitude >= 0.0)) return Invalid{"amplitude", "must be non-negative"};
  if (!(c.pulse.carrier_period > 0.0)) return Invalid{"period", "must be positive"};
  if (c.pulse.cycles < 1) return Invalid{"cycles", "must be at least 1"};
  if (!std::isfinite(c.pulse.cep)) return Invalid{"cep", "must be finite"};
  if (!(c.dx > 0.0)) return Invalid{"dx", "must be positive"};
  if (!(c.dt > 0.0)) return Invalid{"dt", "must be positive"};
  if (!(c.box_half_width > c.dx)) return Invalid{"box", "must exceed dx"};
  if (!is_multiple(c.box_half_width, c.dx)) return Invalid{"box", "must be a multiple of dx"};
  if (!(c.t_end >= 0.0)) return Invalid{"t_end", "must be non-negative"};
  if (!is_multiple(c.end_time(), c.dt)) return Invalid{"t_end", "must be a multiple of dt"};
  if (!(c.entropy_cadence > 0.0) || !is_multiple(c.entropy_cadence, c.dt)) {
    return Invalid{"entropy_cadence", "must be a positive multiple of dt"};
  }

  const auto& ge = c.entropy_grids.electron_axis;
  const auto& gc = c.entropy_grids.core_axis;
  if (!(ge.spacing > 0.0)) return Invalid{"electron_spacing", "must be positive"};
  if (!(gc.spacing > 0.0)) return Invalid{"core_spacing", "must be positive"};
  if (!is_multiple(ge.spacing, c.dx)) {
    return Invalid{"electron_spacing", "must be an integer multiple of dx"};
  }
  if (!is_multiple(gc.spacing, c.dx)) {
    return Invalid{"core_spacing", "must be an integer multiple of dx"};
  }
  if (ge.count < 3) return Invalid{"electron_half_width", "axis needs at least 3 points"};
  if (gc.count < 3) return Invalid{"core_half_width", "axis needs at least 3 points"};
  if (!(c.max_capture_deficit >= 0.0 && c.max_capture_deficit <= 1.0)) {
    return Invalid{"max_capture_deficit", "must lie in [0, 1]"};
  }

  const double tau = c.pulse.duration();
  for (double t : c.snapshot_times) {
    if (t < 0.0 || t > tau) return Invalid{"snapshot_times", "snapshot times must lie in [0, tau]"};
    if (t > c.end_time()) return Invalid{"snapshot_times", "snapshot time after the end of the run"};
    if (!is_multiple(t, c.dt)) return Invalid{"snapshot_times", "snapshot times must be multiples of dt"};
  }

  const auto& w = c.wigner_window;
  if (w.count == 0) return Invalid{"wigner_q_step", "empty window"};
  if (w.count > 1 && !(w.max > w.min)) return Invalid{"wigner_q_max", "must exceed wigner_q_min"};
  if (w.min < -c.box_half_width || w.max > c.box_half_width) {
    return Invalid{"wigner_q_min", "window must lie inside the box"};
  }
  if (!is_multiple(w.min, c.dx)) return Invalid{"wigner_q_min", "must be a multiple of dx"};
  if (w.count > 1 && !is_multiple(w.step(), c.dx)) {
    return Invalid{"wigner_q_step", "must be a multiple of dx"};
  }
  if (c.wigner_half_points == 0) return Invalid{"wigner_half_points", "must be positive"};

  if (!(c.leak_threshold > 0.0 && c.leak_threshold <= 1.0)) {
    return Invalid{"leak_threshold", "must lie in (0, 1]"};
  }
  if (!(c.leak_margin >= 0.0 && c.leak_margin < c.box_half_width)) {
    return Invalid{"leak_margin", "must lie in [0, box)"};
  }
  if (c.threads < 1) return Invalid{"threads", "must be at least 1"};

  try {
    c.entropy_grids.check_commensurate(c.relative_grid());
  } catch (const ConfigError& e) {
    return Invalid{"electron_spacing", e.what()};
  }
  return std::nullopt;
}

}  // namespace

double parse_angle(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty angle");
  double factor = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    factor = pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty() || s == "+") return factor;
    if (s == "-") return -factor;
  }
  const auto v = to_double(s);
  if (!v) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return *v * factor;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start));
    if (!item.empty()) out.push_back(parse_angle(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void RunConfig::validate() const {
  if (auto bad = find_violation(*this)) {
    throw ConfigError("config key '" + bad->key + "': " + bad->message);
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  double electron_mass = cfg.physical.electron_mass;
  double core_mass = cfg.physical.core_mass;
  double bound_energy = cfg.physical.target_bound_energy;
  double e_half = 600.0, e_spacing = 0.25, c_half = 6.0, c_spacing = 0.25;
  double q_min = cfg.wigner_window.min, q_max = cfg.wigner_window.max, q_step = 0.5;

  using Setter = std::function<void(std::string_view)>;
  auto number = [](double& target) -> Setter {
    return [&target](std::string_view v) {
      const auto d = to_double(v);
      if (!d) throw std::invalid_argument("expected a number");
      target = *d;
    };
  };
  auto integer = [](auto& target) -> Setter {
    return [&target](std::string_view v) {
      const auto d = to_double(v);
      if (!d || *d != std::floor(*d) || *d < 0.0) {
        throw std::invalid_argument("expected a non-negative integer");
      }
      target = static_cast<std::remove_reference_t<decltype(target)>>(*d);
    };
  };

  const std::map<std::string, Setter, std::less<>> setters = {
      {"electron_mass", number(electron_mass)},
      {"core_mass", number(core_mass)},
      {"bound_energy", number(bound_energy)},
      {"com_sigma", number(cfg.com_sigma)},
      {"amplitude", number(cfg.pulse.amplitude)},
      {"period", number(cfg.pulse.carrier_period)},
      {"cycles", integer(cfg.pulse.cycles)},
      {"cep", [&](std::string_view v) { cfg.pulse.cep = parse_angle(v); }},
      {"box", number(cfg.box_half_width)},
      {"dx", number(cfg.dx)},
      {"dt", number(cfg.dt)},
      {"t_end", number(cfg.t_end)},
      {"entropy_cadence", number(cfg.entropy_cadence)},
      {"electron_half_width", number(e_half)},
      {"electron_spacing", number(e_spacing)},
      {"core_half_width", number(c_half)},
      {"core_spacing", number(c_spacing)},
      {"max_capture_deficit", number(cfg.max_capture_deficit)},
      {"snapshot_times", [&](std::string_view v) { cfg.snapshot_times = parse_angle_list(v); }},
      {"wigner_q_min", number(q_min)},
      {"wigner_q_max", number(q_max)},
      {"wigner_q_step", number(q_step)},
      {"wigner_half_points", integer(cfg.wigner_half_points)},
      {"output_dir", [&](std::string_view v) { cfg.output_dir = std::string(trim(v)); }},
      {"leak_threshold", number(cfg.leak_threshold)},
      {"leak_margin", number(cfg.leak_margin)},
      {"threads", integer(cfg.threads)},
      {"plot_script",
       [&](std::string_view v) {
         v = trim(v);
         if (v == "true" || v == "1" || v == "yes") cfg.plot_script = true;
         else if (v == "false" || v == "0" || v == "no") cfg.plot_script = false;
         else throw std::invalid_argument("expected true or false");
       }},
  };

  std::map<std::string, int, std::less<>> key_line;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    try {
      it->second(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "': " + e.what() +
                        " (got '" + std::string(value) + "')");
    }
    key_line[key] = line_no;
  }

  auto fail = [&](const std::string& key, const std::string& message) -> ConfigError {
    const auto it = key_line.find(key);
    const std::string where =
        it != key_line.end() ? "line " + std::to_string(it->second) : std::string("default value");
    return ConfigError(where + ": key '" + key + "': " + message);
  };

  cfg.physical.electron_mass = electron_mass;
  cfg.physical.core_mass = core_mass;
  cfg.physical.target_bound_energy = bound_energy;
  if (electron_mass > 0.0 && core_mass > 0.0 && bound_energy < 0.0) {
    cfg.physical.delta_strength =
        delta_parameters(bound_energy, cfg.physical.reduced_mass()).strength;
  }

  auto axis = [&](double half, double spacing, const char* half_key, const char* spacing_key) {
    if (!(spacing > 0.0)) throw fail(spacing_key, "must be positive");
    if (!(half > 0.0) || !is_multiple(half, spacing)) {
      throw fail(half_key, "must be a positive multiple of the axis spacing");
    }
    return Grid1D::centered(half, spacing);
  };
  cfg.entropy_grids.electron_axis = axis(e_half, e_spacing, "electron_half_width", "electron_spacing");
  cfg.entropy_grids.core_axis = axis(c_half, c_spacing, "core_half_width", "core_spacing");

  if (!(q_step > 0.0)) throw fail("wigner_q_step", "must be positive");
  if (!(q_max >= q_min)) throw fail("wigner_q_max", "must not be below wigner_q_min");
  if (!is_multiple(q_max - q_min, q_step) && q_max != q_min) {
    throw fail("wigner_q_step", "must divide wigner_q_max - wigner_q_min");
  }
  cfg.wigner_window.min = q_min;
  cfg.wigner_window.max = q_max;
  cfg.wigner_window.count = static_cast<std::size_t>(std::llround((q_max - q_min) / q_step)) + 1;

  if (auto bad = find_violation(cfg)) throw fail(bad->key, bad->message);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace rescatter
