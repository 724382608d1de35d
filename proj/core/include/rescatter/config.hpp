#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rescatter/entanglement.hpp"
#include "rescatter/model.hpp"
#include "rescatter/wigner.hpp"

namespace rescatter {

/// Everything a single simulation run needs. Defaults reproduce the
/// reference setup: hydrogen-like delta well, 3-cycle pulse of period 100,
/// box [-600, 600] at dx = 0.05, entropy every 5 time units.
struct RunConfig {
  PhysicalParams physical = PhysicalParams::with_bound_energy(1.0, 1836.0, -0.5);
  double com_sigma = 1.0;
  LaserPulse pulse;

  double box_half_width = 600.0;
  double dx = 0.05;
  double dt = 0.05;
  double t_end = 0.0;  ///< 0 means the pulse duration

  ParticleGrids entropy_grids = ParticleGrids::defaults();
  double entropy_cadence = 5.0;
  double max_capture_deficit = 0.1;

  std::vector<double> snapshot_times;
  QWindow wigner_window;
  std::size_t wigner_half_points = 1024;

  std::filesystem::path output_dir = "out";
  double leak_threshold = 1e-3;
  double leak_margin = 50.0;
  unsigned threads = 1;
  bool plot_script = false;

  double end_time() const { return t_end > 0.0 ? t_end : pulse.duration(); }
  Grid1D relative_grid() const { return Grid1D::centered(box_half_width, dx); }
  ComGaussian com() const { return {com_sigma, physical.total_mass(), 0.0, 0.0}; }

  /// Cross-field invariants; throws ConfigError naming the offending key.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Omitted keys keep their
/// defaults. Angles accept a `pi` suffix (`-0.3pi`). Throws ConfigError
/// naming the key and line for unknown keys, bad values and violated
/// invariants.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Number with optional `pi` multiplier: "0.5", "-0.3pi", "0.3*pi", "pi".
double parse_angle(std::string_view text);

/// Comma-separated list of angles.
std::vector<double> parse_angle_list(std::string_view text);

}  // namespace rescatter
