#pragma once

#include <filesystem>
#include <iosfwd>

#include "rescatter/wigner.hpp"

namespace rescatter {

/// Text grid file: a header block
///
///   # t = <time>
///   # cep = <radians>
///   # q_min = ... / q_max / nq / p_min / p_max / np
///
/// followed by nq whitespace-separated rows of np values (one row per q).
void write_wigner_snapshot(std::ostream& out, const WignerGrid& w, double cep);
void write_wigner_snapshot(const std::filesystem::path& path, const WignerGrid& w, double cep);

struct WignerSnapshot {
  double cep = 0.0;
  WignerGrid grid;  ///< q/p axes rebuilt from the header; time_tag from `# t`
};

/// Throws ConfigError on a malformed file.
WignerSnapshot read_wigner_snapshot(std::istream& in);
WignerSnapshot read_wigner_snapshot(const std::filesystem::path& path);

/// File name used by the driver for a snapshot at time t, e.g. "wigner_t165.dat".
std::string snapshot_file_name(double t);

}  // namespace rescatter
