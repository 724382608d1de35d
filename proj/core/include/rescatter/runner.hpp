#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "rescatter/analysis.hpp"
#include "rescatter/config.hpp"
#include "rescatter/propagator.hpp"
#include "rescatter/series.hpp"
#include "rescatter/wigner.hpp"

namespace rescatter {

/// Exit status of the driver: 0 success, 1 configuration error,
/// 2 numerical failure, 3 box too small.
enum class ExitStatus : int { ok = 0, config_error = 1, numerical_failure = 2, box_too_small = 3 };

/// Maps an exception thrown by the library onto an exit status.
ExitStatus classify(const std::exception& e);

struct RunResult {
  double ground_energy = 0.0;
  EntropySeries series;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<WignerGrid> snapshots;
  std::vector<double> zero_crossings;
  std::vector<double> maxima;
  AlignmentReport alignment;
  double max_norm_drift = 0.0;
  double max_boundary_leak = 0.0;
  /// Human-readable warnings: truncated captures, large deficits.
  std::vector<std::string> flags;
  std::vector<std::filesystem::path> files;
};

/// Propagates, samples the entropy and takes the requested Wigner snapshots
/// without touching the filesystem.
RunResult simulate(const RunConfig& config);

/// simulate() plus the output files in config.output_dir: entropy.csv,
/// diagnostics.csv, report.txt, one wigner_t<time>.dat per snapshot and, when
/// requested, plot.py.
RunResult run(const RunConfig& config);

struct SweepEntry {
  double cep = 0.0;
  std::filesystem::path directory;
  ExitStatus status = ExitStatus::ok;
  std::string message;
  RunResult result;
};

struct SweepSummary {
  std::vector<SweepEntry> entries;
  std::filesystem::path summary_file;

  bool all_ok() const;
};

/// One run per CEP in its own directory under config.output_dir, up to
/// config.threads at a time. A failing run is recorded in the summary and
/// does not stop the others. Writes summary.csv next to the run directories.
SweepSummary sweep_cep(const RunConfig& config, const std::vector<double>& ceps);

/// Directory name used for the i-th sweep entry.
std::string sweep_directory_name(std::size_t index, double cep);

}  // namespace rescatter
