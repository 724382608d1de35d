#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "rescatter/propagator.hpp"

namespace rescatter {

/// Entropy time series sampled during a run.
struct EntropySeries {
  std::vector<double> times;
  std::vector<double> field;
  std::vector<double> entropy;
  std::vector<double> norm;
  std::vector<double> deficit;

  std::size_t size() const { return times.size(); }
  void push_back(double t, double e_field, double s, double n, double d);

  /// Equal column lengths and strictly increasing times.
  bool consistent() const;
};

/// CSV with header `time,field,entropy,norm,deficit`. Values use the shortest
/// round-trip representation, so reading the file back reproduces the series
/// exactly.
void write_entropy_csv(std::ostream& out, const EntropySeries& series);
void write_entropy_csv(const std::filesystem::path& path, const EntropySeries& series);

/// Throws ConfigError on a malformed file.
EntropySeries read_entropy_csv(std::istream& in);
EntropySeries read_entropy_csv(const std::filesystem::path& path);

struct DiagnosticsRow {
  StepDiagnostics step;
  double captured_probability = 0.0;
};

/// CSV with header `time,field,norm,boundary_leak,captured_probability`.
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRow>& rows);

}  // namespace rescatter
