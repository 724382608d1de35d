#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rescatter/model.hpp"
#include "rescatter/series.hpp"

namespace rescatter {

/// Times of strict interior local maxima of the entropy. Each isolated peak
/// is refined by the vertex of the parabola through it and its neighbours;
/// a flat top reports the midpoint of the plateau.
std::vector<double> find_local_maxima(const EntropySeries& series);
std::vector<double> find_local_maxima(const std::vector<double>& times,
                                      const std::vector<double>& values);

struct MatchedPair {
  double maximum;
  double crossing;
  double offset;  ///< maximum - crossing
};

struct AlignmentOptions {
  double tolerance = 2.5;
  /// Only maxima inside [window_begin, window_end] count toward the fraction.
  double window_begin = 50.0;
  double window_end = 250.0;

  /// Tolerance 2.5 and the central window [tau/6, 5 tau/6] of the pulse.
  static AlignmentOptions for_pulse(const LaserPulse& pulse);
};

struct AlignmentReport {
  std::vector<MatchedPair> pairs;
  std::vector<double> unmatched_maxima;
  std::size_t window_maxima = 0;
  std::size_t window_matched = 0;
  /// Undefined when no maximum lies in the window.
  std::optional<double> matched_fraction;
  double max_abs_offset = 0.0;
};

/// One-to-one matching of maxima to zero crossings: candidate pairs within
/// the tolerance are accepted greedily in order of increasing distance.
AlignmentReport alignment_report(const std::vector<double>& maxima,
                                 const std::vector<double>& crossings,
                                 const AlignmentOptions& options = {});

}  // namespace rescatter
