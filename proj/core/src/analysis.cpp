#include "rescatter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace rescatter {

namespace {

// Vertex of the parabola through three points, clamped to their span.
double parabola_vertex(double t0, double y0, double t1, double y1, double t2, double y2) {
  const double d0 = (y1 - y0) / (t1 - t0);
  const double d1 = (y2 - y1) / (t2 - t1);
  const double curvature = (d1 - d0) / (t2 - t0);
  if (curvature >= 0.0) return t1;
  // y' = d0 + curvature * (2 t - t0 - t1) = 0
  const double t = 0.5 * (t0 + t1) - d0 / (2.0 * curvature);
  return std::clamp(t, t0, t2);
}

}  // namespace

std::vector<double> find_local_maxima(const std::vector<double>& times,
                                      const std::vector<double>& values) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("find_local_maxima: length mismatch");
  }
  std::vector<double> out;
  const std::size_t n = values.size();
  if (n < 3) return out;

  std::size_t i = 1;
  while (i + 1 < n) {
    // Extend over a run of equal values.
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    if (j + 1 >= n) break;
    if (values[i - 1] < values[i] && values[j + 1] < values[j]) {
      if (i == j) {
        out.push_back(parabola_vertex(times[i - 1], values[i - 1], times[i], values[i],
                                      times[i + 1], values[i + 1]));
      } else {
        out.push_back(0.5 * (times[i] + times[j]));
      }
    }
    i = j + 1;
  }
  return out;
}

std::vector<double> find_local_maxima(const EntropySeries& series) {
  return find_local_maxima(series.times, series.entropy);
}

AlignmentOptions AlignmentOptions::for_pulse(const LaserPulse& pulse) {
  const double tau = pulse.duration();
  return {2.5, tau / 6.0, 5.0 * tau / 6.0};
}

AlignmentReport alignment_report(const std::vector<double>& maxima,
                                 const std::vector<double>& crossings,
                                 const AlignmentOptions& options) {
  // (distance, maximum index, crossing index)
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t a = 0; a < maxima.size(); ++a) {
    for (std::size_t b = 0; b < crossings.size(); ++b) {
      const double d = std::abs(maxima[a] - crossings[b]);
      if (d <= options.tolerance) candidates.emplace_back(d, a, b);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> max_used(maxima.size(), false);
  std::vector<bool> crossing_used(crossings.size(), false);
  std::vector<std::optional<std::size_t>> partner(maxima.size());
  for (const auto& [d, a, b] : candidates) {
    if (max_used[a] || crossing_used[b]) continue;
    max_used[a] = crossing_used[b] = true;
    partner[a] = b;
  }

  AlignmentReport report;
  for (std::size_t a = 0; a < maxima.size(); ++a) {
    const bool in_window = maxima[a] >= options.window_begin && maxima[a] <= options.window_end;
    if (in_window) ++report.window_maxima;
    if (partner[a]) {
      const double c = crossings[*partner[a]];
      report.pairs.push_back({maxima[a], c, maxima[a] - c});
      report.max_abs_offset = std::max(report.max_abs_offset, std::abs(maxima[a] - c));
      if (in_window) ++report.window_matched;
    } else {
      report.unmatched_maxima.push_back(maxima[a]);
    }
  }
  if (report.window_maxima > 0) {
    report.matched_fraction =
        static_cast<double>(report.window_matched) / static_cast<double>(report.window_maxima);
  }
  return report;
}

}  // namespace rescatter
