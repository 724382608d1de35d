#pragma once

#include <cstddef>
#include <vector>

#include "rescatter/model.hpp"

namespace rescatter {

/// Positions at which W(q, p) is evaluated: `count` points from `min` to `max`.
/// Every point must coincide with a grid point of the transformed state.
struct QWindow {
  double min = -80.0;
  double max = 80.0;
  std::size_t count = 321;

  double step() const { return count > 1 ? (max - min) / static_cast<double>(count - 1) : 0.0; }
  double at(std::size_t i) const { return min + static_cast<double>(i) * step(); }
};

/// Phase-space samples W(q_i, p_k), stored row-major with one row per q.
struct WignerGrid {
  std::vector<double> q_values;
  std::vector<double> p_values;
  std::vector<double> values;
  double q_spacing = 0.0;
  double p_spacing = 0.0;
  double time_tag = 0.0;
  /// Largest |Im W| seen before the imaginary part was dropped.
  double imaginary_residue = 0.0;

  std::size_t nq() const { return q_values.size(); }
  std::size_t np() const { return p_values.size(); }
  double& at(std::size_t iq, std::size_t ip) { return values[iq * np() + ip]; }
  double at(std::size_t iq, std::size_t ip) const { return values[iq * np() + ip]; }
  double max_value() const;
  double min_value() const;
};

/// Discrete Wigner function
///
///   W(q, p) = (1/pi) sum_{|m| <= half_points} psi*(q - m dx) psi(q + m dx) e^{2 i p m dx} dx
///
/// for every q of the window and every p of the conjugate grid
/// p_k = k pi / ((2 half_points + 1) dx), |k| <= half_points. With this sign
/// of the kernel a plane wave e^{i p0 x} appears at p = -p0. Samples of psi
/// beyond the grid read as zero. Columns are independent and are split over
/// `threads` workers. Throws std::invalid_argument when the window leaves the
/// grid or misses grid points.
WignerGrid wigner_transform(const ComplexField& state, const QWindow& window,
                            std::size_t half_points = 1024, unsigned threads = 1);

/// sum_p W dp for each q.
std::vector<double> position_marginal(const WignerGrid& w);

/// sum_q W dq for each p.
std::vector<double> momentum_marginal(const WignerGrid& w);

/// sum W dq dp
double wigner_normalization(const WignerGrid& w);

/// 2 pi sum W^2 dq dp, equal to Tr rho^2 when the window captures the state.
double purity(const WignerGrid& w);

}  // namespace rescatter
