#pragma once

// Electron-core entanglement from the separable relative/center-of-mass state.
//
// The two-particle amplitude on an (x_e, x_c) lattice is
//
//     Psi(x_e, x_c) = Phi_com((m_e x_e + m_c x_c) / M, t) * phi_rel(x_e - x_c, t)
//
// where phi_rel is read off the relative grid without interpolation. The
// Schmidt probabilities are the eigenvalues of the Gram matrix of the weighted
// amplitude matrix over its smaller dimension.

#include <cstddef>
#include <span>
#include <vector>

#include "rescatter/model.hpp"

namespace rescatter {

struct ParticleGrids {
  Grid1D electron_axis;
  Grid1D core_axis;

  /// Electron axis [-600, 600] and core axis [-6, 6], both at 0.25.
  static ParticleGrids defaults();

  /// Throws ConfigError unless every x_e - x_c falls exactly on a point of
  /// (the infinite extension of) `relative`.
  void check_commensurate(const Grid1D& relative) const;
};

struct TwoParticleSlice {
  ParticleGrids grids;
  /// Row-major, one row per electron position.
  std::vector<complex> amplitudes;
  double time_tag = 0.0;
  double captured_probability = 0.0;
  /// captured_probability fell below 0.99.
  bool truncated = false;

  std::size_t rows() const { return grids.electron_axis.count; }
  std::size_t cols() const { return grids.core_axis.count; }
  complex& at(std::size_t i, std::size_t m) { return amplitudes[i * cols() + m]; }
  complex at(std::size_t i, std::size_t m) const { return amplitudes[i * cols() + m]; }
};

struct SchmidtSpectrum {
  std::vector<double> probabilities;  ///< descending, sums to 1
  double truncation_deficit = 0.0;    ///< 1 - sum before renormalization
};

struct AssemblyOptions {
  /// Abort when 1 - captured probability exceeds this.
  double max_deficit = 0.1;
};

/// Samples Psi on the particle grids. Relative samples outside the relative
/// grid read as zero. Throws ConfigError on a commensurability violation or
/// when the captured probability deficit exceeds `options.max_deficit`.
TwoParticleSlice assemble_two_particle(const ComplexField& relative_state, const ComGaussian& com,
                                       double t, const ParticleGrids& grids,
                                       const PhysicalParams& params,
                                       const AssemblyOptions& options = {});

/// Eigenvalues of an n x n Hermitian matrix (row-major, upper and lower
/// triangles both present) by cyclic Jacobi rotations, ascending order.
/// Throws NumericalError if the sweeps do not converge.
std::vector<double> hermitian_eigenvalues(std::vector<complex> matrix, std::size_t n);

/// Schmidt probabilities of the slice. An all-zero slice yields an empty
/// spectrum with deficit 1.
SchmidtSpectrum schmidt_spectrum(const TwoParticleSlice& slice);

/// -sum p ln p in nats; terms below 1e-14 are skipped.
double neumann_entropy(const SchmidtSpectrum& spectrum);
double neumann_entropy(std::span<const double> probabilities);

struct EntropySample {
  double entropy = 0.0;
  SchmidtSpectrum spectrum;
  double captured_probability = 0.0;
};

/// assemble_two_particle, schmidt_spectrum and neumann_entropy in sequence.
EntropySample entropy_at(const ComplexField& relative_state, const ComGaussian& com, double t,
                         const ParticleGrids& grids, const PhysicalParams& params,
                         const AssemblyOptions& options = {});

}  // namespace rescatter
