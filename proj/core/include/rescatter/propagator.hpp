#pragma once

// Numerov-extended Crank-Nicolson propagation of the relative wavefunction.
//
// With the Numerov weight A = tridiag(1, 10, 1)/12 and the second difference
// B = tridiag(1, -2, 1)/dx^2, the discrete Hamiltonian acts as
//
//     H~ = -B / (2 mu) + A diag(V)        (H~ psi = E A psi)
//
// Because A = I + dx^2/12 B, the two stencils commute, so A^{-1} H~ =
// -A^{-1} B / (2 mu) + diag(V) is Hermitian. The Crank-Nicolson step
//
//     (A + i dt/2 H~) psi' = (A - i dt/2 H~) psi
//
// is therefore the Cayley transform of a Hermitian operator and preserves the
// grid norm to roundoff. A diag(V) is left unsymmetrized on purpose.
//
// The end points of the grid are hard walls; only interior points are unknowns.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "rescatter/model.hpp"
#include "rescatter/tridiagonal.hpp"

namespace rescatter {

struct NumerovOperators {
  Grid1D grid;
  double reduced_mass = 1.0;
  /// Numerov weight stencil: off-diagonal 1/12, diagonal 10/12.
  double weight_off = 1.0 / 12.0;
  double weight_diag = 10.0 / 12.0;
  /// Kinetic stencil: off-diagonal 1/dx^2, diagonal -2/dx^2.
  double kinetic_off = 0.0;
  double kinetic_diag = 0.0;
  std::vector<double> static_potential;
  std::optional<std::size_t> delta_index;

  /// Full-grid matrices (no boundary elimination).
  TridiagonalSystem numerov_matrix() const;
  TridiagonalSystem kinetic_matrix() const;
  /// H~ for the static potential plus a uniform field term `field * x`.
  TridiagonalSystem hamiltonian(double field = 0.0) const;
};

/// Delta well -V/dx at the origin, zero elsewhere. Throws ConfigError when the
/// grid has no point at x = 0.
NumerovOperators assemble_operators(const Grid1D& grid, const PhysicalParams& params);

/// Arbitrary static potential sampled on the grid.
NumerovOperators assemble_operators(const Grid1D& grid, double reduced_mass,
                                    std::vector<double> potential);

struct GroundState {
  ComplexField state;
  double energy;
  double residual;
  int iterations;
};

/// Lowest eigenpair of H~ psi = E A psi by shifted inverse iteration. The
/// residual sqrt(sum |H~ psi - E A psi|^2 dx) must drop below `tolerance`
/// within `max_iterations`, otherwise NumericalError carries the last residual.
GroundState discrete_ground_state(const NumerovOperators& ops, double tolerance = 1e-10,
                                  int max_iterations = 500);

struct StepDiagnostics {
  double time = 0.0;
  double norm = 0.0;
  double boundary_leak = 0.0;
  double field_value = 0.0;
};

/// Reusable Crank-Nicolson stepper. Holds the band storage and solver scratch
/// for one grid so repeated steps do not allocate.
class CrankNicolsonStepper {
 public:
  explicit CrankNicolsonStepper(const NumerovOperators& ops);

  /// Advances `psi` in place by dt (either sign) with the dipole term
  /// `field * x` held fixed over the step.
  void advance(ComplexField& psi, double field, double dt);

  const NumerovOperators& operators() const { return ops_; }

 private:
  NumerovOperators ops_;
  TridiagonalSystem lhs_;
  std::vector<complex> rhs_;
  std::vector<complex> solution_;
  std::vector<complex> scratch_;
};

/// One step from t to t + dt (dt > 0) using the field at the midpoint.
ComplexField step(const NumerovOperators& ops, const LaserPulse& pulse, const ComplexField& state,
                  double t, double dt);

/// One step with a prescribed uniform field; dt may be negative.
ComplexField step_fixed_field(const NumerovOperators& ops, double field,
                              const ComplexField& state, double dt);

struct PropagationOptions {
  double observe_every = 5.0;    ///< observer cadence in time units
  double leak_margin = 50.0;     ///< width of the outer strips counted as leak
  double leak_threshold = 1e-3;  ///< abort when leak exceeds this
};

using Observer = std::function<void(double t, const ComplexField& state,
                                    const StepDiagnostics& diagnostics)>;

/// Steps from t = 0 to t_end. The observer runs at t = 0, every
/// `observe_every`, and at t_end. Throws BoxTooSmallError when the boundary
/// leak at an observation exceeds the threshold.
ComplexField propagate(const NumerovOperators& ops, const LaserPulse& pulse,
                       const ComplexField& initial, double dt, double t_end,
                       const PropagationOptions& options = {},
                       const Observer& observer = nullptr);

/// sum |psi|^2 dx
double norm(const ComplexField& state);

/// Probability within `margin` of either end of the grid.
double boundary_leak(const ComplexField& state, double margin);

/// |<reference|state>|^2 with the grid quadrature.
double survival_probability(const ComplexField& state, const ComplexField& reference);

/// <reference|state> with the grid quadrature.
complex overlap(const ComplexField& reference, const ComplexField& state);

}  // namespace rescatter
