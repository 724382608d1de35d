#include "rescatter/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rescatter/errors.hpp"

namespace rescatter {

namespace {

void require_same_grid(const ComplexField& a, const ComplexField& b, const char* what) {
  if (!(a.grid == b.grid) || a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": states live on different grids");
  }
}

// Interior (boundary-eliminated) H~ - shift * A for the static potential plus
// a uniform field.
TridiagonalSystem interior_operator(const NumerovOperators& ops, double field, complex h_scale,
                                    complex a_scale) {
  const std::size_t n_full = ops.grid.count;
  const std::size_t n = n_full - 2;
  const double kin_diag = -ops.kinetic_diag / (2.0 * ops.reduced_mass);
  const double kin_off = -ops.kinetic_off / (2.0 * ops.reduced_mass);
  auto potential = [&](std::size_t j) { return ops.static_potential[j] + field * ops.grid.x(j); };

  TridiagonalSystem sys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + 1;
    const double h_diag = kin_diag + ops.weight_diag * potential(j);
    sys.diagonal[i] = a_scale * ops.weight_diag + h_scale * h_diag;
    if (i + 1 < n) {
      // row j, column j+1 and row j+1, column j
      sys.upper[i] = a_scale * ops.weight_off + h_scale * (kin_off + ops.weight_off * potential(j + 1));
      sys.lower[i] = a_scale * ops.weight_off + h_scale * (kin_off + ops.weight_off * potential(j));
    }
  }
  return sys;
}

double weighted_norm(const std::vector<complex>& v, double dx) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s * dx);
}

}  // namespace

TridiagonalSystem NumerovOperators::numerov_matrix() const {
  TridiagonalSystem m(grid.count);
  std::fill(m.diagonal.begin(), m.diagonal.end(), complex{weight_diag});
  std::fill(m.lower.begin(), m.lower.end(), complex{weight_off});
  std::fill(m.upper.begin(), m.upper.end(), complex{weight_off});
  return m;
}

TridiagonalSystem NumerovOperators::kinetic_matrix() const {
  TridiagonalSystem m(grid.count);
  std::fill(m.diagonal.begin(), m.diagonal.end(), complex{kinetic_diag});
  std::fill(m.lower.begin(), m.lower.end(), complex{kinetic_off});
  std::fill(m.upper.begin(), m.upper.end(), complex{kinetic_off});
  return m;
}

TridiagonalSystem NumerovOperators::hamiltonian(double field) const {
  const std::size_t n = grid.count;
  TridiagonalSystem h(n);
  const double kin_diag_h = -kinetic_diag / (2.0 * reduced_mass);
  const double kin_off_h = -kinetic_off / (2.0 * reduced_mass);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = static_potential[j] + field * grid.x(j);
    h.diagonal[j] = kin_diag_h + weight_diag * v;
    if (j + 1 < n) {
      h.lower[j] = kin_off_h + weight_off * v;  // (j+1, j)
      h.upper[j] = kin_off_h + weight_off * (static_potential[j + 1] + field * grid.x(j + 1));
    }
  }
  return h;
}

NumerovOperators assemble_operators(const Grid1D& grid, double reduced_mass,
                                    std::vector<double> potential) {
  grid.validate();
  if (!(reduced_mass > 0.0)) throw std::invalid_argument("reduced mass must be positive");
  if (potential.size() != grid.count) {
    throw std::invalid_argument("assemble_operators: potential length does not match grid");
  }
  NumerovOperators ops;
  ops.grid = grid;
  ops.reduced_mass = reduced_mass;
  const double inv_dx2 = 1.0 / (grid.spacing * grid.spacing);
  ops.kinetic_off = inv_dx2;
  ops.kinetic_diag = -2.0 * inv_dx2;
  ops.static_potential = std::move(potential);
  return ops;
}

NumerovOperators assemble_operators(const Grid1D& grid, const PhysicalParams& params) {
  params.validate();
  grid.validate();
  const auto origin = grid.origin_index();
  if (!origin) throw ConfigError("assemble_operators: grid does not contain x = 0");
  std::vector<double> potential(grid.count, 0.0);
  potential[*origin] = -params.delta_strength / grid.spacing;
  auto ops = assemble_operators(grid, params.reduced_mass(), std::move(potential));
  ops.delta_index = origin;
  return ops;
}

GroundState discrete_ground_state(const NumerovOperators& ops, double tolerance,
                                  int max_iterations) {
  const Grid1D& grid = ops.grid;
  const double dx = grid.spacing;
  const std::size_t n = grid.count - 2;

  // Starting vector: the continuum bound state for a delta well, otherwise a
  // unit Gaussian centered on the potential minimum.
  std::vector<complex> psi(n);
  const auto min_it = std::min_element(ops.static_potential.begin(), ops.static_potential.end());
  const double v_min = *min_it;
  if (ops.delta_index) {
    const double strength = -ops.static_potential[*ops.delta_index] * dx;
    const double kappa = ops.reduced_mass * strength;
    for (std::size_t i = 0; i < n; ++i) psi[i] = std::exp(-kappa * std::abs(grid.x(i + 1)));
  } else {
    const double x0 = grid.x(static_cast<std::size_t>(min_it - ops.static_potential.begin()));
    for (std::size_t i = 0; i < n; ++i) {
      const double d = grid.x(i + 1) - x0;
      psi[i] = std::exp(-0.5 * d * d);
    }
  }

  const TridiagonalSystem h = interior_operator(ops, 0.0, 1.0, 0.0);
  const TridiagonalSystem a = interior_operator(ops, 0.0, 0.0, 1.0);
  std::vector<complex> h_psi(n), a_psi(n), resid(n), y(n), scratch(n);

  auto normalize = [&](std::vector<complex>& v) {
    const double s = weighted_norm(v, dx);
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw NumericalError("discrete_ground_state: iterate collapsed");
    }
    for (auto& z : v) z /= s;
  };
  // Returns (Rayleigh quotient, residual norm).
  auto measure = [&](const std::vector<complex>& v) {
    h.multiply(v, h_psi);
    a.multiply(v, a_psi);
    complex num{}, den{};
    for (std::size_t i = 0; i < n; ++i) {
      num += std::conj(v[i]) * h_psi[i];
      den += std::conj(v[i]) * a_psi[i];
    }
    const double e = (num / den).real();
    for (std::size_t i = 0; i < n; ++i) resid[i] = h_psi[i] - e * a_psi[i];
    return std::pair{e, weighted_norm(resid, dx)};
  };

  normalize(psi);
  // The spectrum of A^{-1} H~ lies above min(V), so this shift selects the
  // lowest level. A few sweeps bring the Rayleigh quotient close to it before
  // the shift is moved next to the eigenvalue.
  double shift = v_min - 1.0;
  const int warmup = std::min(20, max_iterations);
  auto [energy, residual] = measure(psi);
  int it = 0;
  bool refined = false;
  for (; it < max_iterations; ++it) {
    if (residual <= tolerance) break;
    if (!refined && it >= warmup) {
      shift = energy - 1e-3 * (1.0 + std::abs(energy));
      refined = true;
    }
    const TridiagonalSystem shifted = interior_operator(ops, 0.0, 1.0, -shift);
    a.multiply(psi, a_psi);
    solve_tridiagonal(shifted, a_psi, y, scratch);
    psi.swap(y);
    normalize(psi);
    std::tie(energy, residual) = measure(psi);
  }
  if (residual > tolerance) {
    std::ostringstream msg;
    msg << "discrete_ground_state: no convergence after " << it << " iterations (residual "
        << residual << ")";
    throw NumericalError(msg.str(), residual);
  }

  // Real eigenvector; fix the sign so the largest component is positive.
  auto peak = std::max_element(psi.begin(), psi.end(), [](complex l, complex r) {
    return std::abs(l) < std::abs(r);
  });
  const double sign = peak->real() < 0.0 ? -1.0 : 1.0;

  ComplexField out(grid);
  for (std::size_t i = 0; i < n; ++i) out[i + 1] = complex{sign * psi[i].real(), 0.0};
  return {std::move(out), energy, residual, it};
}

CrankNicolsonStepper::CrankNicolsonStepper(const NumerovOperators& ops)
    : ops_(ops),
      lhs_(ops.grid.count - 2),
      rhs_(ops.grid.count - 2),
      solution_(ops.grid.count - 2),
      scratch_(ops.grid.count - 2) {}

void CrankNicolsonStepper::advance(ComplexField& psi, double field, double dt) {
  const NumerovOperators& ops = ops_;
  if (!(psi.grid == ops.grid)) throw std::invalid_argument("stepper: state grid mismatch");
  const std::size_t n = ops.grid.count - 2;
  const complex half{0.0, 0.5 * dt};
  const double kin_diag = -ops.kinetic_diag / (2.0 * ops.reduced_mass);
  const double kin_off = -ops.kinetic_off / (2.0 * ops.reduced_mass);
  const double* v_static = ops.static_potential.data();
  const Grid1D& g = ops.grid;

  // Row i of the interior system is grid point j = i + 1. Build A + i dt/2 H~
  // and apply A - i dt/2 H~ to psi in the same pass.
  const complex* u = psi.values.data() + 1;
  double v_prev = v_static[0] + field * g.x(0);
  double v_here = v_static[1] + field * g.x(1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + 1;
    const double v_next = v_static[j + 1] + field * g.x(j + 1);
    const complex h_diag = kin_diag + ops.weight_diag * v_here;
    const complex h_left = kin_off + ops.weight_off * v_prev;
    const complex h_right = kin_off + ops.weight_off * v_next;

    lhs_.diagonal[i] = ops.weight_diag + half * h_diag;
    if (i > 0) lhs_.lower[i - 1] = ops.weight_off + half * h_left;
    if (i + 1 < n) lhs_.upper[i] = ops.weight_off + half * h_right;

    complex r = (ops.weight_diag - half * h_diag) * u[i];
    if (i > 0) r += (ops.weight_off - half * h_left) * u[i - 1];
    if (i + 1 < n) r += (ops.weight_off - half * h_right) * u[i + 1];
    rhs_[i] = r;

    v_prev = v_here;
    v_here = v_next;
  }

  solve_tridiagonal(lhs_, rhs_, solution_, scratch_);
  psi.values.front() = complex{};
  psi.values.back() = complex{};
  std::copy(solution_.begin(), solution_.end(), psi.values.begin() + 1);
}

ComplexField step_fixed_field(const NumerovOperators& ops, double field,
                              const ComplexField& state, double dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be nonzero");
  CrankNicolsonStepper stepper(ops);
  ComplexField out = state;
  stepper.advance(out, field, dt);
  return out;
}

ComplexField step(const NumerovOperators& ops, const LaserPulse& pulse, const ComplexField& state,
                  double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  return step_fixed_field(ops, field_at(pulse, t + 0.5 * dt), state, dt);
}

namespace {

long whole_steps(double span, double dt, const char* what) {
  const double ratio = span / dt;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    std::ostringstream msg;
    msg << "propagate: " << what << " (" << span << ") is not a multiple of dt (" << dt << ")";
    throw std::invalid_argument(msg.str());
  }
  return n;
}

}  // namespace

ComplexField propagate(const NumerovOperators& ops, const LaserPulse& pulse,
                       const ComplexField& initial, double dt, double t_end,
                       const PropagationOptions& options, const Observer& observer) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("propagate: t_end must be non-negative");
  if (!(initial.grid == ops.grid)) throw std::invalid_argument("propagate: state grid mismatch");
  const long n_steps = whole_steps(t_end, dt, "t_end");
  const long stride = std::max(1L, whole_steps(options.observe_every, dt, "observation cadence"));

  ComplexField psi = initial;
  CrankNicolsonStepper stepper(ops);

  auto observe = [&](long n) {
    const double t = static_cast<double>(n) * dt;
    StepDiagnostics d;
    d.time = t;
    d.norm = norm(psi);
    d.boundary_leak = boundary_leak(psi, options.leak_margin);
    d.field_value = field_at(pulse, t);
    if (d.boundary_leak > options.leak_threshold) {
      std::ostringstream msg;
      msg << "box too small: boundary leak " << d.boundary_leak << " exceeds "
          << options.leak_threshold << " at t = " << t;
      throw BoxTooSmallError(msg.str(), t, d.boundary_leak);
    }
    if (observer) observer(t, psi, d);
  };

  observe(0);
  for (long n = 0; n < n_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    stepper.advance(psi, field_at(pulse, t + 0.5 * dt), dt);
    if ((n + 1) % stride == 0 || n + 1 == n_steps) observe(n + 1);
  }
  return psi;
}

double norm(const ComplexField& state) {
  double s = 0.0;
  for (const auto& v : state.values) s += std::norm(v);
  return s * state.grid.spacing;
}

double boundary_leak(const ComplexField& state, double margin) {
  const Grid1D& g = state.grid;
  if (g.count == 0) return 0.0;
  const double lo = g.x_min + margin;
  const double hi = g.x_max() - margin;
  double s = 0.0;
  for (std::size_t j = 0; j < g.count; ++j) {
    const double x = g.x(j);
    if (x < lo || x > hi) s += std::norm(state[j]);
  }
  return std::min(1.0, s * g.spacing);
}

complex overlap(const ComplexField& reference, const ComplexField& state) {
  require_same_grid(reference, state, "overlap");
  complex s{};
  for (std::size_t j = 0; j < state.size(); ++j) s += std::conj(reference[j]) * state[j];
  return s * state.grid.spacing;
}

double survival_probability(const ComplexField& state, const ComplexField& reference) {
  return std::norm(overlap(reference, state));
}

}  // namespace rescatter
