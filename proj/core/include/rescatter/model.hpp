#pragma once

// Physical model of the electron + ion-core pair in one dimension, the
// few-cycle driving pulse, and the closed-form states used to initialize
// and check the numerics. Atomic units throughout (hbar = e = m_e = 1).

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rescatter {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Decay rate and well strength of a zero-range attractive potential.
struct DeltaWell {
  double strength;  ///< V in -V delta(x)
  double kappa;     ///< decay rate of the bound state sqrt(kappa) exp(-kappa |x|)
};

/// Strength and decay rate that give the single bound state the energy
/// `target_energy` for a particle of mass `reduced_mass`: V = sqrt(2|E|/mu),
/// kappa = mu V.
DeltaWell delta_parameters(double target_energy, double reduced_mass);

struct PhysicalParams {
  double electron_mass = 1.0;
  double core_mass = 1836.0;
  double delta_strength = 1.0;
  double target_bound_energy = -0.5;

  double reduced_mass() const { return electron_mass * core_mass / (electron_mass + core_mass); }
  double total_mass() const { return electron_mass + core_mass; }

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  /// Masses as given, delta strength chosen so the bound level sits at
  /// `bound_energy`.
  static PhysicalParams with_bound_energy(double electron_mass, double core_mass,
                                          double bound_energy);
};

/// Linearly polarized pulse with a sine-squared envelope spanning `cycles`
/// carrier periods. The carrier phase is referenced to the envelope peak.
struct LaserPulse {
  double amplitude = 0.1;
  double carrier_period = 100.0;
  int cycles = 3;
  double cep = 0.0;

  double duration() const { return cycles * carrier_period; }
  double angular_frequency() const { return 2.0 * pi / carrier_period; }

  void validate() const;
};

/// E(t) = E0 sin^2(pi t / tau) cos(omega (t - tau/2) + cep) on [0, tau], zero
/// elsewhere.
double field_at(const LaserPulse& pulse, double t);

/// Zeros of the carrier inside the open interval (0, tau), ascending. The
/// envelope zeros at the pulse edges are not included.
std::vector<double> zero_crossings(const LaserPulse& pulse);

/// Uniform one-dimensional grid x_j = x_min + j * spacing, j < count.
struct Grid1D {
  double x_min = 0.0;
  double spacing = 1.0;
  std::size_t count = 0;

  double x(std::size_t j) const { return x_min + static_cast<double>(j) * spacing; }
  double x_max() const { return x(count - 1); }

  /// Index of the grid point that sits at x = 0, if any.
  std::optional<std::size_t> origin_index() const;

  /// Odd-sized grid symmetric about the origin covering [-half_extent, half_extent].
  /// The extent is rounded to the nearest whole number of spacings.
  static Grid1D centered(double half_extent, double spacing);

  /// Positive spacing, at least 3 points, odd count, symmetric about x = 0.
  /// Throws ConfigError otherwise.
  void validate() const;

  bool operator==(const Grid1D&) const = default;
};

/// Sampled complex wavefunction with hard-wall (zero) end points.
struct ComplexField {
  Grid1D grid;
  std::vector<complex> values;

  ComplexField() = default;
  explicit ComplexField(const Grid1D& g) : grid(g), values(g.count, complex{}) {}
  ComplexField(const Grid1D& g, std::vector<complex> v);

  std::size_t size() const { return values.size(); }
  complex& operator[](std::size_t j) { return values[j]; }
  const complex& operator[](std::size_t j) const { return values[j]; }
};

/// sqrt(kappa) exp(-kappa |x|) sampled on `grid`, end points zeroed and the
/// result renormalized on the grid. Throws ConfigError when x = 0 is not a
/// grid point.
ComplexField delta_bound_state(const Grid1D& grid, double kappa);

/// Free Gaussian wavepacket of the center of mass.
struct ComGaussian {
  double sigma0 = 1.0;         ///< initial position standard deviation
  double total_mass = 1837.0;
  double center = 0.0;
  double momentum = 0.0;

  void validate() const;
};

/// Exact free evolution of the Gaussian at position X and time t >= 0.
complex com_amplitude(double X, double t, const ComGaussian& g);

/// Position standard deviation sigma0 sqrt(1 + (t / (2 M sigma0^2))^2).
double com_width(double t, const ComGaussian& g);

}  // namespace rescatter
