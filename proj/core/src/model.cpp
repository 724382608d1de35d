#include "rescatter/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rescatter/errors.hpp"

namespace rescatter {

DeltaWell delta_parameters(double target_energy, double reduced_mass) {
  if (!(target_energy < 0.0)) {
    throw std::invalid_argument("delta_parameters: target energy must be negative, got " +
                                std::to_string(target_energy));
  }
  if (!(reduced_mass > 0.0)) {
    throw std::invalid_argument("delta_parameters: reduced mass must be positive, got " +
                                std::to_string(reduced_mass));
  }
  const double strength = std::sqrt(2.0 * std::abs(target_energy) / reduced_mass);
  return {strength, reduced_mass * strength};
}

void PhysicalParams::validate() const {
  if (!(electron_mass > 0.0)) throw std::invalid_argument("electron_mass must be positive");
  if (!(core_mass > 0.0)) throw std::invalid_argument("core_mass must be positive");
  if (!(delta_strength > 0.0)) throw std::invalid_argument("delta_strength must be positive");
  if (!(target_bound_energy < 0.0)) {
    throw std::invalid_argument("target_bound_energy must be negative");
  }
}

PhysicalParams PhysicalParams::with_bound_energy(double electron_mass, double core_mass,
                                                 double bound_energy) {
  PhysicalParams p;
  p.electron_mass = electron_mass;
  p.core_mass = core_mass;
  p.target_bound_energy = bound_energy;
  if (!(electron_mass > 0.0) || !(core_mass > 0.0)) {
    throw std::invalid_argument("masses must be positive");
  }
  p.delta_strength = delta_parameters(bound_energy, p.reduced_mass()).strength;
  return p;
}

void LaserPulse::validate() const {
  if (!(amplitude >= 0.0)) throw std::invalid_argument("pulse amplitude must be non-negative");
  if (!(carrier_period > 0.0)) throw std::invalid_argument("carrier period must be positive");
  if (cycles < 1) throw std::invalid_argument("pulse must span at least one cycle");
  if (!std::isfinite(cep)) throw std::invalid_argument("cep must be finite");
}

double field_at(const LaserPulse& pulse, double t) {
  const double tau = pulse.duration();
  if (t <= 0.0 || t >= tau) return 0.0;
  const double envelope = std::sin(pi * t / tau);
  return pulse.amplitude * envelope * envelope *
         std::cos(pulse.angular_frequency() * (t - 0.5 * tau) + pulse.cep);
}

std::vector<double> zero_crossings(const LaserPulse& pulse) {
  std::vector<double> out;
  if (pulse.amplitude == 0.0) return out;
  const double tau = pulse.duration();
  const double omega = pulse.angular_frequency();
  // t_k = tau/2 + (pi/2 + k pi - cep) / omega
  const double t0 = 0.5 * tau + (0.5 * pi - pulse.cep) / omega;
  const double half = 0.5 * pulse.carrier_period;
  auto k = static_cast<long>(std::floor(-t0 / half));
  for (;; ++k) {
    const double t = t0 + static_cast<double>(k) * half;
    if (t >= tau) break;
    if (t > 0.0) out.push_back(t);
  }
  return out;
}

std::optional<std::size_t> Grid1D::origin_index() const {
  if (count == 0 || !(spacing > 0.0)) return std::nullopt;
  const double j = -x_min / spacing;
  const double nearest = std::round(j);
  if (nearest < 0.0 || nearest >= static_cast<double>(count)) return std::nullopt;
  if (std::abs(j - nearest) > 1e-9) return std::nullopt;
  return static_cast<std::size_t>(nearest);
}

Grid1D Grid1D::centered(double half_extent, double spacing) {
  if (!(spacing > 0.0) || !(half_extent > 0.0)) {
    throw std::invalid_argument("centered grid needs positive extent and spacing");
  }
  const auto half = static_cast<std::size_t>(std::llround(half_extent / spacing));
  if (half == 0) throw std::invalid_argument("centered grid extent smaller than one spacing");
  Grid1D g;
  g.spacing = spacing;
  g.count = 2 * half + 1;
  g.x_min = -static_cast<double>(half) * spacing;
  return g;
}

void Grid1D::validate() const {
  if (!(spacing > 0.0)) throw ConfigError("grid spacing must be positive");
  if (count < 3) throw ConfigError("grid needs at least 3 points");
  if (!std::isfinite(x_min)) throw ConfigError("grid origin must be finite");
  if (count % 2 == 0) throw ConfigError("grid needs an odd number of points");
  const double half = static_cast<double>(count - 1) / 2.0;
  if (std::abs(x_min + half * spacing) > 1e-9 * spacing * (1.0 + half)) {
    throw ConfigError("grid must be symmetric about x = 0");
  }
}

ComplexField::ComplexField(const Grid1D& g, std::vector<complex> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.count) {
    throw std::invalid_argument("ComplexField: value count does not match grid");
  }
}

ComplexField delta_bound_state(const Grid1D& grid, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("delta_bound_state: kappa must be positive");
  grid.validate();
  if (!grid.origin_index()) {
    throw ConfigError("delta_bound_state: grid does not contain x = 0");
  }
  ComplexField psi(grid);
  const double amp = std::sqrt(kappa);
  for (std::size_t j = 1; j + 1 < grid.count; ++j) {
    psi[j] = amp * std::exp(-kappa * std::abs(grid.x(j)));
  }
  double sum = 0.0;
  for (const auto& v : psi.values) sum += std::norm(v);
  const double scale = 1.0 / std::sqrt(sum * grid.spacing);
  for (auto& v : psi.values) v *= scale;
  return psi;
}

void ComGaussian::validate() const {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("COM sigma0 must be positive");
  if (!(total_mass > 0.0)) throw std::invalid_argument("COM total mass must be positive");
}

complex com_amplitude(double X, double t, const ComGaussian& g) {
  const double s2 = g.sigma0 * g.sigma0;
  const complex spread{1.0, t / (2.0 * g.total_mass * s2)};
  const double shifted = X - g.center - g.momentum * t / g.total_mass;
  const complex exponent = -shifted * shifted / (4.0 * s2 * spread) +
                           complex{0.0, g.momentum * (X - g.center) -
                                            g.momentum * g.momentum * t / (2.0 * g.total_mass)};
  return std::pow(2.0 * pi * s2, -0.25) / std::sqrt(spread) * std::exp(exponent);
}

double com_width(double t, const ComGaussian& g) {
  const double r = t / (2.0 * g.total_mass * g.sigma0 * g.sigma0);
  return g.sigma0 * std::sqrt(1.0 + r * r);
}

}  // namespace rescatter
