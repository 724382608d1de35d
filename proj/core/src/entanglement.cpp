#include "rescatter/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rescatter/errors.hpp"

namespace rescatter {

namespace {

// Nearest integer ratio a / b, or -1 when a is not an integer multiple of b.
long integer_ratio(double a, double b) {
  const double r = a / b;
  const double n = std::round(r);
  if (n < 1.0 || std::abs(r - n) > 1e-9 * std::max(1.0, n)) return -1;
  return static_cast<long>(n);
}

}  // namespace

ParticleGrids ParticleGrids::defaults() {
  return {Grid1D::centered(600.0, 0.25), Grid1D::centered(6.0, 0.25)};
}

void ParticleGrids::check_commensurate(const Grid1D& relative) const {
  electron_axis.validate();
  core_axis.validate();
  const double dx = relative.spacing;
  if (integer_ratio(electron_axis.spacing, dx) < 0) {
    throw ConfigError("electron axis spacing is not an integer multiple of the relative spacing");
  }
  if (integer_ratio(core_axis.spacing, dx) < 0) {
    throw ConfigError("core axis spacing is not an integer multiple of the relative spacing");
  }
  const double offset = (electron_axis.x_min - core_axis.x_min - relative.x_min) / dx;
  if (std::abs(offset - std::round(offset)) > 1e-6) {
    throw ConfigError("particle axes are offset from the relative grid lattice");
  }
}

TwoParticleSlice assemble_two_particle(const ComplexField& relative_state, const ComGaussian& com,
                                       double t, const ParticleGrids& grids,
                                       const PhysicalParams& params,
                                       const AssemblyOptions& options) {
  const Grid1D& rel = relative_state.grid;
  grids.check_commensurate(rel);
  com.validate();

  const Grid1D& ge = grids.electron_axis;
  const Grid1D& gc = grids.core_axis;
  const long e_step = integer_ratio(ge.spacing, rel.spacing);
  const long c_step = integer_ratio(gc.spacing, rel.spacing);
  const long offset = std::lround((ge.x_min - gc.x_min - rel.x_min) / rel.spacing);
  const long n_rel = static_cast<long>(rel.count);
  const double me = params.electron_mass;
  const double mc = params.core_mass;
  const double total = params.total_mass();

  TwoParticleSlice slice;
  slice.grids = grids;
  slice.time_tag = t;
  slice.amplitudes.assign(ge.count * gc.count, complex{});

  // COM factor depends on both coordinates; evaluate it directly.
  double captured = 0.0;
  for (std::size_t i = 0; i < ge.count; ++i) {
    const double xe = ge.x(i);
    const long base = offset + static_cast<long>(i) * e_step;
    for (std::size_t m = 0; m < gc.count; ++m) {
      const long j = base - static_cast<long>(m) * c_step;
      if (j < 0 || j >= n_rel) continue;
      const complex rel_amp = relative_state[static_cast<std::size_t>(j)];
      if (rel_amp == complex{}) continue;
      const double X = (me * xe + mc * gc.x(m)) / total;
      const complex v = com_amplitude(X, t, com) * rel_amp;
      slice.at(i, m) = v;
      captured += std::norm(v);
    }
  }
  slice.captured_probability = captured * ge.spacing * gc.spacing;
  slice.truncated = slice.captured_probability < 0.99;
  if (1.0 - slice.captured_probability > options.max_deficit) {
    std::ostringstream msg;
    msg << "particle grids capture only " << slice.captured_probability
        << " of the two-particle probability at t = " << t;
    throw ConfigError(msg.str());
  }
  return slice;
}

std::vector<double> hermitian_eigenvalues(std::vector<complex> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("hermitian_eigenvalues: size mismatch");
  auto el = [&](std::size_t i, std::size_t j) -> complex& { return a[i * n + j]; };

  double total = 0.0;
  for (const auto& z : a) total += std::norm(z);
  constexpr int max_sweeps = 60;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(el(p, q));
    }
    if (off <= 1e-32 * total || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex g = el(p, q);
        const double mag = std::abs(g);
        if (mag == 0.0) continue;
        // Phase-rotate q so the pivot is real, then a real Jacobi rotation:
        // G = diag(1, e^{-i phi}) [[c, s], [-s, c]].
        const complex phase = g / mag;
        const double theta = (el(q, q).real() - el(p, p).real()) / (2.0 * mag);
        const double tan = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tan * tan + 1.0);
        const double s = tan * c;
        const complex g_pp = c;
        const complex g_pq = s;
        const complex g_qp = -s * std::conj(phase);
        const complex g_qq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const complex akp = el(k, p);
          const complex akq = el(k, q);
          el(k, p) = akp * g_pp + akq * g_qp;
          el(k, q) = akp * g_pq + akq * g_qq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const complex apk = el(p, k);
          const complex aqk = el(q, k);
          el(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
          el(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
        }
        el(p, q) = complex{};
        el(q, p) = complex{};
        el(p, p) = el(p, p).real();
        el(q, q) = el(q, q).real();
      }
    }
  }
  if (sweep == max_sweeps) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(el(p, q));
    }
    throw NumericalError("hermitian_eigenvalues: Jacobi sweeps did not converge", std::sqrt(off));
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = el(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

SchmidtSpectrum schmidt_spectrum(const TwoParticleSlice& slice) {
  const std::size_t rows = slice.rows();
  const std::size_t cols = slice.cols();
  if (rows == 0 || cols == 0 || slice.amplitudes.size() != rows * cols) {
    throw std::invalid_argument("schmidt_spectrum: degenerate slice");
  }
  const double weight = slice.grids.electron_axis.spacing * slice.grids.core_axis.spacing;

  // Gram matrix over the smaller dimension.
  const bool over_cols = cols <= rows;
  const std::size_t n = over_cols ? cols : rows;
  const std::size_t k_len = over_cols ? rows : cols;
  auto amp = [&](std::size_t k, std::size_t a) {
    return over_cols ? slice.at(k, a) : slice.at(a, k);
  };
  std::vector<complex> gram(n * n, complex{});
  for (std::size_t k = 0; k < k_len; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      const complex ca = std::conj(amp(k, a));
      if (ca == complex{}) continue;
      for (std::size_t b = a; b < n; ++b) gram[a * n + b] += ca * amp(k, b);
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      gram[a * n + b] *= weight;
      gram[b * n + a] = std::conj(gram[a * n + b]);
    }
    gram[a * n + a] = gram[a * n + a].real();
  }

  std::vector<double> eig = hermitian_eigenvalues(std::move(gram), n);
  for (auto& v : eig) v = std::max(v, 0.0);
  std::sort(eig.begin(), eig.end(), std::greater<>());

  SchmidtSpectrum spec;
  const double sum = std::accumulate(eig.begin(), eig.end(), 0.0);
  spec.truncation_deficit = 1.0 - sum;
  if (sum <= 0.0) return spec;
  for (auto& v : eig) v /= sum;
  spec.probabilities = std::move(eig);
  return spec;
}

double neumann_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p < 1e-14) continue;
    s -= p * std::log(p);
  }
  return s;
}

double neumann_entropy(const SchmidtSpectrum& spectrum) {
  return neumann_entropy(std::span<const double>(spectrum.probabilities));
}

EntropySample entropy_at(const ComplexField& relative_state, const ComGaussian& com, double t,
                         const ParticleGrids& grids, const PhysicalParams& params,
                         const AssemblyOptions& options) {
  const TwoParticleSlice slice =
      assemble_two_particle(relative_state, com, t, grids, params, options);
  EntropySample out;
  out.spectrum = schmidt_spectrum(slice);
  out.entropy = neumann_entropy(out.spectrum);
  out.captured_probability = slice.captured_probability;
  return out;
}

}  // namespace rescatter
