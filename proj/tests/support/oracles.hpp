#pragma once

// Reference computations for the tests. Nothing here calls into the library
// numerics: dense linear algebra comes from Eigen, closed forms are written
// out again from scratch.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline const double kPi = std::acos(-1.0);

inline std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {d(gen), d(gen)};
  return v;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Normalized Gaussian with position std sigma, mean position x0, mean momentum p.
inline cplx gaussian(double x, double x0, double sigma, double p = 0.0) {
  const double u = x - x0;
  return std::pow(2.0 * kPi * sigma * sigma, -0.25) * std::exp(-u * u / (4.0 * sigma * sigma)) *
         std::exp(cplx(0.0, p * u));
}

/// Free evolution of gaussian(x, x0, sigma, p) for a particle of mass m.
inline cplx free_gaussian(double x, double t, double x0, double sigma, double p, double m) {
  const cplx spread(1.0, t / (2.0 * m * sigma * sigma));
  const double u = x - x0 - p * t / m;
  return std::pow(2.0 * kPi * sigma * sigma, -0.25) / std::sqrt(spread) *
         std::exp(-u * u / (4.0 * sigma * sigma * spread) + cplx(0.0, p * (x - x0)) -
                  cplx(0.0, p * p * t / (2.0 * m)));
}

/// Bound level of a single-site delta well -strength/dx on the infinite
/// lattice with the Numerov-weighted potential. Away from the well the
/// solution is r^{|j|}; row 1 and row 0 close the system. Returns E by
/// bisection on the row-0 equation.
inline double lattice_delta_energy(double reduced_mass, double strength, double dx) {
  const double k = 1.0 / (2.0 * reduced_mass * dx * dx);
  const double v0 = -strength / dx;
  auto residual = [&](double e) {
    const double s = (2.0 * k - 10.0 * e / 12.0) / (k + e / 12.0);
    const double r = 0.5 * (s - std::sqrt(s * s - 4.0));
    const double c = 1.0 - v0 / (12.0 * k + e);  // psi_1 / r, with psi_0 = 1
    return -k * (2.0 * c * r - 2.0) + 10.0 / 12.0 * v0 - e * (2.0 * c * r + 10.0) / 12.0;
  };
  double lo = -0.5 * strength * strength * reduced_mass * 4.0;
  double hi = -1e-9;
  if (residual(lo) * residual(hi) > 0.0) throw std::runtime_error("lattice oracle: no bracket");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (residual(lo) * residual(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Dense symmetric form A^{-1} H~ = -A^{-1} B / (2 mu) + diag(V) on the
/// interior points of an n-point grid with hard walls.
inline Eigen::MatrixXd dense_numerov_hamiltonian(const std::vector<double>& potential, double dx,
                                                 double reduced_mass) {
  const Eigen::Index n = static_cast<Eigen::Index>(potential.size()) - 2;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 10.0 / 12.0;
    b(i, i) = -2.0 / (dx * dx);
    if (i + 1 < n) {
      a(i, i + 1) = a(i + 1, i) = 1.0 / 12.0;
      b(i, i + 1) = b(i + 1, i) = 1.0 / (dx * dx);
    }
  }
  Eigen::MatrixXd h = -a.inverse() * b / (2.0 * reduced_mass);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) += potential[static_cast<std::size_t>(i) + 1];
  return 0.5 * (h + h.transpose());
}

inline double dense_lowest_eigenvalue(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Squared singular values of a row-major rows x cols matrix, descending.
inline std::vector<double> squared_singular_values(const std::vector<cplx>& m, std::size_t rows,
                                                   std::size_t cols) {
  Eigen::MatrixXcd a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = m[i * cols + j];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    out.push_back(svd.singularValues()(k) * svd.singularValues()(k));
  }
  return out;
}

/// Schmidt ratio of exp(-u^2/(2a^2) - v^2/(2b^2)) with u, v the rotated
/// coordinates (x1 +- x2)/sqrt(2): p_k = (1 - lambda) lambda^k.
inline double gaussian_schmidt_ratio(double a, double b) {
  const double r = (a - b) / (a + b);
  return r * r;
}

inline double entropy_of_geometric(double lambda) {
  if (lambda <= 0.0) return 0.0;
  return -std::log(1.0 - lambda) - lambda / (1.0 - lambda) * std::log(lambda);
}

/// Direct O(n^2) Wigner sum at one (q_index, p) for a sampled state.
inline double direct_wigner(const std::vector<cplx>& psi, double dx, std::size_t q_index,
                            long half_points, double p) {
  const long n = static_cast<long>(psi.size());
  const long j = static_cast<long>(q_index);
  cplx sum = 0.0;
  for (long m = -half_points; m <= half_points; ++m) {
    const long lo = j - m;
    const long hi = j + m;
    if (lo < 0 || lo >= n || hi < 0 || hi >= n) continue;
    sum += std::conj(psi[lo]) * psi[hi] * std::exp(cplx(0.0, 2.0 * p * m * dx));
  }
  return (sum * dx / kPi).real();
}

}  // namespace oracle
