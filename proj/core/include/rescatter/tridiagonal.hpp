#pragma once

#include <complex>
#include <span>
#include <vector>

namespace rescatter {

/// Banded N x N matrix: lower[i] = A(i+1, i), diagonal[i] = A(i, i),
/// upper[i] = A(i, i+1).
struct TridiagonalSystem {
  std::vector<std::complex<double>> lower;
  std::vector<std::complex<double>> diagonal;
  std::vector<std::complex<double>> upper;

  TridiagonalSystem() = default;
  explicit TridiagonalSystem(std::size_t n)
      : lower(n > 0 ? n - 1 : 0), diagonal(n), upper(n > 0 ? n - 1 : 0) {}

  std::size_t size() const { return diagonal.size(); }

  /// Throws std::invalid_argument when the band lengths disagree.
  void check() const;

  /// y = A x
  void multiply(std::span<const std::complex<double>> x,
                std::span<std::complex<double>> y) const;
};

/// Thomas algorithm. Throws NumericalError on a zero pivot.
std::vector<std::complex<double>> solve_tridiagonal(const TridiagonalSystem& sys,
                                                    std::span<const std::complex<double>> rhs);

/// Allocation-free variant: `x` receives the solution, `scratch` must hold at
/// least N entries. `x` may alias `rhs`.
void solve_tridiagonal(const TridiagonalSystem& sys, std::span<const std::complex<double>> rhs,
                       std::span<std::complex<double>> x,
                       std::span<std::complex<double>> scratch);

}  // namespace rescatter
