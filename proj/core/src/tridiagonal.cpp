#include "rescatter/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rescatter/errors.hpp"

namespace rescatter {

using cplx = std::complex<double>;

void TridiagonalSystem::check() const {
  const std::size_t n = diagonal.size();
  const std::size_t off = n > 0 ? n - 1 : 0;
  if (lower.size() != off || upper.size() != off) {
    throw std::invalid_argument("tridiagonal system: band lengths are inconsistent");
  }
}

void TridiagonalSystem::multiply(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) {
    throw std::invalid_argument("tridiagonal multiply: vector length mismatch");
  }
  if (n == 0) return;
  if (n == 1) {
    y[0] = diagonal[0] * x[0];
    return;
  }
  y[0] = diagonal[0] * x[0] + upper[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = lower[i - 1] * x[i - 1] + diagonal[i] * x[i] + upper[i] * x[i + 1];
  }
  y[n - 1] = lower[n - 2] * x[n - 2] + diagonal[n - 1] * x[n - 1];
}

void solve_tridiagonal(const TridiagonalSystem& sys, std::span<const cplx> rhs,
                       std::span<cplx> x, std::span<cplx> scratch) {
  sys.check();
  const std::size_t n = sys.size();
  if (rhs.size() != n || x.size() != n || scratch.size() < n) {
    throw std::invalid_argument("solve_tridiagonal: vector length mismatch");
  }
  if (n == 0) return;

  auto pivot_check = [](cplx pivot, std::size_t row) {
    if (pivot == cplx{} || !std::isfinite(std::abs(pivot))) {
      throw NumericalError("solve_tridiagonal: zero pivot at row " + std::to_string(row));
    }
  };

  // Forward sweep; scratch holds the modified super-diagonal.
  cplx pivot = sys.diagonal[0];
  pivot_check(pivot, 0);
  if (n > 1) scratch[0] = sys.upper[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = sys.diagonal[i] - sys.lower[i - 1] * scratch[i - 1];
    pivot_check(pivot, i);
    if (i + 1 < n) scratch[i] = sys.upper[i] / pivot;
    x[i] = (rhs[i] - sys.lower[i - 1] * x[i - 1]) / pivot;
  }

  // Back substitution
  for (std::size_t i = n - 1; i > 0; --i) {
    x[i - 1] -= scratch[i - 1] * x[i];
  }
}

std::vector<cplx> solve_tridiagonal(const TridiagonalSystem& sys, std::span<const cplx> rhs) {
  std::vector<cplx> x(rhs.size());
  std::vector<cplx> scratch(rhs.size());
  solve_tridiagonal(sys, rhs, x, scratch);
  return x;
}

}  // namespace rescatter
