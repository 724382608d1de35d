#include <benchmark/benchmark.h>

#include <rescatter/entanglement.hpp>
#include <rescatter/propagator.hpp>
#include <rescatter/wigner.hpp>

using namespace rescatter;

namespace {

const PhysicalParams kParams = PhysicalParams::with_bound_energy(1.0, 1836.0, -0.5);

struct Prepared {
  NumerovOperators ops;
  ComplexField ground;

  explicit Prepared(double dx)
      : ops(assemble_operators(Grid1D::centered(600.0, dx), kParams)),
        ground(discrete_ground_state(ops).state) {}
};

const Prepared& prepared(double dx) {
  static const Prepared coarse(0.1);
  static const Prepared fine(0.05);
  return dx > 0.075 ? coarse : fine;
}

}  // namespace

// One Crank-Nicolson step on the default box; arg is 1/dx.
static void BM_Step(benchmark::State& state) {
  const auto& p = prepared(1.0 / static_cast<double>(state.range(0)));
  const LaserPulse pulse;
  ComplexField psi = p.ground;
  double t = 100.0;
  for (auto _ : state) {
    psi = step(p.ops, pulse, psi, t, 0.05);
    benchmark::DoNotOptimize(psi.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(psi.values.size()));
}
BENCHMARK(BM_Step)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);

// Default snapshot window; arg is the worker count.
static void BM_Wigner(benchmark::State& state) {
  const auto& p = prepared(0.1);
  const QWindow window{-80.0, 80.0, 321};
  for (auto _ : state) {
    auto w = wigner_transform(p.ground, window, 1024, static_cast<unsigned>(state.range(0)));
    benchmark::DoNotOptimize(w.values.data());
  }
}
BENCHMARK(BM_Wigner)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

// Assembly plus Schmidt spectrum on the default entropy grids.
static void BM_Entropy(benchmark::State& state) {
  const auto& p = prepared(0.05);
  const auto grids = ParticleGrids::defaults();
  for (auto _ : state) {
    auto s = entropy_at(p.ground, ComGaussian{}, 0.0, grids, kParams);
    benchmark::DoNotOptimize(s.entropy);
  }
}
BENCHMARK(BM_Entropy)->Unit(benchmark::kMillisecond);

// Jacobi eigensolver alone at the default Gram size and twice that.
static void BM_Jacobi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<complex> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = static_cast<double>(i) - static_cast<double>(j);
      m[i * n + j] = complex(std::exp(-0.1 * d * d), 0.01 * d);
    }
  }
  for (auto _ : state) {
    auto ev = hermitian_eigenvalues(m, n);
    benchmark::DoNotOptimize(ev.data());
  }
}
BENCHMARK(BM_Jacobi)->Arg(49)->Arg(98)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
