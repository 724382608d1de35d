#include "rescatter/wigner.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace rescatter {

namespace {

// FFTW planning touches global state; execution with private buffers does not.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer fftw_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

class BackwardPlan {
 public:
  explicit BackwardPlan(std::size_t n) : n_(n), in_(fftw_buffer(n)), out_(fftw_buffer(n)) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_BACKWARD,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fftw: could not create plan");
  }
  ~BackwardPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  BackwardPlan(const BackwardPlan&) = delete;
  BackwardPlan& operator=(const BackwardPlan&) = delete;

  fftw_complex* in() { return in_.get(); }
  const fftw_complex* out() const { return out_.get(); }
  void execute() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  FftwBuffer in_;
  FftwBuffer out_;
  fftw_plan plan_ = nullptr;
};

struct ColumnResult {
  double imaginary_residue = 0.0;
};

// Fills rows [first, last) of `w`.
ColumnResult fill_columns(const ComplexField& state, const std::vector<std::size_t>& q_index,
                          std::size_t half_points, std::size_t first, std::size_t last,
                          WignerGrid& w) {
  const std::size_t length = 2 * half_points + 1;
  const std::size_t n = state.grid.count;
  const double scale = state.grid.spacing / pi;
  BackwardPlan plan(length);
  ColumnResult result;

  auto sample = [&](long j) -> complex {
    if (j < 0 || j >= static_cast<long>(n)) return {};
    return state[static_cast<std::size_t>(j)];
  };

  for (std::size_t iq = first; iq < last; ++iq) {
    const long center = static_cast<long>(q_index[iq]);
    fftw_complex* in = plan.in();
    for (std::size_t mi = 0; mi <= half_points; ++mi) {
      const long m = static_cast<long>(mi);
      const complex f = std::conj(sample(center - m)) * sample(center + m);
      in[mi][0] = f.real();
      in[mi][1] = f.imag();
      if (mi > 0) {
        // f(-m) = conj(f(m)), stored at index L - m
        in[length - mi][0] = f.real();
        in[length - mi][1] = -f.imag();
      }
    }
    plan.execute();
    const fftw_complex* out = plan.out();
    // p index k in [-half, half] maps to FFT bin k mod L.
    for (std::size_t ip = 0; ip < length; ++ip) {
      const long k = static_cast<long>(ip) - static_cast<long>(half_points);
      const std::size_t bin = static_cast<std::size_t>(k < 0 ? k + static_cast<long>(length) : k);
      w.at(iq, ip) = scale * out[bin][0];
      result.imaginary_residue = std::max(result.imaginary_residue, scale * std::abs(out[bin][1]));
    }
  }
  return result;
}

}  // namespace

double WignerGrid::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double WignerGrid::min_value() const {
  return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

WignerGrid wigner_transform(const ComplexField& state, const QWindow& window,
                            std::size_t half_points, unsigned threads) {
  const Grid1D& grid = state.grid;
  if (window.count == 0) throw std::invalid_argument("wigner_transform: empty q window");
  if (half_points == 0) throw std::invalid_argument("wigner_transform: half width must be positive");
  if (window.count > 1 && !(window.max > window.min)) {
    throw std::invalid_argument("wigner_transform: q window must be increasing");
  }
  const double tol = 1e-9 * grid.spacing;
  if (window.min < grid.x_min - tol || window.max > grid.x_max() + tol) {
    throw std::invalid_argument("wigner_transform: q window escapes the state grid");
  }

  std::vector<std::size_t> q_index(window.count);
  for (std::size_t i = 0; i < window.count; ++i) {
    const double pos = (window.at(i) - grid.x_min) / grid.spacing;
    const double j = std::round(pos);
    if (std::abs(pos - j) > 1e-6) {
      throw std::invalid_argument("wigner_transform: q samples must coincide with grid points");
    }
    q_index[i] = static_cast<std::size_t>(j);
  }

  const std::size_t length = 2 * half_points + 1;
  WignerGrid w;
  w.q_values.resize(window.count);
  for (std::size_t i = 0; i < window.count; ++i) w.q_values[i] = grid.x(q_index[i]);
  w.q_spacing = window.count > 1 ? window.step() : grid.spacing;
  w.p_spacing = pi / (static_cast<double>(length) * grid.spacing);
  w.p_values.resize(length);
  for (std::size_t ip = 0; ip < length; ++ip) {
    w.p_values[ip] = (static_cast<double>(ip) - static_cast<double>(half_points)) * w.p_spacing;
  }
  w.values.assign(window.count * length, 0.0);

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(window.count)));
  if (workers == 1) {
    w.imaginary_residue = fill_columns(state, q_index, half_points, 0, window.count, w).imaginary_residue;
    return w;
  }

  std::vector<ColumnResult> partial(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (window.count + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
      const std::size_t first = t * chunk;
      const std::size_t last = std::min(window.count, first + chunk);
      if (first >= last) break;
      pool.emplace_back([&, t, first, last] {
        partial[t] = fill_columns(state, q_index, half_points, first, last, w);
      });
    }
  }
  for (const auto& r : partial) w.imaginary_residue = std::max(w.imaginary_residue, r.imaginary_residue);
  return w;
}

std::vector<double> position_marginal(const WignerGrid& w) {
  std::vector<double> out(w.nq(), 0.0);
  for (std::size_t iq = 0; iq < w.nq(); ++iq) {
    double s = 0.0;
    for (std::size_t ip = 0; ip < w.np(); ++ip) s += w.at(iq, ip);
    out[iq] = s * w.p_spacing;
  }
  return out;
}

std::vector<double> momentum_marginal(const WignerGrid& w) {
  std::vector<double> out(w.np(), 0.0);
  for (std::size_t iq = 0; iq < w.nq(); ++iq) {
    for (std::size_t ip = 0; ip < w.np(); ++ip) out[ip] += w.at(iq, ip);
  }
  for (auto& v : out) v *= w.q_spacing;
  return out;
}

double wigner_normalization(const WignerGrid& w) {
  double s = 0.0;
  for (double v : w.values) s += v;
  return s * w.q_spacing * w.p_spacing;
}

double purity(const WignerGrid& w) {
  double s = 0.0;
  for (double v : w.values) s += v * v;
  return 2.0 * pi * s * w.q_spacing * w.p_spacing;
}

}  // namespace rescatter
