#include "rescatter/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "rescatter/entanglement.hpp"
#include "rescatter/errors.hpp"
#include "rescatter/snapshot.hpp"
#include "text_format.hpp"

namespace rescatter {

using detail::shortest;

ExitStatus classify(const std::exception& e) {
  if (dynamic_cast<const BoxTooSmallError*>(&e)) return ExitStatus::box_too_small;
  if (dynamic_cast<const NumericalError*>(&e)) return ExitStatus::numerical_failure;
  if (dynamic_cast<const ConfigError*>(&e)) return ExitStatus::config_error;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return ExitStatus::config_error;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return ExitStatus::config_error;
  return ExitStatus::numerical_failure;
}

RunResult simulate(const RunConfig& config) {
  config.validate();
  const Grid1D grid = config.relative_grid();
  const NumerovOperators ops = assemble_operators(grid, config.physical);
  const GroundState ground = discrete_ground_state(ops);
  const ComGaussian com = config.com();
  const double dt = config.dt;
  const double t_end = config.end_time();

  RunResult result;
  result.ground_energy = ground.energy;
  result.zero_crossings = zero_crossings(config.pulse);

  const long entropy_stride = std::lround(config.entropy_cadence / dt);
  std::set<long> snapshot_steps;
  for (double t : config.snapshot_times) snapshot_steps.insert(std::lround(t / dt));
  const long last_step = std::lround(t_end / dt);

  AssemblyOptions assembly;
  assembly.max_deficit = config.max_capture_deficit;

  PropagationOptions prop;
  prop.observe_every = dt;
  prop.leak_margin = config.leak_margin;
  prop.leak_threshold = config.leak_threshold;

  auto observer = [&](double t, const ComplexField& psi, const StepDiagnostics& d) {
    const long n = std::lround(t / dt);
    result.max_norm_drift = std::max(result.max_norm_drift, std::abs(d.norm - 1.0));
    result.max_boundary_leak = std::max(result.max_boundary_leak, d.boundary_leak);

    if (n % entropy_stride == 0 || n == last_step) {
      const EntropySample s = entropy_at(psi, com, t, config.entropy_grids, config.physical, assembly);
      result.series.push_back(t, d.field_value, s.entropy, d.norm, s.spectrum.truncation_deficit);
      result.diagnostics.push_back({d, s.captured_probability});
      if (s.captured_probability < 0.99) {
        result.flags.push_back("captured probability " + shortest(s.captured_probability) +
                               " at t = " + shortest(t));
      }
      if (s.spectrum.truncation_deficit >= 1e-2) {
        result.flags.push_back("truncation deficit " + shortest(s.spectrum.truncation_deficit) +
                               " at t = " + shortest(t));
      }
    }
    if (snapshot_steps.contains(n)) {
      WignerGrid w = wigner_transform(psi, config.wigner_window, config.wigner_half_points,
                                      config.threads);
      w.time_tag = t;
      result.snapshots.push_back(std::move(w));
    }
  };

  propagate(ops, config.pulse, ground.state, dt, t_end, prop, observer);

  result.maxima = find_local_maxima(result.series);
  result.alignment = alignment_report(result.maxima, result.zero_crossings,
                                      AlignmentOptions::for_pulse(config.pulse));
  return result;
}

namespace {

std::string join(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += sep;
    out += shortest(v[i]);
  }
  return out;
}

void write_report(const std::filesystem::path& path, const RunConfig& config, const RunResult& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  const auto opts = AlignmentOptions::for_pulse(config.pulse);
  out << "cep = " << shortest(config.pulse.cep) << '\n'
      << "amplitude = " << shortest(config.pulse.amplitude) << '\n'
      << "ground_energy = " << shortest(r.ground_energy) << '\n'
      << "max_norm_drift = " << shortest(r.max_norm_drift) << '\n'
      << "max_boundary_leak = " << shortest(r.max_boundary_leak) << '\n'
      << "zero_crossings = " << join(r.zero_crossings, ' ') << '\n'
      << "entropy_maxima = " << join(r.maxima, ' ') << '\n'
      << "window = " << shortest(opts.window_begin) << ' ' << shortest(opts.window_end) << '\n'
      << "tolerance = " << shortest(opts.tolerance) << '\n'
      << "window_maxima = " << r.alignment.window_maxima << '\n'
      << "window_matched = " << r.alignment.window_matched << '\n'
      << "matched_fraction = "
      << (r.alignment.matched_fraction ? shortest(*r.alignment.matched_fraction) : "undefined")
      << '\n'
      << "max_abs_offset = " << shortest(r.alignment.max_abs_offset) << '\n';
  for (const auto& p : r.alignment.pairs) {
    out << "pair = " << shortest(p.maximum) << ' ' << shortest(p.crossing) << ' '
        << shortest(p.offset) << '\n';
  }
  for (const auto& f : r.flags) out << "flag = " << f << '\n';
}

void write_plot_script(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << R"PY(#!/usr/bin/env python3
"""Plot entropy.csv and any wigner_t*.dat snapshots in this directory."""
import glob
import os

import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))
data = np.genfromtxt(os.path.join(here, "entropy.csv"), delimiter=",", names=True)
fig, (top, bottom) = plt.subplots(2, 1, sharex=True)
top.plot(data["time"], data["entropy"])
top.set_ylabel("entropy (nats)")
bottom.plot(data["time"], data["field"])
bottom.set_ylabel("field (a.u.)")
bottom.set_xlabel("time (a.u.)")
fig.savefig(os.path.join(here, "entropy.png"), dpi=150)

for name in sorted(glob.glob(os.path.join(here, "wigner_t*.dat"))):
    header = {}
    with open(name) as f:
        for line in f:
            if not line.startswith("#"):
                break
            key, value = line[1:].split("=")
            header[key.strip()] = float(value)
    w = np.loadtxt(name, comments="#")
    lim = np.abs(w).max()
    plt.figure()
    plt.imshow(w.T, origin="lower", aspect="auto", cmap="gray", vmin=-lim, vmax=lim,
               extent=[header["q_min"], header["q_max"], header["p_min"], header["p_max"]])
    plt.xlabel("q (a.u.)")
    plt.ylabel("p (a.u.)")
    plt.title("t = %g" % header["t"])
    plt.savefig(name.replace(".dat", ".png"), dpi=150)
)PY";
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult r = simulate(config);
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);

  write_entropy_csv(dir / "entropy.csv", r.series);
  r.files.push_back(dir / "entropy.csv");
  write_diagnostics_csv(dir / "diagnostics.csv", r.diagnostics);
  r.files.push_back(dir / "diagnostics.csv");
  for (const auto& w : r.snapshots) {
    const auto path = dir / snapshot_file_name(w.time_tag);
    write_wigner_snapshot(path, w, config.pulse.cep);
    r.files.push_back(path);
  }
  write_report(dir / "report.txt", config, r);
  r.files.push_back(dir / "report.txt");
  if (config.plot_script) {
    write_plot_script(dir / "plot.py");
    r.files.push_back(dir / "plot.py");
  }
  return r;
}

std::string sweep_directory_name(std::size_t index, double cep) {
  std::ostringstream name;
  name << "cep_" << index << '_' << shortest(cep);
  return name.str();
}

bool SweepSummary::all_ok() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const SweepEntry& e) { return e.status == ExitStatus::ok; });
}

SweepSummary sweep_cep(const RunConfig& config, const std::vector<double>& ceps) {
  if (ceps.empty()) throw std::invalid_argument("sweep_cep: empty CEP list");
  config.validate();

  SweepSummary summary;
  summary.entries.resize(ceps.size());
  for (std::size_t i = 0; i < ceps.size(); ++i) {
    summary.entries[i].cep = ceps[i];
    summary.entries[i].directory = config.output_dir / sweep_directory_name(i, ceps[i]);
  }

  // Each run gets one worker; Wigner column threading stays off inside a sweep.
  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(ceps.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ceps.size(); i = next++) {
      SweepEntry& e = summary.entries[i];
      RunConfig c = config;
      c.pulse.cep = e.cep;
      c.output_dir = e.directory;
      c.threads = 1;
      try {
        e.result = run(c);
      } catch (const std::exception& ex) {
        e.status = classify(ex);
        e.message = ex.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }

  std::filesystem::create_directories(config.output_dir);
  summary.summary_file = config.output_dir / "summary.csv";
  std::ofstream out(summary.summary_file);
  if (!out) throw std::runtime_error("cannot write '" + summary.summary_file.string() + "'");
  out << "cep,directory,status,initial_entropy,final_entropy,window_maxima,window_matched,"
         "matched_fraction,max_abs_offset,zero_crossings,entropy_maxima,message\n";
  for (const auto& e : summary.entries) {
    out << shortest(e.cep) << ',' << e.directory.filename().string() << ','
        << static_cast<int>(e.status) << ',';
    const auto& s = e.result.series;
    if (e.status == ExitStatus::ok && s.size() > 0) {
      const auto& a = e.result.alignment;
      out << shortest(s.entropy.front()) << ',' << shortest(s.entropy.back()) << ','
          << a.window_maxima << ',' << a.window_matched << ','
          << (a.matched_fraction ? shortest(*a.matched_fraction) : "undefined") << ','
          << shortest(a.max_abs_offset) << ',';
    } else {
      out << ",,,,,,";
    }
    std::string message = e.message;
    std::replace(message.begin(), message.end(), ',', ';');
    std::replace(message.begin(), message.end(), '\n', ' ');
    out << join(zero_crossings(LaserPulse{config.pulse.amplitude, config.pulse.carrier_period,
                                          config.pulse.cycles, e.cep}),
                ';')
        << ',' << join(e.result.maxima, ';') << ',' << message << '\n';
  }
  return summary;
}

}  // namespace rescatter
