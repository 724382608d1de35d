// Command-line driver: single runs, CEP sweeps and offline alignment analysis.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rescatter/analysis.hpp"
#include "rescatter/config.hpp"
#include "rescatter/errors.hpp"
#include "rescatter/runner.hpp"
#include "rescatter/series.hpp"

namespace {

using namespace rescatter;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string cep;
};

RunConfig resolve(const CommonFlags& flags) {
  RunConfig cfg = flags.config_path.empty() ? parse_config("") : load_config(flags.config_path);
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
  if (!flags.cep.empty()) {
    try {
      cfg.pulse.cep = parse_angle(flags.cep);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--cep: ") + e.what());
    }
  }
  return cfg;
}

void print_alignment(const AlignmentReport& a) {
  std::cout << "  window maxima: " << a.window_maxima << ", matched: " << a.window_matched;
  if (a.matched_fraction) {
    std::cout << " (fraction " << *a.matched_fraction << ")";
  } else {
    std::cout << " (fraction undefined)";
  }
  std::cout << ", max |offset| " << a.max_abs_offset << '\n';
}

void print_times(const char* label, const std::vector<double>& v) {
  std::cout << "  " << label << ':';
  for (double t : v) std::cout << ' ' << t;
  std::cout << '\n';
}

int cmd_run(const CommonFlags& flags, const std::vector<double>& snapshots, bool plot) {
  RunConfig cfg = resolve(flags);
  for (double t : snapshots) cfg.snapshot_times.push_back(t);
  if (plot) cfg.plot_script = true;
  cfg.validate();
  const RunResult r = run(cfg);
  std::cout << "run complete: " << cfg.output_dir.string() << '\n'
            << "  ground energy " << r.ground_energy << ", max norm drift " << r.max_norm_drift
            << ", max boundary leak " << r.max_boundary_leak << '\n';
  print_times("entropy maxima", r.maxima);
  print_times("zero crossings", r.zero_crossings);
  print_alignment(r.alignment);
  for (const auto& f : r.flags) std::cout << "  flag: " << f << '\n';
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& ceps, unsigned threads) {
  RunConfig cfg = resolve(flags);
  if (threads > 0) cfg.threads = threads;
  std::vector<double> list;
  try {
    list = parse_angle_list(ceps);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--ceps: ") + e.what());
  }
  if (list.empty()) throw ConfigError("--ceps: empty list");
  const SweepSummary s = sweep_cep(cfg, list);
  int worst = 0;
  for (const auto& e : s.entries) {
    std::cout << "cep " << e.cep << " -> " << e.directory.string();
    if (e.status != ExitStatus::ok) {
      std::cout << " FAILED: " << e.message << '\n';
      worst = std::max(worst, static_cast<int>(e.status));
      continue;
    }
    std::cout << '\n';
    print_alignment(e.result.alignment);
  }
  std::cout << "summary: " << s.summary_file.string() << '\n';
  return worst;
}

int cmd_analyze(const CommonFlags& flags, const std::string& entropy_path, double tolerance) {
  const RunConfig cfg = resolve(flags);
  const EntropySeries series = read_entropy_csv(entropy_path);
  if (series.size() < 3) throw ConfigError("analyze: need at least 3 samples");
  auto opts = AlignmentOptions::for_pulse(cfg.pulse);
  if (tolerance > 0.0) opts.tolerance = tolerance;
  const auto maxima = find_local_maxima(series);
  const auto crossings = zero_crossings(cfg.pulse);
  const auto report = alignment_report(maxima, crossings, opts);
  std::cout << "analysis of " << entropy_path << " (cep " << cfg.pulse.cep << ")\n";
  print_times("entropy maxima", maxima);
  print_times("zero crossings", crossings);
  for (const auto& p : report.pairs) {
    std::cout << "  pair: max " << p.maximum << " crossing " << p.crossing << " offset "
              << p.offset << '\n';
  }
  print_alignment(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-dimensional electron + ion-core rescattering simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, analyze_flags;
  auto add_common = [](CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "key = value configuration file");
    sub->add_option("--out", f.out_dir, "output directory (overrides output_dir)");
    sub->add_option("--cep", f.cep, "carrier-envelope phase in radians, e.g. -0.3pi");
  };

  auto* run_cmd = app.add_subcommand("run", "propagate one pulse and write entropy/Wigner output");
  add_common(run_cmd, run_flags);
  std::vector<double> snapshots;
  bool plot = false;
  run_cmd->add_option("--snapshot", snapshots, "time of a Wigner snapshot (repeatable)");
  run_cmd->add_flag("--plot-script", plot, "also write a matplotlib plot script");

  auto* sweep_cmd = app.add_subcommand("sweep", "run several CEPs into per-CEP directories");
  add_common(sweep_cmd, sweep_flags);
  std::string ceps = "0,0.3pi,-0.3pi";
  unsigned threads = 0;
  sweep_cmd->add_option("--ceps", ceps, "comma-separated CEP list")->capture_default_str();
  sweep_cmd->add_option("--threads", threads, "concurrent runs");

  auto* analyze_cmd = app.add_subcommand("analyze", "match entropy maxima to field zero crossings");
  add_common(analyze_cmd, analyze_flags);
  std::string entropy_path;
  double tolerance = 0.0;
  analyze_cmd->add_option("--entropy", entropy_path, "entropy.csv to analyze")->required();
  analyze_cmd->add_option("--tolerance", tolerance, "matching tolerance in a.u. (default 2.5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitStatus::config_error);
  }

  try {
    if (*run_cmd) return cmd_run(run_flags, snapshots, plot);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, ceps, threads);
    if (*analyze_cmd) return cmd_analyze(analyze_flags, entropy_path, tolerance);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(classify(e));
  }
  return 0;
}
