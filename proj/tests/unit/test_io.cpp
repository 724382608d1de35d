#include "doctest.h"
#include "oracles.hpp"

#include <rescatter/analysis.hpp>
#include <rescatter/config.hpp>
#include <rescatter/errors.hpp>
#include <rescatter/runner.hpp>
#include <rescatter/series.hpp>
#include <rescatter/snapshot.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace rescatter;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rescatter_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string config_error(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

// A short, light run: weak pulse in a 200 a.u. box.
RunConfig small_config(const fs::path& out) {
  RunConfig c = parse_config(
      "amplitude = 0.02\n"
      "box = 200\n"
      "electron_half_width = 150\n"
      "wigner_q_min = -20\n"
      "wigner_q_max = 20\n"
      "wigner_half_points = 256\n");
  c.output_dir = out;
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("empty config yields the defaults") {
  const auto c = parse_config("");
  CHECK(c.pulse.carrier_period == 100.0);
  CHECK(c.pulse.cycles == 3);
  CHECK(c.pulse.cep == 0.0);
  CHECK(c.pulse.amplitude == 0.1);
  CHECK(c.box_half_width == 600.0);
  CHECK(c.dx == 0.05);
  CHECK(c.dt == 0.05);
  CHECK(c.end_time() == 300.0);
  CHECK(c.entropy_cadence == 5.0);
  CHECK(c.physical.core_mass == 1836.0);
  CHECK(c.physical.delta_strength == doctest::Approx(1.0002723).epsilon(1e-7));
  CHECK(c.entropy_grids.electron_axis.count == 4801);
  CHECK(c.entropy_grids.core_axis.count == 49);
  CHECK(c.wigner_window.count == 321);
  CHECK(c.wigner_half_points == 1024);
  CHECK(c.snapshot_times.empty());
}

TEST_CASE("config values and comments") {
  const auto c = parse_config(
      "# driver settings\n"
      "cep = -0.9424778   # dashed curve\n"
      "\n"
      "amplitude=0.05\n"
      "snapshot_times = 165, 200\n"
      "plot_script = yes\n");
  CHECK(c.pulse.cep == doctest::Approx(-0.3 * pi).epsilon(1e-7));
  CHECK(c.pulse.amplitude == 0.05);
  CHECK(c.snapshot_times == std::vector<double>{165.0, 200.0});
  CHECK(c.plot_script);
  CHECK(parse_config("cep = -0.3pi").pulse.cep == doctest::Approx(-0.3 * pi).epsilon(1e-15));
  CHECK(parse_angle("pi") == pi);
  CHECK(parse_angle("-pi") == -pi);
  CHECK(parse_angle("0.5*pi") == doctest::Approx(0.5 * pi).epsilon(1e-15));
  CHECK(parse_angle_list("0, 0.3pi ,-0.3pi").size() == 3);
  CHECK_THROWS_AS(parse_angle("half"), std::invalid_argument);
}

TEST_CASE("config errors name the key and line") {
  const auto dt = config_error("dt = -0.1");
  CHECK(dt.find("'dt'") != std::string::npos);
  CHECK(dt.find("line 1") != std::string::npos);

  const auto unknown = config_error("# header\nperiod = 100\nfrequency = 3\n");
  CHECK(unknown.find("'frequency'") != std::string::npos);
  CHECK(unknown.find("line 3") != std::string::npos);

  const auto bad_number = config_error("amplitude = strong");
  CHECK(bad_number.find("'amplitude'") != std::string::npos);

  CHECK(config_error("snapshot_times = 400").find("'snapshot_times'") != std::string::npos);
  CHECK(config_error("entropy_cadence = 5.01").find("'entropy_cadence'") != std::string::npos);
  CHECK(config_error("cycles = 2.5").find("'cycles'") != std::string::npos);
  CHECK(config_error("dx = 0.1").find("'electron_spacing'") != std::string::npos);
  CHECK(config_error("no equals sign").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), ConfigError);
}

TEST_CASE("entropy CSV round trip is exact") {
  EntropySeries s;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) s.push_back(5.0 * i, d(gen), std::abs(d(gen)) * 3.0, 1.0 + 1e-14 * d(gen), d(gen) * 1e-3);
  std::stringstream buf;
  write_entropy_csv(buf, s);
  CHECK(buf.str().rfind("time,field,entropy,norm,deficit\n", 0) == 0);
  const auto back = read_entropy_csv(buf);
  CHECK(back.times == s.times);
  CHECK(back.field == s.field);
  CHECK(back.entropy == s.entropy);
  CHECK(back.norm == s.norm);
  CHECK(back.deficit == s.deficit);
  CHECK(back.consistent());

  std::stringstream bad("time,field,entropy,norm,deficit\n0,1,2\n");
  CHECK_THROWS_AS(read_entropy_csv(bad), ConfigError);
  std::stringstream header("t,e\n");
  CHECK_THROWS_AS(read_entropy_csv(header), ConfigError);
  std::stringstream backwards("time,field,entropy,norm,deficit\n5,0,0,1,0\n0,0,0,1,0\n");
  CHECK_THROWS_AS(read_entropy_csv(backwards), ConfigError);
}

TEST_CASE("Wigner snapshot round trip") {
  WignerGrid w;
  w.q_values = {-1.0, -0.5, 0.0, 0.5, 1.0};
  w.p_values = {-0.3, 0.0, 0.3};
  w.q_spacing = 0.5;
  w.p_spacing = 0.3;
  w.time_tag = 165.0;
  std::mt19937_64 gen(9);
  std::normal_distribution<double> d;
  for (int i = 0; i < 15; ++i) w.values.push_back(d(gen));

  std::stringstream buf;
  write_wigner_snapshot(buf, w, -0.3 * pi);
  const std::string text = buf.str();
  for (const char* key : {"# t = 165\n", "# cep = ", "# q_min = -1\n", "# q_max = 1\n", "# nq = 5\n",
                          "# p_min = -0.3\n", "# p_max = 0.3\n", "# np = 3\n"}) {
    CHECK(text.find(key) != std::string::npos);
  }
  const auto back = read_wigner_snapshot(buf);
  CHECK(back.cep == -0.3 * pi);
  CHECK(back.grid.time_tag == 165.0);
  CHECK(back.grid.values == w.values);
  CHECK(back.grid.nq() == 5);
  CHECK(back.grid.np() == 3);
  CHECK(back.grid.q_values.front() == -1.0);
  CHECK(back.grid.p_values.back() == 0.3);

  std::stringstream truncated("# t = 1\n# cep = 0\n# q_min = 0\n# q_max = 1\n# nq = 2\n# p_min = 0\n# p_max = 1\n# np = 2\n1 2\n");
  CHECK_THROWS_AS(read_wigner_snapshot(truncated), ConfigError);
  std::stringstream missing("# t = 1\n1 2\n");
  CHECK_THROWS_AS(read_wigner_snapshot(missing), ConfigError);

  CHECK(snapshot_file_name(165.0) == "wigner_t165.dat");
  CHECK(snapshot_file_name(162.5) == "wigner_t162.5.dat");
}

TEST_CASE("local maxima") {
  CHECK(find_local_maxima({0, 5, 10}, {0, 1, 0}) == std::vector<double>{5.0});
  CHECK(find_local_maxima({0, 5, 10, 15}, {0, 1, 2, 3}).empty());
  CHECK(find_local_maxima({0, 5}, {0, 1}).empty());
  CHECK(find_local_maxima({0, 5, 10, 15, 20}, {0, 2, 2, 2, 1}) == std::vector<double>{10.0});
  CHECK(find_local_maxima({0, 5, 10, 15}, {0, 2, 2, 3}).empty());

  std::vector<double> t, v;
  for (int i = 0; i <= 60; ++i) {
    t.push_back(5.0 * i);
    v.push_back(std::pow(std::sin(2.0 * pi * t.back() / 50.0), 2));
  }
  const auto peaks = find_local_maxima(t, v);
  REQUIRE(peaks.size() == 12);
  for (std::size_t k = 0; k < peaks.size(); ++k) CHECK(std::abs(peaks[k] - (12.5 + 25.0 * k)) <= 0.5);
}

TEST_CASE("alignment of maxima with zero crossings") {
  AlignmentOptions opts;
  opts.tolerance = 2.0;
  const auto r = alignment_report({75, 125}, {75, 125, 175}, opts);
  REQUIRE(r.matched_fraction);
  CHECK(*r.matched_fraction == 1.0);
  REQUIRE(r.pairs.size() == 2);
  CHECK(r.pairs[0].offset == 0.0);
  CHECK(r.pairs[1].offset == 0.0);
  CHECK(r.max_abs_offset == 0.0);

  const auto none = alignment_report({}, {25, 75}, opts);
  CHECK_FALSE(none.matched_fraction);
  CHECK(none.pairs.empty());

  // One crossing, two candidates: the closer maximum wins, the other stays unmatched.
  const auto contested = alignment_report({74.0, 76.5}, {75.0}, AlignmentOptions{});
  REQUIRE(contested.pairs.size() == 1);
  CHECK(contested.pairs[0].maximum == 74.0);
  CHECK(contested.unmatched_maxima == std::vector<double>{76.5});
  CHECK(*contested.matched_fraction == 0.5);

  // Maxima outside the central window do not count toward the fraction.
  const auto edges = alignment_report({10.0, 124.0, 290.0}, {25, 75, 125, 175, 225, 275}, AlignmentOptions{});
  CHECK(edges.window_maxima == 1);
  CHECK(*edges.matched_fraction == 1.0);

  const auto w = AlignmentOptions::for_pulse(LaserPulse{});
  CHECK(w.window_begin == 50.0);
  CHECK(w.window_end == 250.0);
  CHECK(w.tolerance == 2.5);
}

TEST_CASE("exit status classification") {
  CHECK(classify(ConfigError("x")) == ExitStatus::config_error);
  CHECK(classify(std::invalid_argument("x")) == ExitStatus::config_error);
  CHECK(classify(NumericalError("x", 1.0)) == ExitStatus::numerical_failure);
  CHECK(classify(BoxTooSmallError("x", 1.0, 0.5)) == ExitStatus::box_too_small);
}

TEST_CASE("default run writes the documented files") {
  const auto dir = scratch_dir("default_run");
  RunConfig c = parse_config("snapshot_times = 165");
  c.output_dir = dir;
  const auto r = run(c);

  CHECK(r.max_norm_drift <= 1e-10);
  const auto series = read_entropy_csv(dir / "entropy.csv");
  CHECK(series.size() == 61);
  CHECK(series.consistent());
  CHECK(series.times == r.series.times);
  CHECK(series.entropy == r.series.entropy);
  CHECK(series.field == r.series.field);
  CHECK(series.norm == r.series.norm);
  CHECK(series.deficit == r.series.deficit);
  CHECK(series.times.back() == 300.0);

  REQUIRE(fs::exists(dir / "wigner_t165.dat"));
  const auto snap = read_wigner_snapshot(dir / "wigner_t165.dat");
  CHECK(snap.grid.time_tag == 165.0);
  CHECK(snap.cep == 0.0);
  CHECK(snap.grid.nq() == 321);
  CHECK(snap.grid.np() == 2049);
  CHECK(snap.grid.values == r.snapshots.at(0).values);
  CHECK(fs::exists(dir / "diagnostics.csv"));
  CHECK(fs::exists(dir / "report.txt"));
  CHECK_FALSE(fs::exists(dir / "plot.py"));
}

TEST_CASE("field-free run keeps the entropy constant") {
  RunConfig c = parse_config("amplitude = 0");
  const auto r = simulate(c);
  REQUIRE(r.series.size() == 61);
  const double s0 = r.series.entropy.front();
  double worst = 0.0;
  for (double s : r.series.entropy) worst = std::max(worst, std::abs(s - s0));
  INFO("max deviation " << worst);
  CHECK(worst <= 5e-3);
  CHECK(r.zero_crossings.empty());
}

TEST_CASE("sweeps are deterministic and match single runs") {
  const auto dir = scratch_dir("sweep");
  const RunConfig c = small_config(dir);
  const auto summary = sweep_cep(c, {0.3 * pi, 0.3 * pi});
  REQUIRE(summary.all_ok());
  const auto& a = summary.entries[0].result.series;
  const auto& b = summary.entries[1].result.series;
  CHECK(a.entropy == b.entropy);
  CHECK(a.field == b.field);
  CHECK(read_file(summary.entries[0].directory / "entropy.csv") ==
        read_file(summary.entries[1].directory / "entropy.csv"));
  CHECK(summary.entries[0].directory != summary.entries[1].directory);

  // The summary's zero-crossing column reproduces zero_crossings exactly.
  std::ifstream in(summary.summary_file);
  std::string header, line;
  std::getline(in, header);
  CHECK(header.rfind("cep,directory,status,", 0) == 0);
  std::getline(in, line);
  std::vector<std::string> fields;
  std::stringstream ls(line);
  for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
  REQUIRE(fields.size() >= 10);
  std::vector<double> crossings;
  std::stringstream cs(fields[9]);
  for (std::string f; std::getline(cs, f, ';');) crossings.push_back(std::stod(f));
  LaserPulse pulse = c.pulse;
  pulse.cep = 0.3 * pi;
  CHECK(crossings == zero_crossings(pulse));

  const auto single_dir = scratch_dir("single");
  RunConfig one = small_config(single_dir);
  one.pulse.cep = 0.3 * pi;
  const auto direct = run(one);
  CHECK(direct.series.entropy == a.entropy);

  const auto lone = sweep_cep(small_config(scratch_dir("lone")), {0.3 * pi});
  REQUIRE(lone.entries.size() == 1);
  CHECK(lone.entries[0].result.series.entropy == direct.series.entropy);

  CHECK_THROWS_AS(sweep_cep(c, {}), std::invalid_argument);
}

TEST_CASE("failing sweep runs are recorded") {
  const auto dir = scratch_dir("sweep_fail");
  RunConfig c = small_config(dir);
  c.leak_threshold = 1e-12;
  const auto summary = sweep_cep(c, {0.0, pi});
  CHECK_FALSE(summary.all_ok());
  for (const auto& e : summary.entries) {
    CHECK(e.status == ExitStatus::box_too_small);
    CHECK_FALSE(e.message.empty());
  }
  CHECK(fs::exists(summary.summary_file));
}

#ifdef RESCATTER_CLI_PATH

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(RESCATTER_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("command-line exit codes") {
  const auto dir = scratch_dir("cli");
  write_text(dir / "bad.cfg", "dt = -0.1\n");
  CHECK(cli("run --config " + (dir / "bad.cfg").string()) == 1);
  CHECK(cli("run --config " + (dir / "missing.cfg").string()) == 1);
  CHECK(cli("run --bogus") == 1);
  CHECK(cli("") == 1);
  CHECK(cli("run --cep banana") == 1);

  write_text(dir / "tiny.cfg", "box = 60\nelectron_half_width = 30\nleak_margin = 10\nleak_threshold = 1e-9\n"
                               "wigner_q_min = -10\nwigner_q_max = 10\n");
  CHECK(cli("run --config " + (dir / "tiny.cfg").string() + " --out " + (dir / "tiny").string()) == 3);

  write_text(dir / "entropy.csv", "time,field,entropy,norm,deficit\n0,0,0,1,0\n5,0,1,1,0\n10,0,0,1,0\n");
  CHECK(cli("analyze --entropy " + (dir / "entropy.csv").string()) == 0);
  CHECK(cli("analyze --entropy " + (dir / "nothing.csv").string()) == 1);
  CHECK(cli("analyze") == 1);

  write_text(dir / "small.cfg", "amplitude = 0.02\nbox = 200\nelectron_half_width = 150\nt_end = 50\n"
                                "wigner_q_min = -20\nwigner_q_max = 20\nwigner_half_points = 256\n");
  const auto out = dir / "small";
  CHECK(cli("run --config " + (dir / "small.cfg").string() + " --out " + out.string() +
            " --cep -0.3pi --snapshot 25 --plot-script") == 0);
  CHECK(fs::exists(out / "entropy.csv"));
  CHECK(fs::exists(out / "wigner_t25.dat"));
  CHECK(fs::exists(out / "plot.py"));
  CHECK(read_wigner_snapshot(out / "wigner_t25.dat").cep == doctest::Approx(-0.3 * pi).epsilon(1e-15));
}

#endif
