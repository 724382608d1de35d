#include "rescatter/series.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rescatter/errors.hpp"
#include "text_format.hpp"

namespace rescatter {

namespace {

using detail::shortest;

constexpr const char* kEntropyHeader = "time,field,entropy,norm,deficit";

}  // namespace

void EntropySeries::push_back(double t, double e_field, double s, double n, double d) {
  times.push_back(t);
  field.push_back(e_field);
  entropy.push_back(s);
  norm.push_back(n);
  deficit.push_back(d);
}

bool EntropySeries::consistent() const {
  const std::size_t n = times.size();
  if (field.size() != n || entropy.size() != n || this->norm.size() != n || deficit.size() != n) {
    return false;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(times[i] > times[i - 1])) return false;
  }
  return true;
}

void write_entropy_csv(std::ostream& out, const EntropySeries& s) {
  out << kEntropyHeader << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << shortest(s.times[i]) << ',' << shortest(s.field[i]) << ',' << shortest(s.entropy[i]) << ','
        << shortest(s.norm[i]) << ',' << shortest(s.deficit[i]) << '\n';
  }
}

void write_entropy_csv(const std::filesystem::path& path, const EntropySeries& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_entropy_csv(out, series);
}

EntropySeries read_entropy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("entropy csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kEntropyHeader) throw ConfigError("entropy csv: unexpected header '" + line + "'");

  EntropySeries s;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v[5];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 5; ++k) {
      const auto [next, ec] = std::from_chars(p, end, v[k]);
      if (ec != std::errc{}) {
        throw ConfigError("entropy csv line " + std::to_string(line_no) + ": bad number");
      }
      p = next;
      if (k < 4) {
        if (p == end || *p != ',') {
          throw ConfigError("entropy csv line " + std::to_string(line_no) + ": expected 5 columns");
        }
        ++p;
      }
    }
    if (p != end) throw ConfigError("entropy csv line " + std::to_string(line_no) + ": trailing data");
    s.push_back(v[0], v[1], v[2], v[3], v[4]);
  }
  if (!s.consistent()) throw ConfigError("entropy csv: times are not strictly increasing");
  return s;
}

EntropySeries read_entropy_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return read_entropy_csv(in);
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "time,field,norm,boundary_leak,captured_probability\n";
  for (const auto& r : rows) {
    out << shortest(r.step.time) << ',' << shortest(r.step.field_value) << ',' << shortest(r.step.norm)
        << ',' << shortest(r.step.boundary_leak) << ',' << shortest(r.captured_probability) << '\n';
  }
}

}  // namespace rescatter
