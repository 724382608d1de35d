#include "rescatter/snapshot.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "rescatter/errors.hpp"
#include "text_format.hpp"

namespace rescatter {

using detail::shortest;

void write_wigner_snapshot(std::ostream& out, const WignerGrid& w, double cep) {
  if (w.nq() == 0 || w.np() == 0) throw std::invalid_argument("snapshot: empty Wigner grid");
  out << "# t = " << shortest(w.time_tag) << '\n'
      << "# cep = " << shortest(cep) << '\n'
      << "# q_min = " << shortest(w.q_values.front()) << '\n'
      << "# q_max = " << shortest(w.q_values.back()) << '\n'
      << "# nq = " << w.nq() << '\n'
      << "# p_min = " << shortest(w.p_values.front()) << '\n'
      << "# p_max = " << shortest(w.p_values.back()) << '\n'
      << "# np = " << w.np() << '\n';
  std::string row;
  for (std::size_t iq = 0; iq < w.nq(); ++iq) {
    row.clear();
    for (std::size_t ip = 0; ip < w.np(); ++ip) {
      if (ip > 0) row += ' ';
      row += shortest(w.at(iq, ip));
    }
    row += '\n';
    out << row;
  }
}

void write_wigner_snapshot(const std::filesystem::path& path, const WignerGrid& w, double cep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_wigner_snapshot(out, w, cep);
}

WignerSnapshot read_wigner_snapshot(std::istream& in) {
  std::map<std::string, double> header;
  std::string line;
  while (in.peek() == '#') {
    std::getline(in, line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("snapshot: malformed header line '" + line + "'");
    std::string key = line.substr(1, eq - 1);
    key.erase(0, key.find_first_not_of(' '));
    key.erase(key.find_last_not_of(' ') + 1);
    header[key] = std::stod(line.substr(eq + 1));
  }
  for (const char* key : {"t", "cep", "q_min", "q_max", "nq", "p_min", "p_max", "np"}) {
    if (!header.contains(key)) throw ConfigError(std::string("snapshot: missing header '") + key + "'");
  }

  WignerSnapshot snap;
  snap.cep = header["cep"];
  WignerGrid& w = snap.grid;
  w.time_tag = header["t"];
  const auto nq = static_cast<std::size_t>(header["nq"]);
  const auto np = static_cast<std::size_t>(header["np"]);
  auto axis = [](double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = n > 1 ? lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1) : lo;
    }
    return v;
  };
  w.q_values = axis(header["q_min"], header["q_max"], nq);
  w.p_values = axis(header["p_min"], header["p_max"], np);
  w.q_values.front() = header["q_min"];
  w.q_values.back() = header["q_max"];
  w.p_values.front() = header["p_min"];
  w.p_values.back() = header["p_max"];
  w.q_spacing = nq > 1 ? (header["q_max"] - header["q_min"]) / static_cast<double>(nq - 1) : 0.0;
  w.p_spacing = np > 1 ? (header["p_max"] - header["p_min"]) / static_cast<double>(np - 1) : 0.0;
  w.values.resize(nq * np);

  for (std::size_t iq = 0; iq < nq; ++iq) {
    if (!std::getline(in, line)) throw ConfigError("snapshot: missing rows");
    const char* p = line.data();
    const char* end = p + line.size();
    for (std::size_t ip = 0; ip < np; ++ip) {
      while (p < end && *p == ' ') ++p;
      const auto [next, ec] = std::from_chars(p, end, w.at(iq, ip));
      if (ec != std::errc{}) {
        throw ConfigError("snapshot: bad value in row " + std::to_string(iq));
      }
      p = next;
    }
  }
  return snap;
}

WignerSnapshot read_wigner_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return read_wigner_snapshot(in);
}

std::string snapshot_file_name(double t) {
  std::ostringstream name;
  name << "wigner_t" << shortest(t) << ".dat";
  return name.str();
}

}  // namespace rescatter
