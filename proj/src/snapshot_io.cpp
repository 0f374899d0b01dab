#include "ambec/snapshot_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ambec {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot(std::ostream& os, const FieldPair& f, const Grid& g) {
  require_same_size(f.psi_a.size(), g.size(), "write_snapshot");
  require_same_size(f.psi_m.size(), g.size(), "write_snapshot");
  os << "# ambec snapshot (natural units: hbar = m_atom = 1)\n";
  os << "# t = " << format_double(f.t) << '\n';
  os << "# grid = " << (g.spectral() ? "spectral" : "finite_difference") << ' '
     << format_double(g.x_min()) << ' ' << format_double(g.x_max()) << ' ' << g.size() << '\n';
  os << "# x  re_psi_a  im_psi_a  re_psi_m  im_psi_m\n";
  for (std::size_t j = 0; j < g.size(); ++j) {
    os << format_double(g.x(j)) << ' ' << format_double(f.psi_a[j].real()) << ' '
       << format_double(f.psi_a[j].imag()) << ' ' << format_double(f.psi_m[j].real()) << ' '
       << format_double(f.psi_m[j].imag()) << '\n';
  }
}

void write_snapshot(const std::string& path, const FieldPair& f, const Grid& g) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open snapshot file for writing: " + path);
  write_snapshot(os, f, g);
}

Snapshot read_snapshot(std::istream& is) {
  Snapshot s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# grid =", 0) == 0) {
        std::istringstream hdr(line.substr(8));
        std::string disc;
        double lo = 0, hi = 0;
        std::size_t n = 0;
        if (!(hdr >> disc >> lo >> hi >> n) || (disc != "spectral" && disc != "finite_difference"))
          throw DomainError("snapshot: malformed grid header at line " + std::to_string(lineno));
        s.grid = make_grid(lo, hi, n,
                           disc == "spectral" ? Discretization::kSpectral
                                              : Discretization::kFiniteDifference);
        continue;
      }
      const auto pos = line.find("t =");
      if (pos != std::string::npos && line.find("x ") == std::string::npos)
        s.fields.t = std::stod(line.substr(pos + 3));
      continue;
    }
    std::istringstream row(line);
    double x = 0, ar = 0, ai = 0, mr = 0, mi = 0;
    if (!(row >> x >> ar >> ai >> mr >> mi))
      throw DomainError("snapshot: malformed row at line " + std::to_string(lineno));
    s.x.push_back(x);
    s.fields.psi_a.emplace_back(ar, ai);
    s.fields.psi_m.emplace_back(mr, mi);
  }
  if (s.x.empty()) throw DomainError("snapshot: no data rows");
  if (s.grid && s.grid->size() != s.x.size())
    throw DomainError("snapshot: grid header disagrees with the row count");
  return s;
}

Grid snapshot_grid(const Snapshot& s) {
  if (s.grid) return *s.grid;
  if (s.x.size() < 2) throw DomainError("snapshot: cannot infer a grid from one point");
  const double dx = s.x[1] - s.x[0];
  for (std::size_t j = 1; j < s.x.size(); ++j)
    if (std::abs(s.x[j] - s.x[j - 1] - dx) > 1e-9 * std::abs(dx))
      throw DomainError("snapshot: x column is not uniform");
  return make_grid(s.x.front(), s.x.back() + dx, s.x.size(), Discretization::kSpectral);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open snapshot file: " + path);
  return read_snapshot(is);
}

}  // namespace ambec
