// Columnar text snapshots:
//
//   # ambec snapshot (natural units: hbar = m_atom = 1)
//   # t = <time>
//   # grid = <spectral|finite_difference> <x_min> <x_max> <n>
//   # x  re_psi_a  im_psi_a  re_psi_m  im_psi_m
//   <x> <re> <im> <re> <im>        one row per grid point
//
// Numbers are written with 17 significant digits, so a write/read cycle
// reproduces every double exactly.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ambec/grid.hpp"

namespace ambec {

struct Snapshot {
  RealField x;
  FieldPair fields;
  std::optional<Grid> grid;  // from the grid header line, when present
};

void write_snapshot(std::ostream& os, const FieldPair& f, const Grid& g);
void write_snapshot(const std::string& path, const FieldPair& f, const Grid& g);

/// Throws DomainError on malformed input.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::string& path);

/// The snapshot's grid: the header line when present, otherwise a
/// spectral grid inferred from the (uniform) x column.
Grid snapshot_grid(const Snapshot& s);

/// Shortest-round-trip-safe formatting used by every text output.
std::string format_double(double v);

}  // namespace ambec
