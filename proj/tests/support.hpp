// Shared helpers for the unit tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "ambec/constraints.hpp"

namespace ambec::test {

inline double sup_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

inline double sup_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

inline double sup_norm(std::span<const double> a) {
  double d = 0.0;
  for (double v : a) d = std::max(d, std::abs(v));
  return d;
}

inline double sup_norm(std::span<const cplx> a) {
  double d = 0.0;
  for (const cplx& v : a) d = std::max(d, std::abs(v));
  return d;
}

/// Solved parameter set for a named preset; the solve must converge.
inline ParameterSet solved(Family f, std::string_view name = "default") {
  const Preset p = preset(f, name);
  const ConstraintSolution s = solve(p.problem, p.guess);
  if (!s.converged) throw NumericalError("test preset did not converge: " + s.message);
  return s.values;
}

inline FieldPair from_profiles(const Profiles& p) {
  FieldPair f;
  f.psi_a.assign(p.a.begin(), p.a.end());
  f.psi_m.assign(p.m.begin(), p.m.end());
  return f;
}

}  // namespace ambec::test
