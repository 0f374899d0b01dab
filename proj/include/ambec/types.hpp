// Core value types for the coupled atomic/molecular mean-field model.
//
// Units are natural (hbar = m_atom = 1). The atomic field rotates as
// exp(-i mu t) in a stationary state and the molecular field as
// exp(-2 i mu t).
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ambec {

using cplx = std::complex<double>;
using ComplexField = std::vector<cplx>;
using RealField = std::vector<double>;

/// Parameter combination outside the admissible domain of an operation
/// (inverted bounds, y == B, non-positive shape parameter, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: NaN/overflow during stepping, non-convergence.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interaction and photoassociation parameters. No sign assumptions.
struct Couplings {
  double g_a = 0.0;      // atom-atom
  double g_m = 0.0;      // molecule-molecule
  double g_am = 0.0;     // atom-molecule
  double alpha = 0.0;    // photoassociation strength
  double epsilon = 0.0;  // atom -> molecule energy mismatch

  bool finite() const;
};

/// Atomic and molecular fields sampled on a common grid.
struct FieldPair {
  ComplexField psi_a;
  ComplexField psi_m;
  double t = 0.0;

  std::size_t size() const { return psi_a.size(); }
  bool finite() const;
};

/// Trap potentials. Empty arrays stand for identically zero potentials.
struct Potential {
  RealField v_a;
  RealField v_m;

  bool is_zero() const { return v_a.empty() && v_m.empty(); }
  static Potential zero() { return {}; }
};

/// Throws DomainError when the two arrays disagree in length.
void require_same_size(std::size_t a, std::size_t b, const std::string& what);

}  // namespace ambec
