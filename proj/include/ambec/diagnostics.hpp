// Measurements on fields and trajectories: inner products, two-mode
// (qubit) projection, phase-slope chemical potential, flat-top and tail
// metrics.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ambec/catalog.hpp"

namespace ambec {

/// integral conj(f) g dx with the grid's quadrature weights.
cplx overlap(std::span<const cplx> f, std::span<const cplx> g, const Grid& grid);
double overlap(std::span<const double> f, std::span<const double> g, const Grid& grid);

/// Unit-norm ground/excited atomic profiles sharing one molecular profile.
struct ModeBasis {
  RealField ground;
  RealField excited;
  RealField molecular;
  std::string label;
};

/// Basis from the ground family's profile and its partner's, both built
/// with the same shape parameters. Throws DomainError for zero-norm modes.
ModeBasis make_mode_basis(Family ground, const AnsatzParams& p, const Grid& g);

struct QubitState {
  cplx c0;
  cplx c1;
  double norm2 = 0.0;    // ||psi_a||^2
  double leakage = 0.0;  // 1 - (|c0|^2 + |c1|^2)/||psi_a||^2

  /// |c0|^2 + |c1|^2 + leakage ||psi_a||^2 - ||psi_a||^2.
  double bookkeeping_error() const;
};

/// Throws DomainError when a basis vector has zero norm or the sizes differ.
QubitState project_qubit(std::span<const cplx> psi_a, const ModeBasis& basis, const Grid& g);

/// One observer sample of a trajectory.
struct Sample {
  double t = 0.0;
  double n_a = 0.0;
  double n_m = 0.0;
  double n_total = 0.0;
  double energy = 0.0;
  cplx overlap_a;  // <psi_a(0), psi_a(t)>
  cplx overlap_m;  // <psi_m(0), psi_m(t)>
  /// Sup-norm of the continuity residual, centered on this sample with the
  /// neighbouring time steps. NaN at the first and last sample.
  double continuity = 0.0;
  std::optional<QubitState> qubit;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<FieldPair> snapshots;  // at the requested snapshot times
  FieldPair final_state;
  std::vector<std::string> warnings;
};

enum class Species { kAtomic, kMolecular };

/// Least-squares slope of the unwrapped overlap phase, sign-flipped so a
/// stationary state gives mu (atomic) and 2 mu (molecular). Throws
/// DomainError when consecutive samples differ in phase by more than pi/2
/// (unwrapping would be ambiguous) or with fewer than two samples.
double phase_slope(const Trajectory& tr, Species which);

/// (max - min)/max of |psi_m| over the central half of the array, i.e.
/// indices [n/4, 3n/4). 0 for a constant field and for an all-zero field.
double flat_top_metric(std::span<const cplx> psi_m);

/// Grid on which flat_top_metric reads the droplet plateau: [-2/beta, 2/beta],
/// so the central half covers |x| <= 1/beta.
Grid flat_top_window(double beta, std::size_t n = 1024);

enum class TailModel { kPowerLaw, kExponential };

struct TailFit {
  double exponent = 0.0;   // d log|psi| / d log|x|, or d log|psi| / d|x|
  double std_error = 0.0;  // standard error of the regression slope
};

/// Fit of log|psi| over the outer `window` fraction of the right half of a
/// symmetric grid, against log x (power law) or x (exponential). With
/// floor > 0 the right half ends at the last point where |psi| exceeds
/// floor * max|psi|, which keeps roundoff-level tails out of the fit.
/// Throws DomainError when |psi| is not strictly decreasing in the window.
TailFit tail_exponent(std::span<const cplx> field, const Grid& g, double window,
                      TailModel model, double floor = 0.0);

/// Sign changes of a real profile, ignoring points with |v| below
/// floor * max|v|.
int node_count(std::span<const double> profile, double floor = 1e-8);

}  // namespace ambec
