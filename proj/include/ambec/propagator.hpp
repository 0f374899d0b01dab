// Real-time integrators for the coupled equations and an imaginary-time
// relaxation for constrained energy minimizers.
//
// Strang (spectral grids): exact kinetic half-steps in Fourier space around
// one classical RK4 step of the local terms.
// RK4 (finite-difference grids): method of lines with the 4th-order
// Laplacian; the two edge points follow a prescribed phase rotation
// exp(-i mu t) / exp(-2 i mu t), which holds a nonzero background in place.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ambec/diagnostics.hpp"
#include "ambec/grid.hpp"

namespace ambec {

enum class Scheme { kStrangSpectral, kRk4FiniteDifference };

struct EvolveSpec {
  double dt = 1e-3;
  double t_end = 1.0;  // 0 gives a trajectory with the initial sample only
  Scheme scheme = Scheme::kStrangSpectral;
  int observer_stride = 1;
  double noise_amplitude = 0.0;  // relative to the peak field magnitude
  std::uint64_t seed = 0;
  std::vector<double> snapshot_times;
  /// Chemical potential of the initial state when known. Drives the FD
  /// edge rotation and the phase-unwrap guard 2|mu| dt stride < pi/2.
  std::optional<double> reference_mu;

  /// Throws DomainError on dt <= 0, t_end < 0, 0 < t_end < dt, stride < 1,
  /// negative noise, or a violated unwrap guard.
  void validate() const;
};

/// Strang step with kinetic phase factors cached for fixed (grid, dt).
class StrangStepper {
 public:
  StrangStepper(const Grid& g, const Potential& p, const Couplings& c, double dt);
  /// Advances f by dt in place. Throws NumericalError on non-finite output.
  void step(FieldPair& f);

 private:
  Grid grid_;
  Potential potential_;
  Couplings couplings_;
  double dt_;
  ComplexField half_a_;
  ComplexField half_m_;
  ComplexField k1a_, k2a_, k3a_, k4a_, k1m_, k2m_, k3m_, k4m_, ta_, tm_;
};

/// Largest stable RK4 step for the 4th-order FD kinetic operator, with a
/// 0.9 safety factor.
double fd_cfl_limit(const Grid& g);

class FdRk4Stepper {
 public:
  /// edge_mu sets the edge rotation; 0 holds the edges fixed.
  FdRk4Stepper(const Grid& g, const Potential& p, const Couplings& c, double dt,
               double edge_mu = 0.0);
  void step(FieldPair& f);
  /// Set when |dt| exceeds fd_cfl_limit.
  const std::optional<std::string>& cfl_warning() const { return warning_; }

 private:
  void rhs(const ComplexField& a, const ComplexField& m, ComplexField& da, ComplexField& dm);

  Grid grid_;
  Potential potential_;
  Couplings couplings_;
  double dt_;
  double edge_mu_;
  std::optional<std::string> warning_;
  ComplexField k1a_, k2a_, k3a_, k4a_, k1m_, k2m_, k3m_, k4m_, ta_, tm_;
};

FieldPair step_strang(const FieldPair& f, const Potential& p, const Couplings& c, const Grid& g,
                      double dt);
FieldPair step_fd_rk4(const FieldPair& f, const Potential& p, const Couplings& c, const Grid& g,
                      double dt, double edge_mu = 0.0);

/// Failure during evolve; carries everything sampled so far.
class EvolveError : public NumericalError {
 public:
  EvolveError(const std::string& what, Trajectory partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Samples every observer_stride steps and at t_end. Seeded noise, when
/// requested, is added once at t = 0 (interior points only on FD grids).
/// A basis adds a qubit projection to every sample.
Trajectory evolve(const FieldPair& f0, const EvolveSpec& spec, const Potential& p,
                  const Couplings& c, const Grid& g, const ModeBasis* basis = nullptr);

struct StabilityReport {
  double growth_exponent = 0.0;  // slope of log(deviation) against t
  double initial_deviation = 0.0;
  double final_deviation = 0.0;
  double max_deviation = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<double> deviations;  // L2 distance between perturbed and clean runs
};

/// Runs the clean and the perturbed state side by side (noise_amplitude > 0
/// required) and fits the growth of their L2 distance. A finite-time probe,
/// not a stability classification.
StabilityReport stability_probe(const FieldPair& f0, const EvolveSpec& spec, const Potential& p,
                                const Couplings& c, const Grid& g);

struct RelaxOptions {
  double dtau = 0.05;
  int max_steps = 200000;
  double energy_tolerance = 1e-12;    // relative energy change per step
  double gradient_tolerance = 1e-10;  // sup-norm of the constrained gradient
};

struct RelaxResult {
  FieldPair fields;
  double energy = 0.0;
  double mu = 0.0;  // Lagrange multiplier of the N constraint
  double gradient_norm = 0.0;
  int steps = 0;
  bool converged = false;
  std::string message;
};

/// Normalized gradient flow at fixed N = N_a + 2 N_m on a spectral grid,
/// kinetic part treated implicitly. Stops when both the relative energy
/// change and the gradient sup-norm fall below their tolerances. Throws
/// NumericalError on collapse to the zero field or non-finite values.
RelaxResult imaginary_time_relax(const FieldPair& f0, const Couplings& c, double target_n,
                                 const Grid& g, const RelaxOptions& opts = {});

}  // namespace ambec
