// Continuum model: equations of motion, stationary residual, conserved
// quantities and the Madelung/continuity picture.
//
//   i d_t psi_a = -1/2 psi_a'' + (V_a + g_a|psi_a|^2 + g_am|psi_m|^2) psi_a
//                 + sqrt(2) alpha psi_m conj(psi_a)
//   i d_t psi_m = -1/4 psi_m'' + (V_m + eps + g_m|psi_m|^2 + g_am|psi_a|^2) psi_m
//                 + alpha/sqrt(2) psi_a^2
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ambec/grid.hpp"

namespace ambec {

struct StationaryResidual {
  RealField r_a;
  RealField r_m;

  /// max over both components of |r|.
  double sup_norm() const;
};

/// Residual of the time-independent equations for real profiles phi_a,
/// phi_m rotating as exp(-i mu t), exp(-2 i mu t), with zero potential.
StationaryResidual stationary_residual(std::span<const double> phi_a,
                                       std::span<const double> phi_m, const Couplings& c,
                                       double mu, const Grid& g);

/// Right-hand sides H_a, H_m of the equations of motion (i d_t psi = H).
/// These are also the functional derivatives dE/dpsi* of `energy`.
std::pair<ComplexField, ComplexField> equation_rhs(const FieldPair& f, const Potential& p,
                                                   const Couplings& c, const Grid& g);

struct ParticleNumbers {
  double n_a = 0.0;
  double n_m = 0.0;
  double total = 0.0;  // n_a + 2 n_m
};

ParticleNumbers particle_numbers(const FieldPair& f, const Grid& g);

/// Molecular number with a constant background density removed:
/// N_m = integral(|psi_m|^2 - background_density). For the power-law
/// families whose molecular field tends to a constant.
ParticleNumbers particle_numbers_background_subtracted(const FieldPair& f, const Grid& g,
                                                       double background_density);

/// Mean-field energy
///   E = integral[ 1/2|psi_a'|^2 + 1/4|psi_m'|^2 + V_a|psi_a|^2 + (V_m+eps)|psi_m|^2
///               + g_a/2|psi_a|^4 + g_m/2|psi_m|^4 + g_am|psi_a|^2|psi_m|^2
///               + alpha/sqrt(2)(conj(psi_m) psi_a^2 + psi_m conj(psi_a)^2) ] dx
double energy(const FieldPair& f, const Potential& p, const Couplings& c, const Grid& g);

struct MadelungDecomposition {
  RealField n_a;
  RealField n_m;
  RealField phi_a;  // NaN where masked
  RealField phi_m;
  std::vector<bool> support_a;  // density above floor
  std::vector<bool> support_m;
};

/// Densities everywhere; phases unwrapped along each contiguous run of
/// points whose density exceeds `floor`, NaN elsewhere. floor > 0.
MadelungDecomposition madelung(const FieldPair& f, double floor);

/// 1e-12 times the largest density of either species.
double default_phase_floor(const FieldPair& f);

/// How the spatial flux of the continuity equation is assembled.
///
/// kMassWeighted: j = Im(conj(psi_a) psi_a') + 2 * (1/2) Im(conj(psi_m) psi_m'),
///   the current that the equations of motion conserve exactly.
/// kPhaseGradient: j = n_a phi_a' + n_m phi_m' built from Madelung phases,
///   as the density-phase form is usually written. On the support of both
///   fields the two agree.
enum class FluxForm { kMassWeighted, kPhaseGradient };

/// Pointwise residual of d_t(n_a + 2 n_m) + d_x j from three snapshots
/// equally spaced in time (centered difference in t). Throws DomainError
/// for unequal spacing.
RealField continuity_residual(const FieldPair& before, const FieldPair& now,
                              const FieldPair& after, const Grid& g,
                              FluxForm form = FluxForm::kMassWeighted);

}  // namespace ambec
