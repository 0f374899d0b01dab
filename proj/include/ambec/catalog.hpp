// Closed-form constructors for the six exact stationary families and their
// equivalent superposed / droplet-reparametrized forms.
//
//   I    psi_a = A cosh(bx)/(B + cosh^2 bx)     psi_m = D/(B + cosh^2 bx)
//   II   psi_a = A sinh(bx)/(B + cosh^2 bx)     psi_m = D/(B + cosh^2 bx)
//   III  psi_a = A/(B + x^2)                    psi_m = D (x^2 + y)/(B + x^2)
//   IV   psi_a = A x/(B + x^2)                  psi_m = D (x^2 + y)/(B + x^2)
//   V    psi_a = A sech^2(bx)                   psi_m = M (sech^2(bx) + y)
//   VI   psi_a = A sech(bx) tanh(bx)            psi_m = M (sech^2(bx) + y)
//
// For V and VI the molecular amplitude M is conventionally also called "B";
// internally it lives in the molecular amplitude slot `D` of AnsatzParams
// and `io_label` maps it back to "B" for input and output.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ambec/grid.hpp"

namespace ambec {

enum class Family {
  kDropletGround,      // I
  kDropletExcited,     // II
  kPulseGround,        // III
  kPulseExcited,       // IV
  kHyperbolicGround,   // V
  kHyperbolicExcited,  // VI
};

inline constexpr Family kAllFamilies[] = {
    Family::kDropletGround,    Family::kDropletExcited,    Family::kPulseGround,
    Family::kPulseExcited,     Family::kHyperbolicGround,  Family::kHyperbolicExcited};

enum class Parity { kEven, kOdd };
enum class DecayClass { kExponential, kPowerLaw };

/// Roman numeral "I".."VI".
std::string_view family_name(Family f);
/// Long identifier, e.g. "I_droplet_ground".
std::string_view family_id(Family f);
/// Accepts the roman numeral, the digit, or the long identifier.
Family parse_family(std::string_view s);

bool is_ground(Family f);
/// Ground <-> excited member sharing the molecular profile.
Family partner(Family f);
Parity atomic_parity(Family f);
DecayClass decay_class(Family f);

/// Shape parameters. Which fields are meaningful depends on the family:
/// I/II use A, B, D, beta; III/IV use A, B, D, y; V/VI use A, D (molecular
/// amplitude), beta, y.
struct AnsatzParams {
  double A = 0.0;
  double B = 0.0;
  double D = 0.0;
  double beta = 1.0;
  double y = 0.0;

  /// Superposition half-separation with B = sinh^2(delta) (I, II).
  double delta() const;
};

/// Throws DomainError when `p` lies outside the family's domain
/// (B <= 0 for I-IV, beta <= 0 for I/II/V/VI, y == B for III/IV).
void validate(Family f, const AnsatzParams& p);

struct Profiles {
  RealField a;
  RealField m;
};

/// Real spatial profiles at t = 0. Validates `p`.
Profiles eval_profiles(Family f, const AnsatzParams& p, const Grid& g);

/// Fields at time t with phases exp(-i mu t) and exp(-2 i mu t). For I/II
/// the relation beta^2 = -2 mu is enforced.
FieldPair eval_family(Family f, const AnsatzParams& p, double mu, const Grid& g, double t);

/// Families I/II rebuilt from shifted kink (tanh) and bright (sech)
/// constituents. Equal to eval_family at t = 0 up to rounding.
FieldPair superposed_form(Family f, const AnsatzParams& p, const Grid& g);

struct DropletScaling {
  double sqrt_n_m = 0.0;  // D (2B+1) / (2B(B+1)), carries the sign of D
  double n_m = 0.0;       // plateau density
  double mu_ratio = 0.0;  // mu/mu_0 = 4B(B+1)/(2B+1)^2, in (0, 1)
};

DropletScaling droplet_scaling(double B, double D);

/// Positive root B of 4B(B+1)/(2B+1)^2 = mu_ratio, mu_ratio in (0, 1).
double shape_from_mu_ratio(double mu_ratio);

/// Families I/II written through (sqrt(n_m), mu/mu_0, A, mu):
///   psi_m = sqrt(n_m) (mu/mu_0) / [1 + sqrt(1 - mu/mu_0) cosh(sqrt(-8 mu) x)]
///   psi_a = 2A {cosh|sinh}(sqrt(-2 mu) x) / ((2B+1)[1 + ...])
/// mu < 0 sets the width; mu_ratio fixes B through shape_from_mu_ratio.
FieldPair reparametrized_form(Family f, double sqrt_n_m, double mu_ratio, double A,
                              double mu, const Grid& g, double t);

/// A < 0 is equivalent to A > 0 with the atomic field multiplied by -1 (a
/// global gauge rotation by pi that leaves psi_m unchanged). Returns the
/// canonical parameters and whether the flip was applied.
struct CanonicalParams {
  AnsatzParams params;
  bool phase_flipped = false;
};
CanonicalParams canonicalize(const AnsatzParams& p);

struct FamilyInfo {
  Family family;
  std::string atomic_form;
  std::string molecular_form;
  std::string domain;        // admissible parameter domain
  std::string known_relations;  // relations derived by coefficient matching
  AnsatzParams template_params;
};

std::vector<FamilyInfo> describe_families();

}  // namespace ambec
