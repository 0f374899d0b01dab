// Numerical coefficient matching: find shape/coupling combinations for which
// a catalog family solves the stationary equations exactly.
//
// The residual is linear in (mu, epsilon, g_a, g_m, g_am, alpha) and
// nonlinear in the shape parameters. A problem pins a subset of the eleven
// parameters ("knowns") and solves for the rest by Levenberg-Marquardt on
// the residual sampled at clustered collocation points, using exact second
// derivatives of the closed forms. A converged answer is then validated with
// numerical derivatives on the problem grid and on a 4x refinement.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ambec/catalog.hpp"

namespace ambec {

enum class Param { kA, kB, kD, kBeta, kY, kMu, kGa, kGm, kGam, kAlpha, kEpsilon };
inline constexpr std::size_t kParamCount = 11;
inline constexpr Param kAllParams[kParamCount] = {
    Param::kA,  Param::kB,  Param::kD,   Param::kBeta,  Param::kY,      Param::kMu,
    Param::kGa, Param::kGm, Param::kGam, Param::kAlpha, Param::kEpsilon};

/// Canonical names: A B D beta y mu g_a g_m g_am alpha epsilon.
std::string_view param_name(Param p);
/// Name used in files and on the command line. For V/VI the molecular
/// amplitude (slot D) is printed as "B".
std::string_view io_label(Family f, Param p);
/// Inverse of io_label; also accepts the canonical name ("D" for V/VI).
Param parse_param(Family f, std::string_view s);
/// Whether the family's closed form depends on p. Unused shape slots
/// (y for I/II, beta for III/IV, B for V/VI) are never solved for.
bool is_used(Family f, Param p);

/// Complete assignment of shape parameters, couplings and mu.
class ParameterSet {
 public:
  ParameterSet() { values_.fill(0.0); values_[static_cast<std::size_t>(Param::kBeta)] = 1.0; }

  double& operator[](Param p) { return values_[static_cast<std::size_t>(p)]; }
  double operator[](Param p) const { return values_[static_cast<std::size_t>(p)]; }

  AnsatzParams shape() const;
  Couplings couplings() const;
  double mu() const { return (*this)[Param::kMu]; }

  static ParameterSet from(const AnsatzParams& shape, const Couplings& c, double mu);

 private:
  std::array<double, kParamCount> values_{};
};

struct ConstraintProblem {
  Family family = Family::kDropletGround;
  std::map<Param, double> knowns;
  Grid grid;  // full grid used for validation

  /// Used parameters not listed in knowns, in enum order.
  std::vector<Param> unknowns() const;
};

struct SolverOptions {
  std::size_t collocation_points = 64;
  int max_iterations = 200;
  /// Residual sup-norm required for convergence; 0 selects 1e-10 on
  /// spectral grids and 1e-8 on finite-difference grids.
  double tolerance = 0.0;
  /// Stop once an accepted step of the damped normal equations is smaller
  /// than this relative to the parameter vector.
  double normal_tolerance = 1e-12;
  std::size_t validation_refinement = 4;
  /// Singular values below rank_tolerance * sigma_max count as null directions.
  double rank_tolerance = 1e-8;
};

double default_tolerance(const Grid& g);

struct ConstraintSolution {
  ParameterSet values;
  std::vector<Param> unknowns;
  double residual_norm = 0.0;     // full problem grid, numerical derivatives
  double collocation_norm = 0.0;  // collocation points, exact derivatives
  double validation_norm = 0.0;   // refined grid
  double tolerance = 0.0;
  /// False also when the iteration collapsed onto A = D = 0.
  bool converged = false;
  int iterations = 0;
  int null_space_dimension = 0;
  std::string message;
};

/// Stationary residual (r_a followed by r_m) on every point of g. Throws
/// DomainError for assignments outside the family's domain.
RealField constraint_residual(Family f, const ParameterSet& s, const Grid& g);

/// Same residual at arbitrary points with exact second derivatives.
RealField collocation_residual(Family f, const ParameterSet& s, std::span<const double> x);

/// Chebyshev-clustered collocation abscissae over the profile support.
RealField collocation_points(Family f, const ParameterSet& s, std::size_t count);

/// Levenberg-Marquardt solve. Parameters not in knowns start from `guess`
/// when present there, from the family template (shape) or zero
/// (couplings) otherwise. Throws DomainError when the knowns themselves
/// violate the family domain or when there is nothing to solve for.
ConstraintSolution solve(const ConstraintProblem& problem,
                         const std::map<Param, double>& guess = {},
                         const SolverOptions& opts = {});

struct SweepSpec {
  Param param = Param::kB;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;  // number of points, linearly spaced
};

struct BranchPoint {
  double value = 0.0;
  ConstraintSolution solution;
};

struct Branch {
  Family family = Family::kDropletGround;
  Param param = Param::kB;
  std::vector<BranchPoint> points;  // converged points only
  bool complete = false;
  std::optional<double> failed_at;
  std::string boundary_report;
};

/// Secant predictor / LM corrector sweep of one known parameter. Stops at
/// the first point that fails to converge or leaves the domain and reports
/// the last good value.
Branch continuation(const ConstraintProblem& problem, const SweepSpec& sweep,
                    const std::map<Param, double>& guess = {},
                    const SolverOptions& opts = {});

/// Image of a solution under x -> lambda x. Maps solutions to solutions.
ParameterSet rescale(Family f, const ParameterSet& s, double lambda);

/// Largest deviation from the closed-form relations listed by
/// describe_families() that apply to s (0 when none apply).
double relation_deviation(Family f, const ParameterSet& s);

/// Attempt to solve the partner family with the molecular profile, mu and
/// epsilon of a ground-state solution held fixed.
struct PairReport {
  Family ground = Family::kDropletGround;
  Family excited = Family::kDropletExcited;
  bool found = false;
  double molecular_mismatch = 0.0;
  ConstraintSolution excited_solution;
  std::string message;
};
PairReport shared_pair(Family ground, const ParameterSet& ground_solution, const Grid& g,
                       const SolverOptions& opts = {});

/// Box and discretization that hold the family's fields: spectral
/// [-40/beta, 40/beta] with 2048 points for exponential families,
/// finite differences on [-20 sqrt(B), 20 sqrt(B)] with 8192 points for the
/// power-law families.
Grid recommended_grid(Family f, const ParameterSet& s);

struct Preset {
  std::string name;
  ConstraintProblem problem;
  std::map<Param, double> guess;
  std::string description;
};

/// Named problems. Every family has "default". V: "y0" (same as default,
/// g_a = -1), "repulsive" (g_a = +1), "y1" (background y = 1). VI: "y0"
/// (same as default), "broad" (beta = 1/2).
Preset preset(Family f, std::string_view name = "default");
std::vector<std::string> preset_names(Family f);

}  // namespace ambec
