#include <catch_amalgamated.hpp>
#include <numbers>

#include "ambec/catalog.hpp"
#include "ambec/model.hpp"
#include "support.hpp"

using namespace ambec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double max_abs_residual(Family f, const ParameterSet& s, const Grid& g) {
  return test::sup_norm(constraint_residual(f, s, g));
}

void check_close(const ParameterSet& got, const ParameterSet& want, double tol) {
  for (Param p : kAllParams) {
    INFO(param_name(p));
    CHECK_THAT(got[p], WithinAbs(want[p], tol * std::max(1.0, std::abs(want[p]))));
  }
}

// Hand-derived droplet relations, knowns A, B, D, beta.
ParameterSet droplet_oracle(double A, double B, double D, double beta) {
  ParameterSet s;
  const double b2 = beta * beta;
  s[Param::kA] = A;
  s[Param::kB] = B;
  s[Param::kD] = D;
  s[Param::kBeta] = beta;
  s[Param::kMu] = -0.5 * b2;
  const double alpha = b2 * (2 * A * A * B + (2 * B + 1) * D * D) / (kSqrt2 * A * A * B * D);
  const double eps = -A * A * alpha / (kSqrt2 * D);
  s[Param::kAlpha] = alpha;
  s[Param::kEpsilon] = eps;
  s[Param::kGam] = B * (3 * b2 - kSqrt2 * D * alpha) / (D * D);
  s[Param::kGa] = -((4 * B + 1) * b2 + kSqrt2 * D * alpha) / (A * A);
  s[Param::kGm] = -(2 * B * B * eps + (2 * B * B - B) * b2) / (2 * D * D);
  return s;
}

// Hand-derived even pulse relations (g_a frozen), knowns B, y, D.
ParameterSet pulse_ground_oracle(double B, double y, double D, double ga) {
  ParameterSet s;
  const double w = (y - B) * (y - B);
  s[Param::kB] = B;
  s[Param::kY] = y;
  s[Param::kD] = D;
  s[Param::kA] = std::abs(D * (y - B));
  s[Param::kMu] = (3 * y - B) / w;
  s[Param::kEpsilon] = 2 * s[Param::kMu];
  s[Param::kGm] = 0.0;
  s[Param::kAlpha] = (3 * y + B) / (D * w) / kSqrt2;
  s[Param::kGam] = -2 * B / (D * D * w);
  s[Param::kGa] = ga;
  return s;
}

// Hand-derived odd pulse relations, knowns B, y, D.
ParameterSet pulse_excited_oracle(double B, double y, double D) {
  ParameterSet s;
  const double e = B / (2 * y * (B + y));
  const double K = 2 * e * (B + 3 * y) + 3;
  const double A2 = -D * D * (y - B) * (y - B) * (B + y) / (2 * B * y);
  const double P = D * (K - 4 * B * e) / A2;
  const double Q = D * (4 * e * y - K) / A2;
  s[Param::kB] = B;
  s[Param::kY] = y;
  s[Param::kD] = D;
  s[Param::kA] = std::sqrt(A2);
  s[Param::kGm] = -e / (D * D);
  s[Param::kGam] = P / (2 * D);
  s[Param::kAlpha] = Q / kSqrt2;
  s[Param::kMu] = D * (P / 2 + Q);
  s[Param::kEpsilon] = e + 2 * s[Param::kMu];
  s[Param::kGa] = (1 - D * (y - B) * (P + Q)) / A2;
  return s;
}

// Coefficients of sech^2, sech^4, sech^6 in both stationary equations for
// psi_a = A s^2, psi_m = M s^2, s = sech(beta x), using
// (s^2)'' = beta^2 (4 s^2 - 6 s^4). All six vanish for a solution.
std::array<double, 6> hyperbolic_coefficients(const ParameterSet& s) {
  const double A = s[Param::kA], M = s[Param::kD], b2 = s[Param::kBeta] * s[Param::kBeta];
  const double mu = s[Param::kMu], eps = s[Param::kEpsilon], al = s[Param::kAlpha];
  const double ga = s[Param::kGa], gm = s[Param::kGm], gam = s[Param::kGam];
  return {
      -2 * b2 * A - mu * A,                     // atomic s^2
      3 * b2 * A + kSqrt2 * al * M * A,         // atomic s^4
      ga * A * A * A + gam * M * M * A,         // atomic s^6
      -b2 * M + eps * M - 2 * mu * M,           // molecular s^2
      1.5 * b2 * M + al * A * A / kSqrt2,       // molecular s^4
      gm * M * M * M + gam * A * A * M,         // molecular s^6
  };
}

ConstraintSolution solve_preset(Family f, std::string_view name = "default") {
  const Preset p = preset(f, name);
  return solve(p.problem, p.guess);
}

}  // namespace

TEST_CASE("parameter labels follow the family") {
  CHECK(io_label(Family::kHyperbolicGround, Param::kD) == "B");
  CHECK(io_label(Family::kDropletGround, Param::kD) == "D");
  CHECK(parse_param(Family::kHyperbolicExcited, "B") == Param::kD);
  CHECK(parse_param(Family::kDropletGround, "B") == Param::kB);
  CHECK(parse_param(Family::kDropletGround, "g_am") == Param::kGam);
  CHECK_FALSE(is_used(Family::kDropletGround, Param::kY));
  CHECK_FALSE(is_used(Family::kPulseGround, Param::kBeta));
  CHECK_FALSE(is_used(Family::kHyperbolicGround, Param::kB));
  CHECK_THROWS_AS(parse_param(Family::kDropletGround, "zeta"), DomainError);
}

TEST_CASE("hand coefficient matching anchors family V at y = 0") {
  // beta = 1, alpha = 1: mu = -2, epsilon = -3, M = -3/sqrt2, A^2 = 9/2,
  // g_a = g_m = -g_am, here with g_a = -1.
  ParameterSet s;
  s[Param::kA] = 3.0 / kSqrt2;
  s[Param::kD] = -3.0 / kSqrt2;
  s[Param::kBeta] = 1.0;
  s[Param::kY] = 0.0;
  s[Param::kMu] = -2.0;
  s[Param::kEpsilon] = -3.0;
  s[Param::kAlpha] = 1.0;
  s[Param::kGa] = -1.0;
  s[Param::kGm] = -1.0;
  s[Param::kGam] = 1.0;
  for (double c : hyperbolic_coefficients(s)) CHECK(std::abs(c) < 1e-15);
  const Grid g = make_grid(-40, 40, 2048);
  CHECK(max_abs_residual(Family::kHyperbolicGround, s, g) < 1e-10);
  // Same state through the model-core residual.
  const Profiles p = eval_profiles(Family::kHyperbolicGround, s.shape(), g);
  CHECK(stationary_residual(p.a, p.m, s.couplings(), s.mu(), g).sup_norm() < 1e-10);
  CHECK(relation_deviation(Family::kHyperbolicGround, s) < 1e-15);

  SECTION("solver recovers the anchor from beta, alpha, g_a") {
    const ConstraintSolution sol = solve_preset(Family::kHyperbolicGround, "y0");
    REQUIRE(sol.converged);
    ParameterSet got = sol.values;
    if (got[Param::kA] < 0) got[Param::kA] = -got[Param::kA];  // A enters squared
    check_close(got, s, 1e-8);
    for (double c : hyperbolic_coefficients(sol.values)) CHECK(std::abs(c) < 1e-8);
    CHECK(sol.null_space_dimension == 0);
  }
}

TEST_CASE("zero amplitudes give the trivial zero residual") {
  ParameterSet s;
  s[Param::kB] = 1.0;
  s[Param::kMu] = -0.5;
  s[Param::kGa] = 3.0;
  const Grid g = make_grid(-20, 20, 256);
  CHECK(max_abs_residual(Family::kDropletGround, s, g) == 0.0);
}

TEST_CASE("residual grows linearly with a mu perturbation") {
  const ParameterSet s = test::solved(Family::kHyperbolicGround, "y0");
  const Grid g = recommended_grid(Family::kHyperbolicGround, s);
  auto at = [&](double d) {
    ParameterSet p = s;
    p[Param::kMu] += d;
    return max_abs_residual(Family::kHyperbolicGround, p, g);
  };
  const double r1 = at(1e-3), r2 = at(2e-3);
  CHECK(r1 > 1e-4);
  CHECK_THAT(r2 / r1, WithinAbs(2.0, 1e-6));
}

TEST_CASE("solver output matches the independent oracles") {
  SECTION("droplet ground state") {
    const ConstraintSolution sol = solve_preset(Family::kDropletGround);
    REQUIRE(sol.converged);
    check_close(sol.values, droplet_oracle(1, 1, 1, 1), 1e-8);
  }
  SECTION("droplet ground state off the unit point") {
    ConstraintProblem pb;
    pb.family = Family::kDropletGround;
    pb.knowns = {{Param::kA, 0.8}, {Param::kB, 2.5}, {Param::kD, 1.4}, {Param::kBeta, 0.7}};
    const ParameterSet want = droplet_oracle(0.8, 2.5, 1.4, 0.7);
    pb.grid = recommended_grid(pb.family, want);
    const ConstraintSolution sol = solve(pb, {{Param::kMu, -0.2}});
    REQUIRE(sol.converged);
    check_close(sol.values, want, 1e-8);
  }
  SECTION("even pulse") {
    const ConstraintSolution sol = solve_preset(Family::kPulseGround);
    REQUIRE(sol.converged);
    ParameterSet got = sol.values;
    got[Param::kA] = std::abs(got[Param::kA]);
    // g_a is not given by a short closed form; frozen from the solve.
    check_close(got, pulse_ground_oracle(16, -8, 1, -1.0 / 18.0), 1e-8);
  }
  SECTION("odd pulse") {
    const ConstraintSolution sol = solve_preset(Family::kPulseExcited);
    REQUIRE(sol.converged);
    ParameterSet got = sol.values;
    got[Param::kA] = std::abs(got[Param::kA]);
    check_close(got, pulse_excited_oracle(16, -8, 1), 1e-8);
  }
  SECTION("excited droplet (frozen regression values)") {
    const ConstraintSolution sol = solve_preset(Family::kDropletExcited);
    REQUIRE(sol.converged);
    CHECK_THAT(sol.values[Param::kD], WithinAbs(1.25282405062372, 1e-9));
    CHECK_THAT(sol.values[Param::kEpsilon], WithinAbs(-0.112882057274446, 1e-9));
    CHECK_THAT(sol.values[Param::kGa], WithinAbs(-7.35435215273185, 1e-9));
    CHECK_THAT(sol.values[Param::kGm], WithinAbs(-2.89791297722248, 1e-9));
    CHECK_THAT(sol.values[Param::kGam], WithinAbs(-4.27423588545111, 1e-9));
    CHECK_THAT(sol.values.mu(), WithinAbs(-0.5, 1e-12));
  }
  SECTION("excited hyperbolic state (frozen regression values)") {
    const ConstraintSolution sol = solve_preset(Family::kHyperbolicExcited, "y0");
    REQUIRE(sol.converged);
    CHECK_THAT(std::abs(sol.values[Param::kA]), WithinAbs(1.26710349832363, 1e-9));
    CHECK_THAT(sol.values[Param::kD], WithinAbs(-0.986024149136345, 1e-9));
    CHECK_THAT(sol.values.mu(), WithinAbs(-0.5, 1e-10));
    CHECK_THAT(sol.values[Param::kGm], WithinAbs(-2.727081728299, 1e-9));
    CHECK_THAT(sol.values[Param::kGam], WithinAbs(-1.651387818866, 1e-9));
    CHECK_THAT(sol.values[Param::kEpsilon], WithinAbs(1.151387818866, 1e-9));
  }
}

TEST_CASE("every converged preset passes refined validation") {
  for (Family f : kAllFamilies)
    for (const auto& name : preset_names(f)) {
      INFO(family_name(f) << " " << name);
      const ConstraintSolution sol = solve_preset(f, name);
      REQUIRE(sol.converged);
      CHECK(sol.residual_norm < sol.tolerance);
      CHECK(sol.validation_norm < 10.0 * sol.tolerance);
      CHECK(sol.tolerance == default_tolerance(preset(f, name).problem.grid));
    }
}

TEST_CASE("an underdetermined droplet reports its continuum") {
  ConstraintProblem pb;
  pb.family = Family::kDropletGround;
  pb.knowns = {{Param::kA, 1.0}, {Param::kB, 1.0}, {Param::kBeta, 1.0}};
  pb.grid = make_grid(-40, 40, 2048);
  const ConstraintSolution sol = solve(pb, {{Param::kD, 1.3}, {Param::kMu, -0.4}});
  REQUIRE(sol.converged);
  CHECK(sol.null_space_dimension >= 1);
  // Whatever point of the continuum was reached obeys the closed form.
  const ParameterSet& s = sol.values;
  check_close(s, droplet_oracle(1.0, 1.0, s[Param::kD], 1.0), 1e-8);
  const DropletScaling d = droplet_scaling(s[Param::kB], s[Param::kD]);
  CHECK(d.mu_ratio == 8.0 / 9.0);
  const double peak = d.sqrt_n_m * d.mu_ratio / (1.0 + std::sqrt(1.0 - d.mu_ratio));
  CHECK_THAT(peak, WithinRel(s[Param::kD] / (s[Param::kB] + 1.0), 1e-12));
}

TEST_CASE("free amplitudes collapse onto the trivial solution and are reported") {
  ConstraintProblem pb;
  pb.family = Family::kDropletGround;
  pb.knowns = {{Param::kB, 1.0}, {Param::kBeta, 1.0}};
  pb.grid = make_grid(-40, 40, 2048);
  const ConstraintSolution sol =
      solve(pb, {{Param::kA, 1.0}, {Param::kD, 1.0}, {Param::kMu, -0.5}});
  CHECK_FALSE(sol.converged);
  CHECK_THAT(sol.message, Catch::Matchers::ContainsSubstring("trivial"));
}

TEST_CASE("ill-posed problems are rejected") {
  ConstraintProblem pb;
  pb.family = Family::kPulseGround;
  pb.knowns = {{Param::kB, 2.0}, {Param::kY, 2.0}, {Param::kD, 1.0}};
  pb.grid = make_grid(-40, 40, 1024, Discretization::kFiniteDifference);
  CHECK_THROWS_WITH(solve(pb), Catch::Matchers::ContainsSubstring("y != B"));

  ConstraintProblem all;
  all.family = Family::kDropletGround;
  all.grid = make_grid(-20, 20, 256);
  for (Param p : kAllParams)
    if (is_used(all.family, p)) all.knowns[p] = 1.0;
  CHECK_THROWS_AS(solve(all), DomainError);
}

TEST_CASE("solves are deterministic") {
  const ConstraintSolution a = solve_preset(Family::kDropletExcited);
  const ConstraintSolution b = solve_preset(Family::kDropletExcited);
  for (Param p : kAllParams) CHECK(a.values[p] == b.values[p]);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("scale covariance maps solutions to solutions") {
  const double lambda = 2.0;
  for (Family f : kAllFamilies) {
    INFO(family_name(f));
    const Preset p = preset(f, f == Family::kHyperbolicGround ? "repulsive" : "default");
    const ConstraintSolution base = solve(p.problem, p.guess);
    REQUIRE(base.converged);
    const ParameterSet image = rescale(f, base.values, lambda);
    const Grid g = recommended_grid(f, image);
    CHECK(max_abs_residual(f, image, g) < 10.0 * default_tolerance(g));
    // Solve the image problem from the image knowns and a nearby guess.
    ConstraintProblem pb = p.problem;
    pb.grid = g;
    for (auto& [param, value] : pb.knowns) value = image[param];
    std::map<Param, double> guess;
    for (Param q : pb.unknowns()) guess[q] = image[q] * (1.0 + 1e-3) + 1e-4;
    const ConstraintSolution sol = solve(pb, guess);
    REQUIRE(sol.converged);
    for (Param q : pb.unknowns())
      CHECK_THAT(std::abs(sol.values[q]), WithinAbs(std::abs(image[q]), 1e-7 * std::max(1.0, std::abs(image[q]))));
  }
}

TEST_CASE("continuation along the droplet branch") {
  const Preset p = preset(Family::kDropletGround);
  const Branch br = continuation(p.problem, {Param::kB, 0.1, 10.0, 21}, p.guess);
  REQUIRE(br.complete);
  REQUIRE(br.points.size() == 21);
  double prev = 0.0;
  for (const auto& pt : br.points) {
    CHECK(pt.solution.converged);
    const double r = droplet_scaling(pt.solution.values[Param::kB], 1.0).mu_ratio;
    CHECK(r > prev);
    prev = r;
    check_close(pt.solution.values, droplet_oracle(1, pt.value, 1, 1), 1e-7);
  }
  CHECK(prev > 0.997);
}

TEST_CASE("a single-point sweep equals a plain solve") {
  const Preset p = preset(Family::kDropletExcited);
  const Branch br = continuation(p.problem, {Param::kB, 1.0, 1.0, 1}, p.guess);
  const ConstraintSolution s = solve(p.problem, p.guess);
  REQUIRE(br.points.size() == 1);
  for (Param q : kAllParams) CHECK(br.points[0].solution.values[q] == s.values[q]);
}

TEST_CASE("a sweep into the excluded point y = B stops with a boundary report") {
  const Preset p = preset(Family::kPulseGround);
  const Branch br = continuation(p.problem, {Param::kY, -8.0, 24.0, 5}, p.guess);
  CHECK_FALSE(br.complete);
  REQUIRE(br.failed_at.has_value());
  CHECK(*br.failed_at == 16.0);
  CHECK(br.points.size() == 3);
  CHECK_FALSE(br.boundary_report.empty());
}

TEST_CASE("shared molecular pairs are searched, not assumed") {
  const ParameterSet g = test::solved(Family::kDropletGround);
  const PairReport rep = shared_pair(Family::kDropletGround, g, recommended_grid(Family::kDropletGround, g));
  CHECK(rep.excited == Family::kDropletExcited);
  CHECK_FALSE(rep.message.empty());
  if (rep.found) CHECK(rep.molecular_mismatch < 1e-8);
}
