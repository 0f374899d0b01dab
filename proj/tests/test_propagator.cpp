#include <catch_amalgamated.hpp>
#include <numbers>

#include "ambec/catalog.hpp"
#include "ambec/model.hpp"
#include "ambec/propagator.hpp"
#include "support.hpp"

using namespace ambec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct State {
  Family family;
  ParameterSet params;
  Grid grid;
  FieldPair fields;
};

State state(Family f, const ParameterSet& s, const Grid& g) {
  return {f, s, g, eval_family(f, s.shape(), s.mu(), g, 0.0)};
}

State repulsive_hyperbolic(double lambda = 1.0) {
  const ParameterSet s =
      rescale(Family::kHyperbolicGround, test::solved(Family::kHyperbolicGround, "repulsive"), lambda);
  return state(Family::kHyperbolicGround, s, recommended_grid(Family::kHyperbolicGround, s));
}

double field_distance(const FieldPair& a, const FieldPair& b) {
  return std::max(test::sup_diff(a.psi_a, b.psi_a), test::sup_diff(a.psi_m, b.psi_m));
}

double deviation_from_exact(const State& s, const FieldPair& evolved) {
  return field_distance(evolved, eval_family(s.family, s.params.shape(), s.params.mu(), s.grid, evolved.t));
}

EvolveSpec spec_for(double dt, double t_end, Scheme scheme = Scheme::kStrangSpectral) {
  EvolveSpec sp;
  sp.dt = dt;
  sp.t_end = t_end;
  sp.scheme = scheme;
  sp.observer_stride = 10;
  return sp;
}

}  // namespace

TEST_CASE("a free Fourier mode evolves by its exact phase") {
  const Grid g = make_grid(-10, 10, 128);
  const double k = 2 * std::numbers::pi * 3 / 20.0;
  FieldPair f{ComplexField(g.size()), ComplexField(g.size()), 0.0};
  for (std::size_t j = 0; j < g.size(); ++j) {
    f.psi_a[j] = std::polar(1.0, k * g.x(j));
    f.psi_m[j] = std::polar(0.5, -k * g.x(j));
  }
  const double T = 1.3;
  const Trajectory tr = evolve(f, spec_for(1e-2, T), Potential::zero(), Couplings{}, g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(tr.final_state.psi_a[j] - f.psi_a[j] * std::polar(1.0, -0.5 * k * k * T)) < 1e-12);
    CHECK(std::abs(tr.final_state.psi_m[j] - f.psi_m[j] * std::polar(1.0, -0.25 * k * k * T)) < 1e-12);
  }
}

TEST_CASE("zero fields stay zero under both schemes") {
  const Couplings c{-1, 2, 0.5, 1.5, -0.3};
  const Grid gs = make_grid(-10, 10, 128);
  const Grid gf = make_grid(-10, 10, 128, Discretization::kFiniteDifference);
  for (const Grid* g : {&gs, &gf}) {
    const FieldPair z{ComplexField(g->size()), ComplexField(g->size()), 0.0};
    const Scheme sc = g->spectral() ? Scheme::kStrangSpectral : Scheme::kRk4FiniteDifference;
    const Trajectory tr = evolve(z, spec_for(1e-3, 0.1, sc), Potential::zero(), c, *g);
    CHECK(test::sup_norm(tr.final_state.psi_a) == 0.0);
    CHECK(test::sup_norm(tr.final_state.psi_m) == 0.0);
  }
}

TEST_CASE("a stationary hyperbolic state only rotates its phase") {
  const State s = repulsive_hyperbolic(2.0);  // beta = 1/2
  EvolveSpec sp = spec_for(1e-3, 10.0);
  sp.observer_stride = 100;
  sp.reference_mu = s.params.mu();
  const Trajectory tr = evolve(s.fields, sp, Potential::zero(), s.params.couplings(), s.grid);
  CHECK(deviation_from_exact(s, tr.final_state) < 1e-6);
  CHECK_THAT(phase_slope(tr, Species::kAtomic), WithinAbs(s.params.mu(), 1e-6));
  CHECK_THAT(phase_slope(tr, Species::kMolecular), WithinAbs(2 * s.params.mu(), 1e-6));
  const double n0 = tr.samples.front().n_total, e0 = tr.samples.front().energy;
  for (const Sample& smp : tr.samples) {
    CHECK_THAT(smp.n_total, WithinRel(n0, 1e-10));
    CHECK_THAT(smp.energy, WithinAbs(e0, 1e-8 * std::abs(e0)));
  }
}

TEST_CASE("Strang splitting converges at second order") {
  const State s = repulsive_hyperbolic();
  const Couplings c = s.params.couplings();
  auto error = [&](double dt) {
    const Trajectory tr = evolve(s.fields, spec_for(dt, 1.0), Potential::zero(), c, s.grid);
    return deviation_from_exact(s, tr.final_state);
  };
  const double e1 = error(0.04), e2 = error(0.02);
  CHECK(e1 > 1e-9);
  CHECK_THAT(e1 / e2, WithinAbs(4.0, 0.4));
}

TEST_CASE("finite-difference RK4 and Strang agree on a localized state") {
  const State sp = repulsive_hyperbolic();
  const Grid gf = make_grid(-40, 40, 4096, Discretization::kFiniteDifference);
  const State sf = state(sp.family, sp.params, gf);
  const double dt = std::min(1e-3, fd_cfl_limit(gf));
  EvolveSpec fd = spec_for(dt, 1.0, Scheme::kRk4FiniteDifference);
  fd.reference_mu = sf.params.mu();
  const Trajectory a = evolve(sp.fields, spec_for(dt, 1.0), Potential::zero(), sp.params.couplings(), sp.grid);
  const Trajectory b = evolve(sf.fields, fd, Potential::zero(), sf.params.couplings(), gf);
  CHECK(deviation_from_exact(sp, a.final_state) < 1e-6);
  CHECK(deviation_from_exact(sf, b.final_state) < 1e-5);
  // Both sit on the same exact orbit, so they agree with each other to the
  // sum of the two deviations.
  CHECK(particle_numbers(b.final_state, gf).total ==
        Catch::Approx(particle_numbers(a.final_state, sp.grid).total).epsilon(1e-6));
}

TEST_CASE("a power-law pulse keeps its chemical potential on the finite-difference grid") {
  const ParameterSet p = test::solved(Family::kPulseGround);
  const Grid g = make_grid(-80, 80, 4096, Discretization::kFiniteDifference);
  const State s = state(Family::kPulseGround, p, g);
  REQUIRE(fd_cfl_limit(g) >= 1e-3);
  EvolveSpec sp = spec_for(1e-3, 5.0, Scheme::kRk4FiniteDifference);
  sp.reference_mu = p.mu();
  const Trajectory tr = evolve(s.fields, sp, Potential::zero(), p.couplings(), g);
  CHECK_THAT(phase_slope(tr, Species::kAtomic), WithinAbs(p.mu(), 1e-4));
  CHECK_THAT(phase_slope(tr, Species::kMolecular), WithinAbs(2 * p.mu(), 1e-4));
}

TEST_CASE("evolution commutes with the global gauge rotation") {
  const State s = repulsive_hyperbolic();
  const double theta = 0.7;
  FieldPair rotated = s.fields;
  for (auto& v : rotated.psi_a) v *= std::polar(1.0, theta);
  for (auto& v : rotated.psi_m) v *= std::polar(1.0, 2 * theta);
  const Couplings c = s.params.couplings();
  const Trajectory a = evolve(s.fields, spec_for(1e-2, 0.5), Potential::zero(), c, s.grid);
  const Trajectory b = evolve(rotated, spec_for(1e-2, 0.5), Potential::zero(), c, s.grid);
  FieldPair expect = a.final_state;
  for (auto& v : expect.psi_a) v *= std::polar(1.0, theta);
  for (auto& v : expect.psi_m) v *= std::polar(1.0, 2 * theta);
  CHECK(field_distance(expect, b.final_state) < 1e-12);
}

TEST_CASE("conjugating and evolving again returns to the start") {
  State s = repulsive_hyperbolic();
  // Give the state some motion so the check is not a pure phase.
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    s.fields.psi_a[j] *= std::polar(1.0, 0.3 * s.grid.x(j));
    s.fields.psi_m[j] *= std::polar(1.0, 0.6 * s.grid.x(j));
  }
  const Couplings c = s.params.couplings();
  const Trajectory fwd = evolve(s.fields, spec_for(1e-3, 0.5), Potential::zero(), c, s.grid);
  FieldPair back = fwd.final_state;
  for (auto& v : back.psi_a) v = std::conj(v);
  for (auto& v : back.psi_m) v = std::conj(v);
  const Trajectory rev = evolve(back, spec_for(1e-3, 0.5), Potential::zero(), c, s.grid);
  FieldPair end = rev.final_state;
  for (auto& v : end.psi_a) v = std::conj(v);
  for (auto& v : end.psi_m) v = std::conj(v);
  CHECK(field_distance(end, s.fields) < 1e-9);
}

TEST_CASE("sampling, snapshots and the zero-length run") {
  const State s = repulsive_hyperbolic();
  EvolveSpec sp = spec_for(1e-2, 1.0);
  sp.observer_stride = 7;
  sp.snapshot_times = {0.0, 0.5, 1.0};
  const Trajectory tr = evolve(s.fields, sp, Potential::zero(), s.params.couplings(), s.grid);
  CHECK(tr.samples.size() == 1 + 100 / 7 + 1);
  CHECK_THAT(tr.samples.back().t, WithinAbs(1.0, 1e-12));
  CHECK(tr.snapshots.size() == 3);
  CHECK(std::isnan(tr.samples.front().continuity));
  CHECK(std::isnan(tr.samples.back().continuity));
  CHECK(tr.samples[1].continuity < 1e-4);  // O(dt^2) with dt = 0.01

  sp.t_end = 0.0;
  const Trajectory zero = evolve(s.fields, sp, Potential::zero(), s.params.couplings(), s.grid);
  CHECK(zero.samples.size() == 1);
  CHECK(field_distance(zero.final_state, s.fields) == 0.0);
}

TEST_CASE("invalid evolution requests are rejected") {
  const State s = repulsive_hyperbolic();
  const Couplings c = s.params.couplings();
  auto bad = [&](EvolveSpec sp) { return evolve(s.fields, sp, Potential::zero(), c, s.grid); };
  EvolveSpec sp = spec_for(1e-2, 1.0);
  CHECK_THROWS_AS(bad([&] { auto x = sp; x.dt = 0; return x; }()), DomainError);
  CHECK_THROWS_AS(bad([&] { auto x = sp; x.t_end = -1; return x; }()), DomainError);
  CHECK_THROWS_AS(bad([&] { auto x = sp; x.t_end = 1e-3; return x; }()), DomainError);
  CHECK_THROWS_AS(bad([&] { auto x = sp; x.observer_stride = 0; return x; }()), DomainError);
  CHECK_THROWS_AS(bad([&] { auto x = sp; x.noise_amplitude = -1; return x; }()), DomainError);
  CHECK_THROWS_AS(bad([&] { auto x = sp; x.scheme = Scheme::kRk4FiniteDifference; return x; }()),
                  DomainError);
  CHECK_THROWS_WITH(bad([&] { auto x = sp; x.reference_mu = 100.0; x.observer_stride = 10; return x; }()),
                    Catch::Matchers::ContainsSubstring("pi/2"));
}

TEST_CASE("a blow-up surfaces with the partial trajectory") {
  const Grid g = make_grid(-10, 10, 64);
  FieldPair f{ComplexField(g.size(), cplx(1e100, 0)), ComplexField(g.size()), 0.0};
  Couplings c;
  c.g_a = 1e200;
  try {
    evolve(f, spec_for(1e-2, 1.0), Potential::zero(), c, g);
    FAIL("expected EvolveError");
  } catch (const EvolveError& e) {
    CHECK(e.partial().samples.size() == 1);
    CHECK(e.partial().final_state.finite());
  }
}

TEST_CASE("seeded perturbations are reproducible and measured") {
  const ParameterSet p = test::solved(Family::kDropletGround);
  const Grid g = recommended_grid(Family::kDropletGround, p);
  const FieldPair f = eval_family(Family::kDropletGround, p.shape(), p.mu(), g, 0.0);
  EvolveSpec sp = spec_for(1e-2, 20.0);
  sp.noise_amplitude = 1e-6;
  sp.seed = 42;
  const StabilityReport a = stability_probe(f, sp, Potential::zero(), p.couplings(), g);
  const StabilityReport b = stability_probe(f, sp, Potential::zero(), p.couplings(), g);
  CHECK(std::isfinite(a.growth_exponent));
  CHECK(a.growth_exponent == b.growth_exponent);
  CHECK(a.initial_deviation > 0.0);
  CHECK(a.times.size() == a.deviations.size());
  sp.noise_amplitude = 0.0;
  CHECK_THROWS_AS(stability_probe(f, sp, Potential::zero(), p.couplings(), g), DomainError);
}

TEST_CASE("imaginary-time relaxation finds the bright soliton") {
  const Grid g = make_grid(-30, 30, 1024);
  FieldPair seed{ComplexField(g.size()), ComplexField(g.size()), 0.0};
  for (std::size_t j = 0; j < g.size(); ++j) seed.psi_a[j] = std::exp(-g.x(j) * g.x(j) / 8.0);
  Couplings c;
  c.g_a = -1.0;
  const RelaxResult r = imaginary_time_relax(seed, c, 2.0, g);
  REQUIRE(r.converged);
  CHECK_THAT(r.mu, WithinAbs(-0.5, 1e-8));
  CHECK_THAT(r.energy, WithinAbs(-1.0 / 3.0, 1e-8));
  double d = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    d = std::max(d, std::abs(std::abs(r.fields.psi_a[j]) - 1.0 / std::cosh(g.x(j))));
  CHECK(d < 1e-6);
  CHECK_THROWS_AS(imaginary_time_relax(seed, c, 0.0, g), DomainError);
}

TEST_CASE("relaxation at the repulsive hyperbolic couplings lands on the exact state") {
  const State s = repulsive_hyperbolic();
  const double target = particle_numbers(s.fields, s.grid).total;
  FieldPair seed{ComplexField(s.grid.size()), ComplexField(s.grid.size()), 0.0};
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    const double gauss = std::exp(-s.grid.x(j) * s.grid.x(j) / 18.0);
    seed.psi_a[j] = gauss;
    seed.psi_m[j] = -gauss;
  }
  const RelaxResult r = imaginary_time_relax(seed, s.params.couplings(), target, s.grid);
  REQUIRE(r.converged);
  const double e_exact = energy(s.fields, Potential::zero(), s.params.couplings(), s.grid);
  CHECK_THAT(r.energy, WithinRel(e_exact, 1e-8));
  CHECK_THAT(r.mu, WithinAbs(s.params.mu(), 1e-7));
  auto shape_error = [&](const ComplexField& got, const ComplexField& want) {
    const std::size_t mid = got.size() / 2;
    const double sign = (got[mid].real() >= 0) == (want[mid].real() >= 0) ? 1.0 : -1.0;
    return test::sup_diff(RealField([&] {
                            RealField v(got.size());
                            for (std::size_t j = 0; j < v.size(); ++j) v[j] = sign * got[j].real();
                            return v;
                          }()),
                          RealField([&] {
                            RealField v(want.size());
                            for (std::size_t j = 0; j < v.size(); ++j) v[j] = want[j].real();
                            return v;
                          }())) /
           test::sup_norm(want);
  };
  CHECK(shape_error(r.fields.psi_a, s.fields.psi_a) < 1e-6);
  CHECK(shape_error(r.fields.psi_m, s.fields.psi_m) < 1e-6);
}
