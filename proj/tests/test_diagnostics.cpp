#include <catch_amalgamated.hpp>
#include <numbers>

#include "ambec/catalog.hpp"
#include "ambec/diagnostics.hpp"
#include "ambec/model.hpp"
#include "ambec/propagator.hpp"
#include "support.hpp"

using namespace ambec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ComplexField as_complex(const RealField& r) { return {r.begin(), r.end()}; }

Trajectory phase_track(std::initializer_list<double> times, double rate) {
  Trajectory tr;
  for (double t : times) {
    Sample s;
    s.t = t;
    s.overlap_a = std::polar(1.0, -rate * t);
    s.overlap_m = std::polar(2.0, -2 * rate * t);
    tr.samples.push_back(s);
  }
  return tr;
}

}  // namespace

TEST_CASE("overlaps") {
  const Grid g = make_grid(-40, 40, 2048);
  SECTION("shifted sech profiles") {
    const double shift = 1.7;
    RealField f(g.size()), h(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      f[j] = 1.0 / std::cosh(g.x(j));
      h[j] = 1.0 / std::cosh(g.x(j) - shift);
    }
    CHECK_THAT(overlap(f, h, g), WithinRel(2 * shift / std::sinh(shift), 1e-12));
    CHECK_THAT(overlap(f, f, g), WithinRel(2.0, 1e-12));
  }
  SECTION("complex overlap conjugates its first argument") {
    ComplexField f(g.size()), h(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      f[j] = cplx(0, 1) / std::cosh(g.x(j));
      h[j] = 1.0 / std::cosh(g.x(j));
    }
    const cplx v = overlap(f, h, g);
    CHECK_THAT(v.real(), WithinAbs(0.0, 1e-14));
    CHECK_THAT(v.imag(), WithinRel(-2.0, 1e-12));
  }
  SECTION("ground and excited droplets are orthogonal") {
    const ParameterSet s = test::solved(Family::kDropletGround);
    const Profiles a = eval_profiles(Family::kDropletGround, s.shape(), g);
    const Profiles b = eval_profiles(Family::kDropletExcited, s.shape(), g);
    CHECK(std::abs(overlap(a.a, b.a, g)) < 1e-14);
  }
}

TEST_CASE("two-mode projection") {
  const ParameterSet s = test::solved(Family::kDropletGround);
  const Grid g = recommended_grid(Family::kDropletGround, s);
  const ModeBasis basis = make_mode_basis(Family::kDropletGround, s.shape(), g);
  CHECK_THAT(overlap(basis.ground, basis.ground, g), WithinAbs(1.0, 1e-13));
  CHECK_THAT(overlap(basis.excited, basis.excited, g), WithinAbs(1.0, 1e-13));

  SECTION("a basis vector projects onto itself") {
    const QubitState q = project_qubit(as_complex(basis.ground), basis, g);
    CHECK_THAT(std::abs(q.c0), WithinAbs(1.0, 1e-13));
    CHECK(std::abs(q.c1) < 1e-14);
    CHECK(std::abs(q.leakage) < 1e-13);
  }
  SECTION("an equal superposition splits evenly") {
    ComplexField psi(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
      psi[j] = 3.0 * (basis.ground[j] + cplx(0, 1) * basis.excited[j]) / std::numbers::sqrt2;
    const QubitState q = project_qubit(psi, basis, g);
    CHECK_THAT(std::norm(q.c0), WithinRel(4.5, 1e-12));
    CHECK_THAT(std::norm(q.c1), WithinRel(4.5, 1e-12));
    CHECK_THAT(std::arg(q.c1) - std::arg(q.c0), WithinAbs(std::numbers::pi / 2, 1e-12));
    CHECK(std::abs(q.bookkeeping_error()) < 1e-12 * q.norm2);
  }
  SECTION("a broad profile leaks out of the two-mode space") {
    ComplexField psi(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) psi[j] = std::exp(-g.x(j) * g.x(j) / 200.0);
    const QubitState q = project_qubit(psi, basis, g);
    CHECK(q.leakage > 0.1);
    CHECK(q.leakage < 1.0);
    CHECK(std::abs(q.bookkeeping_error()) < 1e-12 * q.norm2);
  }
  SECTION("a degenerate basis is rejected") {
    ModeBasis bad = basis;
    std::fill(bad.excited.begin(), bad.excited.end(), 0.0);
    CHECK_THROWS_AS(project_qubit(as_complex(basis.ground), bad, g), DomainError);
    CHECK_THROWS_AS(project_qubit(ComplexField(3), basis, g), DomainError);
  }
}

TEST_CASE("bookkeeping holds along an evolving superposition") {
  const ParameterSet s = test::solved(Family::kDropletGround);
  const Grid g = recommended_grid(Family::kDropletGround, s);
  const ModeBasis basis = make_mode_basis(Family::kDropletGround, s.shape(), g);
  FieldPair f = eval_family(Family::kDropletGround, s.shape(), s.mu(), g, 0.0);
  const double scale = std::sqrt(particle_numbers(f, g).n_a);
  for (std::size_t j = 0; j < g.size(); ++j)
    f.psi_a[j] = scale * (basis.ground[j] + basis.excited[j]) / std::numbers::sqrt2;
  EvolveSpec sp;
  sp.dt = 1e-3;
  sp.t_end = 5.0;
  sp.observer_stride = 50;
  const Trajectory tr = evolve(f, sp, Potential::zero(), s.couplings(), g, &basis);
  const QubitState& q0 = *tr.samples.front().qubit;
  CHECK_THAT(std::norm(q0.c0), WithinRel(0.5 * scale * scale, 1e-12));
  for (const Sample& smp : tr.samples) {
    REQUIRE(smp.qubit.has_value());
    CHECK(std::abs(smp.qubit->bookkeeping_error()) <= 1e-12 * smp.qubit->norm2);
    CHECK(smp.qubit->leakage >= -1e-12);
  }
}

TEST_CASE("phase slope") {
  SECTION("recovers a uniform rotation") {
    const Trajectory tr = phase_track({0.0, 0.1, 0.2, 0.3, 0.4}, 1.25);
    CHECK_THAT(phase_slope(tr, Species::kAtomic), WithinAbs(1.25, 1e-12));
    CHECK_THAT(phase_slope(tr, Species::kMolecular), WithinAbs(2.5, 1e-12));
  }
  SECTION("unwraps across the branch cut") {
    const Trajectory tr = phase_track({0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, -1.2);
    CHECK_THAT(phase_slope(tr, Species::kAtomic), WithinAbs(-1.2, 1e-12));
  }
  SECTION("a free constant field does not rotate") {
    const Grid g = make_grid(-5, 5, 64);
    const FieldPair f{ComplexField(g.size(), 0.3), ComplexField(g.size(), 0.2), 0.0};
    EvolveSpec sp;
    sp.dt = 1e-2;
    sp.t_end = 1.0;
    const Trajectory tr = evolve(f, sp, Potential::zero(), Couplings{}, g);
    CHECK(std::abs(phase_slope(tr, Species::kAtomic)) < 1e-13);
    CHECK(std::abs(phase_slope(tr, Species::kMolecular)) < 1e-13);
  }
  SECTION("ambiguous or short records are rejected") {
    CHECK_THROWS_AS(phase_slope(phase_track({0.0, 1.0}, 2.0), Species::kAtomic), DomainError);
    CHECK_THROWS_AS(phase_slope(phase_track({0.0}, 0.1), Species::kAtomic), DomainError);
  }
}

TEST_CASE("flat-top metric") {
  CHECK(flat_top_metric(ComplexField(64, cplx(0.7, 0.1))) == 0.0);
  CHECK(flat_top_metric(ComplexField(64)) == 0.0);
  auto metric = [](double B) {
    const Grid w = flat_top_window(1.0);
    const AnsatzParams p{1.0, B, 1.0, 1.0, 0.0};
    const FieldPair f = eval_family(Family::kDropletGround, p, -0.5, w, 0.0);
    return flat_top_metric(f.psi_m);
  };
  CHECK(metric(100.0) < 0.02);
  CHECK(metric(0.1) > 0.3);
  CHECK(metric(1.0) > metric(10.0));
}

TEST_CASE("tail fits and node counts") {
  const Grid g = make_grid(-30, 30, 2048);
  ComplexField f(g.size());
  SECTION("exponential decay rate") {
    for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-0.8 * std::abs(g.x(j)));
    const TailFit fit = tail_exponent(f, g, 0.5, TailModel::kExponential);
    CHECK_THAT(fit.exponent, WithinAbs(-0.8, 1e-10));
    CHECK(fit.std_error < 1e-10);
  }
  SECTION("power-law exponent") {
    for (std::size_t j = 0; j < g.size(); ++j) f[j] = 1.0 / (1.0 + g.x(j) * g.x(j));
    const TailFit fit = tail_exponent(f, g, 0.25, TailModel::kPowerLaw);
    CHECK_THAT(fit.exponent, WithinAbs(-2.0, 0.01));
  }
  SECTION("a rising tail is rejected") {
    for (std::size_t j = 0; j < g.size(); ++j) f[j] = 1.0 + 0.01 * g.x(j) * g.x(j);
    CHECK_THROWS_AS(tail_exponent(f, g, 0.25, TailModel::kPowerLaw), DomainError);
  }
  SECTION("nodes") {
    RealField r(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) r[j] = std::sin(g.x(j)) * std::exp(-g.x(j) * g.x(j) / 50);
    CHECK(node_count(r) == 19);  // zeros at k pi, abs(k) <= 9
    RealField z(g.size(), 0.0);
    CHECK(node_count(z) == 0);
  }
}
