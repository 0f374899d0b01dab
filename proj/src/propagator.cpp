#include "ambec/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ambec/differentiation.hpp"
#include "ambec/kernels.hpp"
#include "ambec/model.hpp"
#include "ambec/spectral.hpp"

namespace ambec {

void EvolveSpec::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("evolve: dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("evolve: t_end must be >= 0");
  if (t_end > 0.0 && t_end < dt) throw DomainError("evolve: t_end must be 0 or at least dt");
  if (observer_stride < 1) throw DomainError("evolve: observer_stride must be >= 1");
  if (!(noise_amplitude >= 0.0)) throw DomainError("evolve: noise_amplitude must be >= 0");
  if (reference_mu) {
    const double turn = 2.0 * std::abs(*reference_mu) * dt * observer_stride;
    if (!(turn < 0.5 * std::numbers::pi)) {
      std::ostringstream os;
      os << "evolve: phase advance 2|mu| dt stride = " << turn
         << " per sample must stay below pi/2; reduce observer_stride";
      throw DomainError(os.str());
    }
  }
}

namespace {

void require_finite(const FieldPair& f, double t) {
  if (!f.finite()) {
    std::ostringstream os;
    os << "non-finite field (NaN/overflow) at t = " << t;
    throw NumericalError(os.str());
  }
}

void resize_all(std::size_t n, std::initializer_list<ComplexField*> bufs) {
  for (ComplexField* b : bufs) b->assign(n, cplx{});
}

}  // namespace

StrangStepper::StrangStepper(const Grid& g, const Potential& p, const Couplings& c, double dt)
    : grid_(g), potential_(p), couplings_(c), dt_(dt) {
  if (!g.spectral()) throw DomainError("Strang stepping needs a spectral grid");
  const auto& k = g.wavenumbers();
  half_a_.resize(k.size());
  half_m_.resize(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double k2 = k[j] * k[j];
    half_a_[j] = std::polar(1.0, -0.5 * k2 * 0.5 * dt);
    half_m_[j] = std::polar(1.0, -0.25 * k2 * 0.5 * dt);
  }
  resize_all(g.size(), {&k1a_, &k2a_, &k3a_, &k4a_, &k1m_, &k2m_, &k3m_, &k4m_, &ta_, &tm_});
}

void StrangStepper::step(FieldPair& f) {
  require_same_size(f.size(), grid_.size(), "StrangStepper");
  const auto ex = kernels::default_exec();
  auto kinetic = [&](ComplexField& psi, const ComplexField& phase) {
    spectral::forward(psi);
    kernels::multiply(ex, psi, phase);
    spectral::backward(psi);
  };
  kinetic(f.psi_a, half_a_);
  kinetic(f.psi_m, half_m_);

  const kernels::LocalModel model{couplings_, potential_.v_a, potential_.v_m};
  const double h = dt_;
  kernels::local_rhs(ex, model, f.psi_a, f.psi_m, k1a_, k1m_);
  kernels::axpy(ex, f.psi_a, k1a_, 0.5 * h, ta_);
  kernels::axpy(ex, f.psi_m, k1m_, 0.5 * h, tm_);
  kernels::local_rhs(ex, model, ta_, tm_, k2a_, k2m_);
  kernels::axpy(ex, f.psi_a, k2a_, 0.5 * h, ta_);
  kernels::axpy(ex, f.psi_m, k2m_, 0.5 * h, tm_);
  kernels::local_rhs(ex, model, ta_, tm_, k3a_, k3m_);
  kernels::axpy(ex, f.psi_a, k3a_, h, ta_);
  kernels::axpy(ex, f.psi_m, k3m_, h, tm_);
  kernels::local_rhs(ex, model, ta_, tm_, k4a_, k4m_);
  kernels::rk4_combine(ex, f.psi_a, k1a_, k2a_, k3a_, k4a_, h);
  kernels::rk4_combine(ex, f.psi_m, k1m_, k2m_, k3m_, k4m_, h);

  kinetic(f.psi_a, half_a_);
  kinetic(f.psi_m, half_m_);
  f.t += dt_;
  require_finite(f, f.t);
}

double fd_cfl_limit(const Grid& g) {
  // 4th-order stencil: |eigenvalue of d^2| <= 16/(3 dx^2); atomic prefactor 1/2.
  // RK4 is stable on the imaginary axis up to 2 sqrt(2).
  const double omega_max = 0.5 * 16.0 / (3.0 * g.dx() * g.dx());
  return 0.9 * 2.0 * std::numbers::sqrt2 / omega_max;
}

FdRk4Stepper::FdRk4Stepper(const Grid& g, const Potential& p, const Couplings& c, double dt,
                           double edge_mu)
    : grid_(g), potential_(p), couplings_(c), dt_(dt), edge_mu_(edge_mu) {
  if (g.spectral()) throw DomainError("FD RK4 stepping needs a finite-difference grid");
  if (std::abs(dt) > fd_cfl_limit(g)) {
    std::ostringstream os;
    os << "CFL: |dt| = " << std::abs(dt) << " exceeds the RK4/FD stability limit "
       << fd_cfl_limit(g) << " for dx = " << g.dx();
    warning_ = os.str();
  }
  resize_all(g.size(), {&k1a_, &k2a_, &k3a_, &k4a_, &k1m_, &k2m_, &k3m_, &k4m_, &ta_, &tm_});
}

void FdRk4Stepper::rhs(const ComplexField& a, const ComplexField& m, ComplexField& da,
                       ComplexField& dm) {
  const auto ex = kernels::default_exec();
  kernels::local_rhs(ex, {couplings_, potential_.v_a, potential_.v_m}, a, m, da, dm);
  const ComplexField d2a = fd::second_derivative(a, grid_.dx());
  const ComplexField d2m = fd::second_derivative(m, grid_.dx());
  const cplx i(0.0, 1.0);
  const std::size_t n = a.size();
  for (std::size_t j = 1; j + 1 < n; ++j) {
    da[j] += 0.5 * i * d2a[j];
    dm[j] += 0.25 * i * d2m[j];
  }
  for (std::size_t j : {std::size_t{0}, n - 1}) {
    da[j] = -i * edge_mu_ * a[j];
    dm[j] = -2.0 * i * edge_mu_ * m[j];
  }
}

void FdRk4Stepper::step(FieldPair& f) {
  require_same_size(f.size(), grid_.size(), "FdRk4Stepper");
  const auto ex = kernels::default_exec();
  const double h = dt_;
  rhs(f.psi_a, f.psi_m, k1a_, k1m_);
  kernels::axpy(ex, f.psi_a, k1a_, 0.5 * h, ta_);
  kernels::axpy(ex, f.psi_m, k1m_, 0.5 * h, tm_);
  rhs(ta_, tm_, k2a_, k2m_);
  kernels::axpy(ex, f.psi_a, k2a_, 0.5 * h, ta_);
  kernels::axpy(ex, f.psi_m, k2m_, 0.5 * h, tm_);
  rhs(ta_, tm_, k3a_, k3m_);
  kernels::axpy(ex, f.psi_a, k3a_, h, ta_);
  kernels::axpy(ex, f.psi_m, k3m_, h, tm_);
  rhs(ta_, tm_, k4a_, k4m_);
  kernels::rk4_combine(ex, f.psi_a, k1a_, k2a_, k3a_, k4a_, h);
  kernels::rk4_combine(ex, f.psi_m, k1m_, k2m_, k3m_, k4m_, h);
  f.t += dt_;
  require_finite(f, f.t);
}

FieldPair step_strang(const FieldPair& f, const Potential& p, const Couplings& c, const Grid& g,
                      double dt) {
  FieldPair out = f;
  StrangStepper(g, p, c, dt).step(out);
  return out;
}

FieldPair step_fd_rk4(const FieldPair& f, const Potential& p, const Couplings& c, const Grid& g,
                      double dt, double edge_mu) {
  FieldPair out = f;
  FdRk4Stepper(g, p, c, dt, edge_mu).step(out);
  return out;
}

namespace {

// Type-erased stepper over the two schemes.
class Stepper {
 public:
  Stepper(Scheme s, const Grid& g, const Potential& p, const Couplings& c, double dt,
          double edge_mu) {
    if (s == Scheme::kStrangSpectral)
      strang_.emplace(g, p, c, dt);
    else
      fd_.emplace(g, p, c, dt, edge_mu);
  }
  void step(FieldPair& f) {
    if (strang_)
      strang_->step(f);
    else
      fd_->step(f);
  }
  std::optional<std::string> warning() const {
    return fd_ ? fd_->cfl_warning() : std::nullopt;
  }

 private:
  std::optional<StrangStepper> strang_;
  std::optional<FdRk4Stepper> fd_;
};

void check_scheme(const EvolveSpec& spec, const Grid& g) {
  if (spec.scheme == Scheme::kStrangSpectral && !g.spectral())
    throw DomainError("evolve: Strang scheme needs a spectral grid");
  if (spec.scheme == Scheme::kRk4FiniteDifference && g.spectral())
    throw DomainError("evolve: RK4/FD scheme needs a finite-difference grid");
}

void add_noise(FieldPair& f, const Grid& g, double amplitude, std::uint64_t seed) {
  if (amplitude <= 0.0) return;
  double peak = 0.0;
  for (const auto& v : f.psi_a) peak = std::max(peak, std::abs(v));
  for (const auto& v : f.psi_m) peak = std::max(peak, std::abs(v));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = amplitude * peak / std::numbers::sqrt2;
  const std::size_t lo = g.spectral() ? 0 : 1;
  const std::size_t hi = g.spectral() ? g.size() : g.size() - 1;
  for (ComplexField* psi : {&f.psi_a, &f.psi_m})
    for (std::size_t j = lo; j < hi; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      (*psi)[j] += s * cplx(re, im);
    }
}

std::size_t step_count(const EvolveSpec& spec) {
  return static_cast<std::size_t>(std::llround(spec.t_end / spec.dt));
}

}  // namespace

Trajectory evolve(const FieldPair& f0, const EvolveSpec& spec, const Potential& p,
                  const Couplings& c, const Grid& g, const ModeBasis* basis) {
  spec.validate();
  check_scheme(spec, g);
  require_same_size(f0.size(), g.size(), "evolve");
  require_same_size(f0.psi_m.size(), g.size(), "evolve");

  Trajectory tr;
  FieldPair now = f0;
  now.t = 0.0;
  add_noise(now, g, spec.noise_amplitude, spec.seed);
  const FieldPair initial = now;

  Stepper stepper(spec.scheme, g, p, c, spec.dt, spec.reference_mu.value_or(0.0));
  if (auto w = stepper.warning()) tr.warnings.push_back(*w);

  const std::size_t nsteps = step_count(spec);
  std::vector<double> snaps = spec.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  auto observe = [&](const FieldPair& f) {
    Sample s;
    s.t = f.t;
    const ParticleNumbers n = particle_numbers(f, g);
    s.n_a = n.n_a;
    s.n_m = n.n_m;
    s.n_total = n.total;
    s.energy = energy(f, p, c, g);
    s.overlap_a = overlap(initial.psi_a, f.psi_a, g);
    s.overlap_m = overlap(initial.psi_m, f.psi_m, g);
    s.continuity = std::numeric_limits<double>::quiet_NaN();
    if (basis) s.qubit = project_qubit(f.psi_a, *basis, g);
    return s;
  };
  auto take_snapshots = [&](const FieldPair& f, std::size_t k) {
    while (next_snap < snaps.size() &&
           snaps[next_snap] <= (static_cast<double>(k) + 0.5) * spec.dt) {
      if (snaps[next_snap] >= (static_cast<double>(k) - 0.5) * spec.dt || k == 0)
        tr.snapshots.push_back(f);
      ++next_snap;
    }
  };

  tr.samples.push_back(observe(now));
  take_snapshots(now, 0);
  FieldPair before;
  bool pending = false;  // continuity of the last sample still needs the next state
  for (std::size_t k = 1; k <= nsteps; ++k) {
    FieldPair after = now;
    try {
      stepper.step(after);
    } catch (const NumericalError& e) {
      tr.final_state = now;
      throw EvolveError(e.what(), std::move(tr));
    }
    after.t = static_cast<double>(k) * spec.dt;
    if (pending) {
      const RealField r = continuity_residual(before, now, after, g);
      double mx = 0.0;
      for (double v : r) mx = std::max(mx, std::abs(v));
      tr.samples.back().continuity = mx;
      pending = false;
    }
    before = std::move(now);
    now = std::move(after);
    if (k % static_cast<std::size_t>(spec.observer_stride) == 0 || k == nsteps) {
      tr.samples.push_back(observe(now));
      pending = true;
    }
    take_snapshots(now, k);
  }
  tr.final_state = std::move(now);
  return tr;
}

namespace {

double l2_distance(const FieldPair& a, const FieldPair& b, const Grid& g) {
  const RealField w = quadrature_weights(g);
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    s += w[j] * (std::norm(a.psi_a[j] - b.psi_a[j]) + 2.0 * std::norm(a.psi_m[j] - b.psi_m[j]));
  return std::sqrt(s);
}

}  // namespace

StabilityReport stability_probe(const FieldPair& f0, const EvolveSpec& spec, const Potential& p,
                                const Couplings& c, const Grid& g) {
  spec.validate();
  check_scheme(spec, g);
  if (!(spec.noise_amplitude > 0.0))
    throw DomainError("stability_probe: noise_amplitude must be positive");
  StabilityReport rep;
  rep.seed = spec.seed;
  FieldPair clean = f0;
  clean.t = 0.0;
  FieldPair noisy = clean;
  add_noise(noisy, g, spec.noise_amplitude, spec.seed);
  const double edge = spec.reference_mu.value_or(0.0);
  Stepper sc(spec.scheme, g, p, c, spec.dt, edge);
  Stepper sn(spec.scheme, g, p, c, spec.dt, edge);
  auto record = [&](double t) {
    const double d = l2_distance(clean, noisy, g);
    rep.times.push_back(t);
    rep.deviations.push_back(d);
    rep.max_deviation = std::max(rep.max_deviation, d);
  };
  record(0.0);
  const std::size_t nsteps = step_count(spec);
  for (std::size_t k = 1; k <= nsteps; ++k) {
    sc.step(clean);
    sn.step(noisy);
    if (k % static_cast<std::size_t>(spec.observer_stride) == 0 || k == nsteps)
      record(static_cast<double>(k) * spec.dt);
  }
  rep.initial_deviation = rep.deviations.front();
  rep.final_deviation = rep.deviations.back();
  // Least-squares slope of log(deviation) vs t.
  const std::size_t n = rep.times.size();
  if (n >= 2) {
    double tm = 0.0, lm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      tm += rep.times[k];
      lm += std::log(rep.deviations[k]);
    }
    tm /= static_cast<double>(n);
    lm /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      num += (rep.times[k] - tm) * (std::log(rep.deviations[k]) - lm);
      den += (rep.times[k] - tm) * (rep.times[k] - tm);
    }
    rep.growth_exponent = num / den;
  }
  return rep;
}

RelaxResult imaginary_time_relax(const FieldPair& f0, const Couplings& c, double target_n,
                                 const Grid& g, const RelaxOptions& opts) {
  if (!(target_n > 0.0)) throw DomainError("imaginary_time_relax: target N must be positive");
  if (!g.spectral()) throw DomainError("imaginary_time_relax needs a spectral grid");
  if (!(opts.dtau > 0.0)) throw DomainError("imaginary_time_relax: dtau must be positive");
  require_same_size(f0.size(), g.size(), "imaginary_time_relax");

  const Potential none;
  const auto& k = g.wavenumbers();
  RealField precond_a(k.size()), precond_m(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double k2 = k[j] * k[j];
    precond_a[j] = 1.0 / (1.0 + opts.dtau * 0.5 * k2);
    precond_m[j] = 1.0 / (1.0 + 0.5 * opts.dtau * 0.25 * k2);
  }

  RelaxResult res;
  FieldPair f = f0;
  f.t = 0.0;
  auto renormalize = [&](FieldPair& x) {
    const double n = particle_numbers(x, g).total;
    if (!(n > 1e-300) || !std::isfinite(n))
      throw NumericalError("imaginary_time_relax: collapse to the zero field (no bound state)");
    const double s = std::sqrt(target_n / n);
    for (auto& v : x.psi_a) v *= s;
    for (auto& v : x.psi_m) v *= s;
  };
  renormalize(f);

  const RealField w = quadrature_weights(g);
  const cplx i(0.0, 1.0);
  ComplexField la(g.size()), lm(g.size());
  double e_old = energy(f, none, c, g);
  for (res.steps = 1; res.steps <= opts.max_steps; ++res.steps) {
    const auto [ha, hm] = equation_rhs(f, none, c, g);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      num += w[j] * (std::conj(f.psi_a[j]) * ha[j] + std::conj(f.psi_m[j]) * hm[j]).real();
      den += w[j] * (std::norm(f.psi_a[j]) + 2.0 * std::norm(f.psi_m[j]));
    }
    const double lambda = num / den;
    double grad = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      grad = std::max({grad, std::abs(ha[j] - lambda * f.psi_a[j]),
                       std::abs(hm[j] - 2.0 * lambda * f.psi_m[j])});

    // Explicit local part, implicit kinetic part.
    kernels::local_rhs(kernels::default_exec(), {c, {}, {}}, f.psi_a, f.psi_m, la, lm);
    for (std::size_t j = 0; j < g.size(); ++j) {
      f.psi_a[j] -= opts.dtau * (i * la[j] - lambda * f.psi_a[j]);
      f.psi_m[j] -= 0.5 * opts.dtau * (i * lm[j] - 2.0 * lambda * f.psi_m[j]);
    }
    spectral::forward(f.psi_a);
    spectral::forward(f.psi_m);
    for (std::size_t j = 0; j < g.size(); ++j) {
      f.psi_a[j] *= precond_a[j];
      f.psi_m[j] *= precond_m[j];
    }
    spectral::backward(f.psi_a);
    spectral::backward(f.psi_m);
    renormalize(f);
    if (!f.finite()) throw NumericalError("imaginary_time_relax: non-finite field");

    const double e_new = energy(f, none, c, g);
    const double change = std::abs(e_new - e_old) / std::max(1.0, std::abs(e_new));
    e_old = e_new;
    res.mu = lambda;
    res.gradient_norm = grad;
    if (change < opts.energy_tolerance && grad < opts.gradient_tolerance) {
      res.converged = true;
      break;
    }
  }
  res.steps = std::min(res.steps, opts.max_steps);
  res.energy = e_old;
  res.fields = std::move(f);
  std::ostringstream os;
  if (res.converged)
    os << "converged after " << res.steps << " steps";
  else
    os << "no convergence after " << opts.max_steps << " steps (gradient " << res.gradient_norm
       << ")";
  res.message = os.str();
  return res;
}

}  // namespace ambec
