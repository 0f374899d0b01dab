#include "ambec/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ambec/differentiation.hpp"
#include "ambec/kernels.hpp"

namespace ambec {

double StationaryResidual::sup_norm() const {
  double s = 0.0;
  for (double v : r_a) s = std::max(s, std::abs(v));
  for (double v : r_m) s = std::max(s, std::abs(v));
  return s;
}

StationaryResidual stationary_residual(std::span<const double> phi_a,
                                       std::span<const double> phi_m, const Couplings& c,
                                       double mu, const Grid& g) {
  require_same_size(phi_a.size(), g.size(), "stationary_residual(phi_a)");
  require_same_size(phi_m.size(), g.size(), "stationary_residual(phi_m)");
  const RealField d2a = second_derivative(phi_a, g);
  const RealField d2m = second_derivative(phi_m, g);
  StationaryResidual r{RealField(g.size()), RealField(g.size())};
  kernels::stationary_residual(kernels::default_exec(), phi_a, phi_m, d2a, d2m, c, mu, r.r_a,
                               r.r_m);
  return r;
}

namespace {

void check_field(const FieldPair& f, const Grid& g, const char* what) {
  require_same_size(f.psi_a.size(), g.size(), what);
  require_same_size(f.psi_m.size(), g.size(), what);
}

void check_potential(const Potential& p, const Grid& g) {
  if (!p.v_a.empty()) require_same_size(p.v_a.size(), g.size(), "potential v_a");
  if (!p.v_m.empty()) require_same_size(p.v_m.size(), g.size(), "potential v_m");
}

}  // namespace

std::pair<ComplexField, ComplexField> equation_rhs(const FieldPair& f, const Potential& p,
                                                   const Couplings& c, const Grid& g) {
  check_field(f, g, "equation_rhs");
  check_potential(p, g);
  ComplexField ha(g.size());
  ComplexField hm(g.size());
  // local_rhs returns -i * H_local; multiply back by i.
  kernels::local_rhs(kernels::default_exec(), {c, p.v_a, p.v_m}, f.psi_a, f.psi_m, ha, hm);
  const auto d2a = second_derivative(std::span<const cplx>(f.psi_a), g);
  const auto d2m = second_derivative(std::span<const cplx>(f.psi_m), g);
  const cplx i(0.0, 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    ha[j] = i * ha[j] - 0.5 * d2a[j];
    hm[j] = i * hm[j] - 0.25 * d2m[j];
  }
  return {std::move(ha), std::move(hm)};
}

ParticleNumbers particle_numbers(const FieldPair& f, const Grid& g) {
  check_field(f, g, "particle_numbers");
  const RealField w = quadrature_weights(g);
  ParticleNumbers out;
  for (std::size_t j = 0; j < g.size(); ++j) {
    out.n_a += w[j] * std::norm(f.psi_a[j]);
    out.n_m += w[j] * std::norm(f.psi_m[j]);
  }
  out.total = out.n_a + 2.0 * out.n_m;
  return out;
}

ParticleNumbers particle_numbers_background_subtracted(const FieldPair& f, const Grid& g,
                                                       double background_density) {
  ParticleNumbers out = particle_numbers(f, g);
  const RealField w = quadrature_weights(g);
  double box = 0.0;
  for (double v : w) box += v;
  out.n_m -= background_density * box;
  out.total = out.n_a + 2.0 * out.n_m;
  return out;
}

double energy(const FieldPair& f, const Potential& p, const Couplings& c, const Grid& g) {
  check_field(f, g, "energy");
  check_potential(p, g);
  const auto da = first_derivative(std::span<const cplx>(f.psi_a), g);
  const auto dm = first_derivative(std::span<const cplx>(f.psi_m), g);
  const RealField w = quadrature_weights(g);
  const double pa = c.alpha / std::numbers::sqrt2;
  double e = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const cplx a = f.psi_a[j];
    const cplx m = f.psi_m[j];
    const double na = std::norm(a);
    const double nm = std::norm(m);
    const double va = p.v_a.empty() ? 0.0 : p.v_a[j];
    const double vm = p.v_m.empty() ? 0.0 : p.v_m[j];
    double density = 0.5 * std::norm(da[j]) + 0.25 * std::norm(dm[j]) + va * na +
                     (vm + c.epsilon) * nm + 0.5 * c.g_a * na * na + 0.5 * c.g_m * nm * nm +
                     c.g_am * na * nm;
    // conj(m) a^2 + c.c. = 2 Re(conj(m) a^2)
    density += 2.0 * pa * (std::conj(m) * a * a).real();
    e += w[j] * density;
  }
  return e;
}

double default_phase_floor(const FieldPair& f) {
  double peak = 0.0;
  for (const auto& v : f.psi_a) peak = std::max(peak, std::norm(v));
  for (const auto& v : f.psi_m) peak = std::max(peak, std::norm(v));
  return peak > 0.0 ? 1e-12 * peak : std::numeric_limits<double>::min();
}

namespace {

void decompose(const ComplexField& psi, double floor, RealField& n, RealField& phase,
               std::vector<bool>& support) {
  const std::size_t size = psi.size();
  n.resize(size);
  phase.assign(size, std::numeric_limits<double>::quiet_NaN());
  support.assign(size, false);
  bool in_run = false;
  double prev = 0.0;
  for (std::size_t j = 0; j < size; ++j) {
    n[j] = std::norm(psi[j]);
    if (n[j] <= floor) {
      in_run = false;
      continue;
    }
    support[j] = true;
    double ph = std::arg(psi[j]);
    if (in_run) {
      // Continuous unwrap along the run.
      const double two_pi = 2.0 * std::numbers::pi;
      ph += two_pi * std::round((prev - ph) / two_pi);
    }
    phase[j] = ph;
    prev = ph;
    in_run = true;
  }
}

}  // namespace

MadelungDecomposition madelung(const FieldPair& f, double floor) {
  if (!(floor > 0.0)) throw DomainError("madelung: floor must be positive");
  require_same_size(f.psi_a.size(), f.psi_m.size(), "madelung");
  MadelungDecomposition out;
  decompose(f.psi_a, floor, out.n_a, out.phi_a, out.support_a);
  decompose(f.psi_m, floor, out.n_m, out.phi_m, out.support_m);
  return out;
}

namespace {

RealField mass_weighted_flux(const FieldPair& f, const Grid& g) {
  const auto da = first_derivative(std::span<const cplx>(f.psi_a), g);
  const auto dm = first_derivative(std::span<const cplx>(f.psi_m), g);
  RealField j(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    // Atomic mass 1, molecular mass 2; molecular number counts twice.
    const double ja = (std::conj(f.psi_a[k]) * da[k]).imag();
    const double jm = 0.5 * (std::conj(f.psi_m[k]) * dm[k]).imag();
    j[k] = ja + 2.0 * jm;
  }
  return j;
}

RealField phase_gradient_flux(const FieldPair& f, const Grid& g) {
  const auto md = madelung(f, default_phase_floor(f));
  auto species_flux = [&](const RealField& n, const RealField& phase,
                          const std::vector<bool>& support) {
    // Phase gradient by FD on the unwrapped support runs; zero off support.
    RealField out(g.size(), 0.0);
    const double dx = g.dx();
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!support[k]) continue;
      const bool left = k > 0 && support[k - 1];
      const bool right = k + 1 < g.size() && support[k + 1];
      const bool left2 = k > 1 && support[k - 2] && left;
      const bool right2 = k + 2 < g.size() && support[k + 2] && right;
      double grad = 0.0;
      if (left2 && right2)
        grad = (phase[k - 2] - 8.0 * phase[k - 1] + 8.0 * phase[k + 1] - phase[k + 2]) /
               (12.0 * dx);
      else if (left && right)
        grad = (phase[k + 1] - phase[k - 1]) / (2.0 * dx);
      else if (right)
        grad = (phase[k + 1] - phase[k]) / dx;
      else if (left)
        grad = (phase[k] - phase[k - 1]) / dx;
      out[k] = n[k] * grad;
    }
    return out;
  };
  RealField ja = species_flux(md.n_a, md.phi_a, md.support_a);
  const RealField jm = species_flux(md.n_m, md.phi_m, md.support_m);
  for (std::size_t k = 0; k < g.size(); ++k) ja[k] += jm[k];
  return ja;
}

}  // namespace

RealField continuity_residual(const FieldPair& before, const FieldPair& now,
                              const FieldPair& after, const Grid& g, FluxForm form) {
  check_field(before, g, "continuity_residual");
  check_field(now, g, "continuity_residual");
  check_field(after, g, "continuity_residual");
  const double dt1 = now.t - before.t;
  const double dt2 = after.t - now.t;
  if (!(dt1 > 0.0) || std::abs(dt1 - dt2) > 1e-9 * std::max(dt1, dt2))
    throw DomainError("continuity_residual: snapshots must be equally spaced in time");

  const RealField flux =
      form == FluxForm::kMassWeighted ? mass_weighted_flux(now, g) : phase_gradient_flux(now, g);
  ComplexField fc(flux.begin(), flux.end());
  const auto dflux = first_derivative(std::span<const cplx>(fc), g);

  RealField r(g.size());
  const double inv = 1.0 / (dt1 + dt2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double rho_after = std::norm(after.psi_a[k]) + 2.0 * std::norm(after.psi_m[k]);
    const double rho_before = std::norm(before.psi_a[k]) + 2.0 * std::norm(before.psi_m[k]);
    r[k] = (rho_after - rho_before) * inv + dflux[k].real();
  }
  return r;
}

}  // namespace ambec
