#include "ambec/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ambec/differentiation.hpp"

namespace ambec {

cplx overlap(std::span<const cplx> f, std::span<const cplx> g, const Grid& grid) {
  require_same_size(f.size(), grid.size(), "overlap");
  require_same_size(g.size(), grid.size(), "overlap");
  const RealField w = quadrature_weights(grid);
  cplx s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += w[j] * std::conj(f[j]) * g[j];
  return s;
}

double overlap(std::span<const double> f, std::span<const double> g, const Grid& grid) {
  require_same_size(f.size(), grid.size(), "overlap");
  require_same_size(g.size(), grid.size(), "overlap");
  const RealField w = quadrature_weights(grid);
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += w[j] * f[j] * g[j];
  return s;
}

namespace {

void normalize(RealField& v, const Grid& g, const char* what) {
  const double n2 = overlap(v, v, g);
  if (!(n2 > 0.0)) throw DomainError(std::string("mode basis: zero-norm ") + what + " mode");
  const double s = 1.0 / std::sqrt(n2);
  for (double& e : v) e *= s;
}

}  // namespace

ModeBasis make_mode_basis(Family ground, const AnsatzParams& p, const Grid& g) {
  if (!is_ground(ground)) ground = partner(ground);
  const Profiles pg = eval_profiles(ground, p, g);
  const Profiles pe = eval_profiles(partner(ground), p, g);
  ModeBasis b{pg.a, pe.a, pg.m,
              std::string(family_name(ground)) + "/" + std::string(family_name(partner(ground)))};
  normalize(b.ground, g, "ground");
  normalize(b.excited, g, "excited");
  return b;
}

double QubitState::bookkeeping_error() const {
  return std::norm(c0) + std::norm(c1) + leakage * norm2 - norm2;
}

QubitState project_qubit(std::span<const cplx> psi_a, const ModeBasis& basis, const Grid& g) {
  require_same_size(psi_a.size(), g.size(), "project_qubit");
  require_same_size(basis.ground.size(), g.size(), "project_qubit basis");
  require_same_size(basis.excited.size(), g.size(), "project_qubit basis");
  const RealField w = quadrature_weights(g);
  double ng = 0.0, ne = 0.0;
  QubitState q;
  for (std::size_t j = 0; j < g.size(); ++j) {
    ng += w[j] * basis.ground[j] * basis.ground[j];
    ne += w[j] * basis.excited[j] * basis.excited[j];
    q.c0 += w[j] * basis.ground[j] * psi_a[j];
    q.c1 += w[j] * basis.excited[j] * psi_a[j];
    q.norm2 += w[j] * std::norm(psi_a[j]);
  }
  if (!(ng > 0.0) || !(ne > 0.0)) throw DomainError("project_qubit: zero-norm basis vector");
  q.leakage = q.norm2 > 0.0 ? 1.0 - (std::norm(q.c0) + std::norm(q.c1)) / q.norm2 : 0.0;
  return q;
}

double phase_slope(const Trajectory& tr, Species which) {
  const auto& s = tr.samples;
  if (s.size() < 2) throw DomainError("phase_slope: need at least two samples");
  std::vector<double> phase(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const cplx o = which == Species::kAtomic ? s[k].overlap_a : s[k].overlap_m;
    phase[k] = std::arg(o);
    if (k > 0) {
      double d = phase[k] - phase[k - 1];
      d -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
      if (std::abs(d) > 0.5 * std::numbers::pi)
        throw DomainError("phase_slope: phase step exceeds pi/2 between samples at t = " +
                          std::to_string(s[k].t) + "; reduce the observer stride");
      phase[k] = phase[k - 1] + d;
    }
  }
  // Centered least squares.
  double tm = 0.0, pm = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    tm += s[k].t;
    pm += phase[k];
  }
  tm /= static_cast<double>(s.size());
  pm /= static_cast<double>(s.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    num += (s[k].t - tm) * (phase[k] - pm);
    den += (s[k].t - tm) * (s[k].t - tm);
  }
  return -num / den;
}

double flat_top_metric(std::span<const cplx> psi_m) {
  if (psi_m.empty()) throw DomainError("flat_top_metric: empty field");
  const std::size_t n = psi_m.size();
  const std::size_t lo = n / 4;
  const std::size_t hi = std::max(lo + 1, 3 * n / 4);
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (std::size_t j = lo; j < hi; ++j) {
    const double a = std::abs(psi_m[j]);
    mx = std::max(mx, a);
    mn = std::min(mn, a);
  }
  return mx > 0.0 ? (mx - mn) / mx : 0.0;
}

Grid flat_top_window(double beta, std::size_t n) {
  if (!(beta > 0.0)) throw DomainError("flat_top_window: beta must be positive");
  return make_grid(-2.0 / beta, 2.0 / beta, n, Discretization::kFiniteDifference);
}

TailFit tail_exponent(std::span<const cplx> field, const Grid& g, double window,
                      TailModel model, double floor) {
  require_same_size(field.size(), g.size(), "tail_exponent");
  if (!(window > 0.0 && window <= 1.0)) throw DomainError("tail_exponent: window in (0, 1]");
  if (floor < 0.0) throw DomainError("tail_exponent: floor must be non-negative");
  double peak = 0.0;
  for (const cplx& v : field) peak = std::max(peak, std::abs(v));
  std::size_t last = g.size() - 1;
  if (floor > 0.0)
    while (last > 0 && !(std::abs(field[last]) > floor * peak)) --last;
  const double x_hi = g.x(last);
  const double x_lo = x_hi * (1.0 - window);
  std::vector<double> xs, ys;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= last; ++j) {
    const double x = g.x(j);
    if (x <= 0.0 || x < x_lo) continue;
    const double a = std::abs(field[j]);
    if (!(a > 0.0) || !(a < prev))
      throw DomainError("tail_exponent: tail is not strictly decreasing near x = " +
                        std::to_string(x));
    prev = a;
    xs.push_back(model == TailModel::kPowerLaw ? std::log(x) : x);
    ys.push_back(std::log(a));
  }
  if (xs.size() < 3) throw DomainError("tail_exponent: too few points in the window");
  const double n = static_cast<double>(xs.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xm += xs[k];
    ym += ys[k];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - xm) * (xs[k] - xm);
    sxy += (xs[k] - xm) * (ys[k] - ym);
  }
  TailFit fit;
  fit.exponent = sxy / sxx;
  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double e = ys[k] - ym - fit.exponent * (xs[k] - xm);
    ss += e * e;
  }
  fit.std_error = std::sqrt(ss / std::max(1.0, n - 2.0) / sxx);
  return fit;
}

int node_count(std::span<const double> profile, double floor) {
  double peak = 0.0;
  for (double v : profile) peak = std::max(peak, std::abs(v));
  const double cut = floor * peak;
  int nodes = 0;
  int last = 0;
  for (double v : profile) {
    if (std::abs(v) <= cut) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last != 0 && sign != last) ++nodes;
    last = sign;
  }
  return nodes;
}

}  // namespace ambec
