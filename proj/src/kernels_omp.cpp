#include <atomic>
#include <cmath>
#include <numbers>
#include <vector>

#include "ambec/kernels.hpp"

namespace ambec::kernels {

namespace {
std::atomic<Exec> g_default_exec{Exec::kParallel};

// Signed loop index for OpenMP.
using idx = std::ptrdiff_t;
idx ssize(std::size_t n) { return static_cast<idx>(n); }
}  // namespace

Exec default_exec() { return g_default_exec.load(); }
void set_default_exec(Exec e) { g_default_exec.store(e); }

namespace parallel {

void local_rhs(const LocalModel& model, std::span<const cplx> a, std::span<const cplx> m,
               std::span<cplx> da, std::span<cplx> dm) {
  const Couplings& c = model.c;
  const double pa = std::numbers::sqrt2 * c.alpha;
  const double pm = c.alpha / std::numbers::sqrt2;
  const bool trap_a = !model.v_a.empty();
  const bool trap_m = !model.v_m.empty();
  const idx n = ssize(a.size());
#pragma omp parallel for schedule(static)
  for (idx j = 0; j < n; ++j) {
    const cplx aj = a[j];
    const cplx mj = m[j];
    const double na = std::norm(aj);
    const double nm = std::norm(mj);
    const double ua = (trap_a ? model.v_a[j] : 0.0) + c.g_a * na + c.g_am * nm;
    const double um = (trap_m ? model.v_m[j] : 0.0) + c.epsilon + c.g_m * nm + c.g_am * na;
    const cplx ha = ua * aj + pa * mj * std::conj(aj);
    const cplx hm = um * mj + pm * aj * aj;
    da[j] = cplx(ha.imag(), -ha.real());
    dm[j] = cplx(hm.imag(), -hm.real());
  }
}

void axpy(std::span<const cplx> y, std::span<const cplx> k, double h, std::span<cplx> out) {
  const idx n = ssize(y.size());
#pragma omp parallel for schedule(static)
  for (idx j = 0; j < n; ++j) out[j] = y[j] + h * k[j];
}

void rk4_combine(std::span<cplx> y, std::span<const cplx> k1, std::span<const cplx> k2,
                 std::span<const cplx> k3, std::span<const cplx> k4, double dt) {
  const double w = dt / 6.0;
  const idx n = ssize(y.size());
#pragma omp parallel for schedule(static)
  for (idx j = 0; j < n; ++j) y[j] += w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

void multiply(std::span<cplx> data, std::span<const cplx> factors) {
  const idx n = ssize(data.size());
#pragma omp parallel for schedule(static)
  for (idx j = 0; j < n; ++j) data[j] *= factors[j];
}

void fd_second_difference(std::span<const cplx> f, double dx, std::span<cplx> out) {
  const double s = 1.0 / (12.0 * dx * dx);
  const idx n = ssize(f.size());
#pragma omp parallel for schedule(static)
  for (idx j = 2; j < n - 2; ++j)
    out[j] = s * (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]);
}

void stationary_residual(std::span<const double> phi_a, std::span<const double> phi_m,
                         std::span<const double> d2_a, std::span<const double> d2_m,
                         const Couplings& c, double mu, std::span<double> r_a,
                         std::span<double> r_m) {
  const double pa = std::numbers::sqrt2 * c.alpha;
  const double pm = c.alpha / std::numbers::sqrt2;
  const idx n = ssize(phi_a.size());
#pragma omp parallel for schedule(static)
  for (idx j = 0; j < n; ++j) {
    const double a = phi_a[j];
    const double m = phi_m[j];
    r_a[j] = -0.5 * d2_a[j] + (c.g_a * a * a + c.g_am * m * m) * a + pa * m * a - mu * a;
    r_m[j] = -0.25 * d2_m[j] + (c.epsilon + c.g_m * m * m + c.g_am * a * a) * m + pm * a * a -
             2.0 * mu * m;
  }
}

double weighted_number(std::span<const cplx> a, std::span<const cplx> m,
                       std::span<const double> w) {
  const std::size_t n = a.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  const bool weighted = !w.empty();
#pragma omp parallel for schedule(static)
  for (idx b = 0; b < ssize(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      const double v = std::norm(a[j]) + 2.0 * std::norm(m[j]);
      s += weighted ? w[j] * v : v;
    }
    partial[static_cast<std::size_t>(b)] = s;
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

}  // namespace parallel

void local_rhs(Exec exec, const LocalModel& model, std::span<const cplx> a,
               std::span<const cplx> m, std::span<cplx> da, std::span<cplx> dm) {
  exec == Exec::kSerial ? reference::local_rhs(model, a, m, da, dm)
                        : parallel::local_rhs(model, a, m, da, dm);
}

void axpy(Exec exec, std::span<const cplx> y, std::span<const cplx> k, double h,
          std::span<cplx> out) {
  exec == Exec::kSerial ? reference::axpy(y, k, h, out) : parallel::axpy(y, k, h, out);
}

void rk4_combine(Exec exec, std::span<cplx> y, std::span<const cplx> k1,
                 std::span<const cplx> k2, std::span<const cplx> k3,
                 std::span<const cplx> k4, double dt) {
  exec == Exec::kSerial ? reference::rk4_combine(y, k1, k2, k3, k4, dt)
                        : parallel::rk4_combine(y, k1, k2, k3, k4, dt);
}

void multiply(Exec exec, std::span<cplx> data, std::span<const cplx> factors) {
  exec == Exec::kSerial ? reference::multiply(data, factors)
                        : parallel::multiply(data, factors);
}

void fd_second_difference(Exec exec, std::span<const cplx> f, double dx,
                          std::span<cplx> out) {
  exec == Exec::kSerial ? reference::fd_second_difference(f, dx, out)
                        : parallel::fd_second_difference(f, dx, out);
}

void stationary_residual(Exec exec, std::span<const double> phi_a,
                         std::span<const double> phi_m, std::span<const double> d2_a,
                         std::span<const double> d2_m, const Couplings& c, double mu,
                         std::span<double> r_a, std::span<double> r_m) {
  exec == Exec::kSerial
      ? reference::stationary_residual(phi_a, phi_m, d2_a, d2_m, c, mu, r_a, r_m)
      : parallel::stationary_residual(phi_a, phi_m, d2_a, d2_m, c, mu, r_a, r_m);
}

double weighted_number(Exec exec, std::span<const cplx> a, std::span<const cplx> m,
                       std::span<const double> w) {
  return exec == Exec::kSerial ? reference::weighted_number(a, m, w)
                               : parallel::weighted_number(a, m, w);
}

}  // namespace ambec::kernels
