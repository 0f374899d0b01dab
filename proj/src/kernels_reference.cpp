#include <cmath>
#include <numbers>

#include "ambec/kernels.hpp"

namespace ambec::kernels::reference {

void local_rhs(const LocalModel& model, std::span<const cplx> a, std::span<const cplx> m,
               std::span<cplx> da, std::span<cplx> dm) {
  const Couplings& c = model.c;
  const double pa = std::numbers::sqrt2 * c.alpha;
  const double pm = c.alpha / std::numbers::sqrt2;
  const bool trap_a = !model.v_a.empty();
  const bool trap_m = !model.v_m.empty();
  for (std::size_t j = 0; j < a.size(); ++j) {
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
  for (std::size_t j = 0; j < y.size(); ++j) out[j] = y[j] + h * k[j];
}

void rk4_combine(std::span<cplx> y, std::span<const cplx> k1, std::span<const cplx> k2,
                 std::span<const cplx> k3, std::span<const cplx> k4, double dt) {
  const double w = dt / 6.0;
  for (std::size_t j = 0; j < y.size(); ++j)
    y[j] += w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

void multiply(std::span<cplx> data, std::span<const cplx> factors) {
  for (std::size_t j = 0; j < data.size(); ++j) data[j] *= factors[j];
}

void fd_second_difference(std::span<const cplx> f, double dx, std::span<cplx> out) {
  const double s = 1.0 / (12.0 * dx * dx);
  const std::size_t n = f.size();
  for (std::size_t j = 2; j + 2 < n; ++j)
    out[j] = s * (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]);
}

void stationary_residual(std::span<const double> phi_a, std::span<const double> phi_m,
                         std::span<const double> d2_a, std::span<const double> d2_m,
                         const Couplings& c, double mu, std::span<double> r_a,
                         std::span<double> r_m) {
  const double pa = std::numbers::sqrt2 * c.alpha;
  const double pm = c.alpha / std::numbers::sqrt2;
  for (std::size_t j = 0; j < phi_a.size(); ++j) {
    const double a = phi_a[j];
    const double m = phi_m[j];
    r_a[j] = -0.5 * d2_a[j] + (c.g_a * a * a + c.g_am * m * m) * a + pa * m * a - mu * a;
    r_m[j] = -0.25 * d2_m[j] + (c.epsilon + c.g_m * m * m + c.g_am * a * a) * m + pm * a * a -
             2.0 * mu * m;
  }
}

double weighted_number(std::span<const cplx> a, std::span<const cplx> m,
                       std::span<const double> w) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double v = std::norm(a[j]) + 2.0 * std::norm(m[j]);
    sum += w.empty() ? v : w[j] * v;
  }
  return sum;
}

}  // namespace ambec::kernels::reference
