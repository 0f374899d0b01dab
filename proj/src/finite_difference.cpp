#include <array>

#include "ambec/differentiation.hpp"
#include "ambec/kernels.hpp"
#include "ambec/spectral.hpp"

namespace ambec {

namespace fd {
namespace {

// One-sided 4th-order stencils, left edge. The right edge uses the mirrored
// stencil (negated for the first derivative).
constexpr std::array<double, 5> kD1Edge0{-25.0, 48.0, -36.0, 16.0, -3.0};
constexpr std::array<double, 5> kD1Edge1{-3.0, -10.0, 18.0, -6.0, 1.0};
constexpr std::array<double, 6> kD2Edge0{45.0, -154.0, 214.0, -156.0, 61.0, -10.0};
constexpr std::array<double, 6> kD2Edge1{10.0, -15.0, -4.0, 14.0, -6.0, 1.0};

template <std::size_t K>
cplx apply_left(std::span<const cplx> f, const std::array<double, K>& w) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < K; ++i) s += w[i] * f[i];
  return s;
}

template <std::size_t K>
cplx apply_right(std::span<const cplx> f, const std::array<double, K>& w) {
  const std::size_t n = f.size();
  cplx s = 0.0;
  for (std::size_t i = 0; i < K; ++i) s += w[i] * f[n - 1 - i];
  return s;
}

void require_fd_size(std::size_t n) {
  if (n < 6) throw DomainError("finite differences need at least 6 points");
}

}  // namespace

ComplexField first_derivative(std::span<const cplx> f, double dx) {
  require_fd_size(f.size());
  const std::size_t n = f.size();
  const double s = 1.0 / (12.0 * dx);
  ComplexField out(n);
  for (std::size_t j = 2; j + 2 < n; ++j)
    out[j] = s * (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]);
  out[0] = s * apply_left(f, kD1Edge0);
  out[1] = s * apply_left(f, kD1Edge1);
  out[n - 1] = -s * apply_right(f, kD1Edge0);
  out[n - 2] = -s * apply_right(f, kD1Edge1);
  return out;
}

ComplexField second_derivative(std::span<const cplx> f, double dx) {
  require_fd_size(f.size());
  const std::size_t n = f.size();
  const double s = 1.0 / (12.0 * dx * dx);
  ComplexField out(n);
  kernels::fd_second_difference(kernels::default_exec(), f, dx, out);
  out[0] = s * apply_left(f, kD2Edge0);
  out[1] = s * apply_left(f, kD2Edge1);
  out[n - 1] = s * apply_right(f, kD2Edge0);
  out[n - 2] = s * apply_right(f, kD2Edge1);
  return out;
}

}  // namespace fd

ComplexField first_derivative(std::span<const cplx> f, const Grid& g) {
  require_same_size(f.size(), g.size(), "first_derivative");
  return g.spectral() ? spectral::derivative(f, g, 1) : fd::first_derivative(f, g.dx());
}

ComplexField second_derivative(std::span<const cplx> f, const Grid& g) {
  require_same_size(f.size(), g.size(), "second_derivative");
  return g.spectral() ? spectral::derivative(f, g, 2) : fd::second_derivative(f, g.dx());
}

RealField second_derivative(std::span<const double> f, const Grid& g) {
  if (g.spectral()) {
    require_same_size(f.size(), g.size(), "second_derivative");
    return spectral::derivative(f, g, 2);
  }
  ComplexField c(f.begin(), f.end());
  const auto d = second_derivative(std::span<const cplx>(c), g);
  RealField out(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) out[j] = d[j].real();
  return out;
}

RealField quadrature_weights(const Grid& g) {
  RealField w(g.size(), g.dx());
  if (!g.spectral()) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

double integrate(std::span<const double> f, const Grid& g) {
  require_same_size(f.size(), g.size(), "integrate");
  double s = 0.0;
  for (double v : f) s += v;
  if (!g.spectral()) s -= 0.5 * (f.front() + f.back());
  return s * g.dx();
}

cplx integrate(std::span<const cplx> f, const Grid& g) {
  require_same_size(f.size(), g.size(), "integrate");
  cplx s = 0.0;
  for (const cplx& v : f) s += v;
  if (!g.spectral()) s -= 0.5 * (f.front() + f.back());
  return s * g.dx();
}

}  // namespace ambec
