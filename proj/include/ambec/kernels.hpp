// Data-parallel inner loops of the propagators and residual evaluators.
//
// Every kernel exists twice: a plain serial loop in `reference` and an
// OpenMP version in `parallel`. Pointwise kernels perform identical
// arithmetic in both, so their outputs agree bit for bit. Reductions in
// `parallel` sum fixed-size blocks and then combine the block sums in
// order, which makes them independent of the thread count; they agree with
// `reference` to rounding.
#pragma once

#include <span>

#include "ambec/types.hpp"

namespace ambec::kernels {

enum class Exec { kSerial, kParallel };

/// Process-wide default used by the propagators and residual evaluators.
Exec default_exec();
void set_default_exec(Exec e);

/// Local (non-kinetic) part of the equations of motion. Empty potential
/// spans mean zero potential.
struct LocalModel {
  const Couplings& c;
  std::span<const double> v_a;
  std::span<const double> v_m;
};

/// Block length of the deterministic parallel reductions.
inline constexpr std::size_t kReductionBlock = 2048;

namespace reference {

// da = -i[(V_a + g_a|a|^2 + g_am|m|^2) a + sqrt(2) alpha m conj(a)]
// dm = -i[(V_m + eps + g_m|m|^2 + g_am|a|^2) m + alpha/sqrt(2) a^2]
void local_rhs(const LocalModel& model, std::span<const cplx> a, std::span<const cplx> m,
               std::span<cplx> da, std::span<cplx> dm);

// out = y + h k
void axpy(std::span<const cplx> y, std::span<const cplx> k, double h, std::span<cplx> out);

// y += dt/6 (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<cplx> y, std::span<const cplx> k1, std::span<const cplx> k2,
                 std::span<const cplx> k3, std::span<const cplx> k4, double dt);

void multiply(std::span<cplx> data, std::span<const cplx> factors);

// 4th-order central second difference for 2 <= j < n-2. The two entries at
// each end of `out` are left untouched.
void fd_second_difference(std::span<const cplx> f, double dx, std::span<cplx> out);

void stationary_residual(std::span<const double> phi_a, std::span<const double> phi_m,
                         std::span<const double> d2_a, std::span<const double> d2_m,
                         const Couplings& c, double mu, std::span<double> r_a,
                         std::span<double> r_m);

// sum_j w_j (|a_j|^2 + 2 |m_j|^2); empty w means unit weights.
double weighted_number(std::span<const cplx> a, std::span<const cplx> m,
                       std::span<const double> w);

}  // namespace reference

namespace parallel {

void local_rhs(const LocalModel& model, std::span<const cplx> a, std::span<const cplx> m,
               std::span<cplx> da, std::span<cplx> dm);
void axpy(std::span<const cplx> y, std::span<const cplx> k, double h, std::span<cplx> out);
void rk4_combine(std::span<cplx> y, std::span<const cplx> k1, std::span<const cplx> k2,
                 std::span<const cplx> k3, std::span<const cplx> k4, double dt);
void multiply(std::span<cplx> data, std::span<const cplx> factors);
void fd_second_difference(std::span<const cplx> f, double dx, std::span<cplx> out);
void stationary_residual(std::span<const double> phi_a, std::span<const double> phi_m,
                         std::span<const double> d2_a, std::span<const double> d2_m,
                         const Couplings& c, double mu, std::span<double> r_a,
                         std::span<double> r_m);
double weighted_number(std::span<const cplx> a, std::span<const cplx> m,
                       std::span<const double> w);

}  // namespace parallel

// Dispatch on `exec`.
void local_rhs(Exec exec, const LocalModel& model, std::span<const cplx> a,
               std::span<const cplx> m, std::span<cplx> da, std::span<cplx> dm);
void axpy(Exec exec, std::span<const cplx> y, std::span<const cplx> k, double h,
          std::span<cplx> out);
void rk4_combine(Exec exec, std::span<cplx> y, std::span<const cplx> k1,
                 std::span<const cplx> k2, std::span<const cplx> k3,
                 std::span<const cplx> k4, double dt);
void multiply(Exec exec, std::span<cplx> data, std::span<const cplx> factors);
void fd_second_difference(Exec exec, std::span<const cplx> f, double dx, std::span<cplx> out);
void stationary_residual(Exec exec, std::span<const double> phi_a,
                         std::span<const double> phi_m, std::span<const double> d2_a,
                         std::span<const double> d2_m, const Couplings& c, double mu,
                         std::span<double> r_a, std::span<double> r_m);
double weighted_number(Exec exec, std::span<const cplx> a, std::span<const cplx> m,
                       std::span<const double> w);

}  // namespace ambec::kernels
