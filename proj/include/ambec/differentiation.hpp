// Derivatives and quadrature that dispatch on the grid's discretization:
// FFT on spectral grids, 4th-order finite differences (one-sided 6-point
// stencils at the two points nearest each edge) on FD grids.
#pragma once

#include <span>

#include "ambec/grid.hpp"

namespace ambec {

namespace fd {
ComplexField first_derivative(std::span<const cplx> f, double dx);
ComplexField second_derivative(std::span<const cplx> f, double dx);
}  // namespace fd

ComplexField first_derivative(std::span<const cplx> f, const Grid& g);
ComplexField second_derivative(std::span<const cplx> f, const Grid& g);
RealField second_derivative(std::span<const double> f, const Grid& g);

/// Quadrature weights: dx everywhere on spectral grids (periodic rectangle
/// rule), trapezoid weights on FD grids.
RealField quadrature_weights(const Grid& g);

double integrate(std::span<const double> f, const Grid& g);
cplx integrate(std::span<const cplx> f, const Grid& g);

}  // namespace ambec
