// FFT-based operators on periodic grids (FFTW backend).
#pragma once

#include <span>

#include "ambec/grid.hpp"

namespace ambec::spectral {

/// In-place unnormalized forward transform (sign -1).
void forward(std::span<cplx> data);
/// In-place backward transform including the 1/n normalization.
void backward(std::span<cplx> data);

/// d^order/dx^order of a periodic field, order in {1, 2}. The Nyquist mode
/// is dropped for odd orders.
ComplexField derivative(std::span<const cplx> f, const Grid& g, int order);
RealField derivative(std::span<const double> f, const Grid& g, int order);

}  // namespace ambec::spectral
