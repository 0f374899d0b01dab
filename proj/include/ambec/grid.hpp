#pragma once

#include <cstddef>
#include <vector>

#include "ambec/types.hpp"

namespace ambec {

/// How derivatives and integrals are taken on a grid.
///
/// Spectral grids are periodic: x_j = x_min + j*dx, j = 0..n-1, with
/// dx = (x_max - x_min)/n, so x_max is the periodic image of x_min.
/// Finite-difference grids include both endpoints: dx = (x_max - x_min)/(n-1).
enum class Discretization { kSpectral, kFiniteDifference };

class Grid {
 public:
  /// Empty grid; only useful as a placeholder before assignment.
  Grid() = default;

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  std::size_t size() const { return points_.size(); }
  Discretization discretization() const { return disc_; }
  bool spectral() const { return disc_ == Discretization::kSpectral; }

  double x(std::size_t i) const { return points_[i]; }
  const RealField& points() const { return points_; }

  /// Angular wavenumbers in standard FFT order (0, 1, ..., n/2-1, -n/2, ..., -1)
  /// times 2*pi/L. Index n/2 holds the Nyquist frequency as a negative value.
  const RealField& wavenumbers() const { return wavenumbers_; }

  /// True when x_min == -x_max.
  bool symmetric() const;

  /// Same box and discretization with factor times as many points.
  Grid refined(std::size_t factor) const;

  friend Grid make_grid(double, double, std::size_t, Discretization);

 private:
  double x_min_ = 0.0;
  double x_max_ = 0.0;
  double dx_ = 0.0;
  Discretization disc_ = Discretization::kSpectral;
  RealField points_;
  RealField wavenumbers_;
};

/// Uniform grid on [x_min, x_max] with n points. n must be a power of two
/// and at least 8; throws DomainError otherwise.
Grid make_grid(double x_min, double x_max, std::size_t n,
               Discretization disc = Discretization::kSpectral);

bool is_power_of_two(std::size_t n);

}  // namespace ambec
