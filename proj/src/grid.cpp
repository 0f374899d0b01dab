#include "ambec/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ambec {

bool Couplings::finite() const {
  return std::isfinite(g_a) && std::isfinite(g_m) && std::isfinite(g_am) &&
         std::isfinite(alpha) && std::isfinite(epsilon);
}

bool FieldPair::finite() const {
  for (const auto& v : psi_a)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  for (const auto& v : psi_m)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return std::isfinite(t);
}

void require_same_size(std::size_t a, std::size_t b, const std::string& what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": array length mismatch (" << a << " vs " << b << ")";
    throw DomainError(os.str());
  }
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid make_grid(double x_min, double x_max, std::size_t n, Discretization disc) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max))
    throw DomainError("make_grid: bounds must be finite");
  if (!(x_max > x_min)) {
    std::ostringstream os;
    os << "make_grid: inverted or empty bounds [" << x_min << ", " << x_max
       << "]; need x_max > x_min";
    throw DomainError(os.str());
  }
  if (n < 8) throw DomainError("make_grid: need at least 8 points");
  if (!is_power_of_two(n)) {
    std::ostringstream os;
    os << "make_grid: n = " << n << " is not a power of two";
    throw DomainError(os.str());
  }

  Grid g;
  g.x_min_ = x_min;
  g.x_max_ = x_max;
  g.disc_ = disc;
  const double length = x_max - x_min;
  g.dx_ = disc == Discretization::kSpectral ? length / static_cast<double>(n)
                                            : length / static_cast<double>(n - 1);
  g.points_.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    g.points_[j] = x_min + static_cast<double>(j) * g.dx_;
  if (disc == Discretization::kFiniteDifference) g.points_.back() = x_max;

  // Wavenumbers use the periodic length even on FD grids; they are only
  // consulted by spectral operators.
  g.wavenumbers_.resize(n);
  const double dk = 2.0 * std::numbers::pi / length;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    auto m = static_cast<std::ptrdiff_t>(j);
    if (m >= half) m -= static_cast<std::ptrdiff_t>(n);
    g.wavenumbers_[j] = dk * static_cast<double>(m);
  }
  return g;
}

bool Grid::symmetric() const {
  return std::abs(x_min_ + x_max_) <= 1e-14 * std::max(1.0, std::abs(x_max_));
}

Grid Grid::refined(std::size_t factor) const {
  return make_grid(x_min_, x_max_, size() * factor, disc_);
}

}  // namespace ambec
