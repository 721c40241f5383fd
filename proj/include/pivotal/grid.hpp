#ifndef PIVOTAL_GRID_HPP
#define PIVOTAL_GRID_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pivotal/errors.hpp"

namespace pivotal {

/// Default number of nodes for an automatically chosen grid (2^12 + 1).
inline constexpr std::size_t kDefaultGridPoints = 4097;

/// Upper bound on any grid produced by resampling or convolution.
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

/// Uniform grid of `n_points` nodes on [lo, hi], both edges included.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n_points = kDefaultGridPoints;

  double step() const noexcept { return (hi - lo) / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const noexcept {
    return i + 1 == n_points ? hi : lo + static_cast<double>(i) * step();
  }

  /// Throws ValidationError unless lo < hi, n_points is odd and >= 9, and the step is finite.
  void validate() const {
    if (!std::isfinite(lo)) throw ValidationError("lo", "must be finite");
    if (!std::isfinite(hi)) throw ValidationError("hi", "must be finite");
    if (!(lo < hi)) throw ValidationError("hi", "must be greater than lo");
    if (n_points < 9) throw ValidationError("n_points", "must be at least 9");
    if (n_points % 2 == 0) throw ValidationError("n_points", "must be odd");
    const double h = step();
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("n_points", "grid step is not a positive finite number");
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// True if both grids have the same node count and edges agree to a small fraction of a step.
inline bool same_nodes(const GridSpec& a, const GridSpec& b, double rel_tol = 1e-9) {
  if (a.n_points != b.n_points) return false;
  const double tol = rel_tol * std::min(a.step(), b.step());
  return std::abs(a.lo - b.lo) <= tol && std::abs(a.hi - b.hi) <= tol;
}

/// Composite trapezoid rule over grid nodes.
inline double trapezoid(std::span<const double> values, double step) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * step;
}

/// Nonnegative function tabulated on a grid, not necessarily normalized.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.n_points) throw ValidationError("values", "size does not match n_points");
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("values", "must be finite and nonnegative");
    }
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double integral() const { return trapezoid(values_, grid_.step()); }

  /// Linear interpolation; zero outside [lo, hi].
  double at(double x) const noexcept {
    const double h = grid_.step();
    const double u = (x - grid_.lo) / h;
    const double last = static_cast<double>(values_.size() - 1);
    const double eps = 1e-9;
    if (!(u >= -eps) || !(u <= last + eps)) return 0.0;
    if (u <= 0.0) return values_.front();
    if (u >= last) return values_.back();
    const auto i = static_cast<std::size_t>(u);
    const double w = u - static_cast<double>(i);
    if (i + 1 >= values_.size()) return values_.back();
    return (1.0 - w) * values_[i] + w * values_[i + 1];
  }

 protected:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Probability density on a grid: values >= 0, trapezoid integral 1.
/// Only constructible through normalize(), so every instance satisfies the invariant.
class GridDensity : public GridFunction {
 public:
  GridDensity() = default;

  friend GridDensity normalize(GridSpec grid, std::vector<double> values);

  /// Same values on a different grid of equal size; used by translations and reflections.
  GridDensity with_grid(GridSpec grid) const {
    GridDensity out = *this;
    out.grid_ = grid;
    out.grid_.validate();
    return out;
  }

  /// Values in reverse node order on the given grid.
  GridDensity reversed_on(GridSpec grid) const {
    GridDensity out = with_grid(grid);
    std::reverse(out.values_.begin(), out.values_.end());
    return out;
  }

 private:
  GridDensity(GridSpec grid, std::vector<double> values) : GridFunction(grid, std::move(values)) {}
};

/// Any tabulated nonnegative function on a grid.
template <typename T>
concept GridTabulated = requires(const T& t, double x) {
  { t.grid() } -> std::convertible_to<const GridSpec&>;
  { t.values() } -> std::convertible_to<std::span<const double>>;
  { t.at(x) } -> std::convertible_to<double>;
};

/// Rescale values so their trapezoid integral is one.
/// Throws DegenerateDensityError for non-finite, negative, all-zero or single-node input.
inline GridDensity normalize(GridSpec grid, std::vector<double> values) {
  grid.validate();
  if (values.size() != grid.n_points) throw ValidationError("values", "size does not match n_points");
  std::size_t positive = 0;
  for (double v : values) {
    if (!std::isfinite(v)) throw DegenerateDensityError("density has non-finite values");
    if (v < 0.0) throw DegenerateDensityError("density has negative values");
    if (v > 0.0) ++positive;
  }
  if (positive == 0) throw DegenerateDensityError("density is identically zero");
  if (positive == 1) throw DegenerateDensityError("delta-like density: all mass in a single node");
  const double mass = trapezoid(values, grid.step());
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DegenerateDensityError("density has no finite positive mass");
  const double inv = 1.0 / mass;
  for (double& v : values) v *= inv;
  return GridDensity(grid, std::move(values));
}

inline GridDensity normalize(const GridFunction& f) {
  const auto v = f.values();
  return normalize(f.grid(), std::vector<double>(v.begin(), v.end()));
}

}  // namespace pivotal

#endif  // PIVOTAL_GRID_HPP
