#ifndef PIVOTAL_DENSITY_HPP
#define PIVOTAL_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pivotal/errors.hpp"
#include "pivotal/grid.hpp"

namespace pivotal {

struct SummaryStats {
  double mean = 0.0;
  double variance = 0.0;
  double total_mass = 0.0;
};

/// Mass, mean and variance by the trapezoid rule.
template <GridTabulated D>
SummaryStats summarize(const D& d) {
  const GridSpec& g = d.grid();
  const auto v = d.values();
  const double h = g.step();
  std::vector<double> w(v.size());
  const double mass = trapezoid(v, h);
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = g.x(i) * v[i];
  const double mean = trapezoid(w, h) / mass;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double dx = g.x(i) - mean;
    w[i] = dx * dx * v[i];
  }
  const double variance = std::max(0.0, trapezoid(w, h) / mass);
  return {mean, variance, mass};
}

/// Cumulative trapezoid rule, scaled so the last entry is the total mass.
template <GridTabulated D>
std::vector<double> cdf(const D& d) {
  const auto v = d.values();
  const double h = d.grid().step();
  std::vector<double> out(v.size());
  double acc = 0.0;
  out[0] = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    acc += 0.5 * h * (v[i - 1] + v[i]);
    out[i] = acc;
  }
  return out;
}

/// Grid plus its cumulative distribution; answers quantile and cdf lookups by linear interpolation.
class CdfTable {
 public:
  template <GridTabulated D>
  explicit CdfTable(const D& d) : grid_(d.grid()), cdf_(cdf(d)) {}

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return cdf_; }

  /// Interpolated distribution function; 0 left of the grid, total mass right of it.
  double at(double x) const noexcept {
    const double u = (x - grid_.lo) / grid_.step();
    if (!(u > 0.0)) return 0.0;
    const double last = static_cast<double>(cdf_.size() - 1);
    if (u >= last) return cdf_.back();
    const auto i = static_cast<std::size_t>(u);
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * cdf_[i] + w * cdf_[i + 1];
  }

  /// Smallest x with interpolated cdf(x) = p. Throws DomainError unless 0 < p < 1.
  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p", "must lie strictly between 0 and 1");
    return invert(p * cdf_.back());
  }

  /// Inverse of the interpolated cdf for a target in [0, total mass]; no domain check.
  double invert(double target) const noexcept {
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), target);
    if (it == cdf_.begin()) return grid_.lo;
    if (it == cdf_.end()) return grid_.hi;
    const auto j = static_cast<std::size_t>(it - cdf_.begin());
    const double c0 = cdf_[j - 1];
    const double c1 = cdf_[j];
    const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
    return grid_.x(j - 1) + frac * grid_.step();
  }

 private:
  GridSpec grid_;
  std::vector<double> cdf_;
};

template <GridTabulated D>
double quantile(const D& d, double p) {
  return CdfTable(d).quantile(p);
}

/// Density of X + c.
inline GridDensity shift(const GridDensity& d, double c) {
  const GridSpec& g = d.grid();
  return d.with_grid({g.lo + c, g.hi + c, g.n_points});
}

/// Density of -X.
inline GridDensity reflect(const GridDensity& d) {
  const GridSpec& g = d.grid();
  return d.reversed_on({-g.hi, -g.lo, g.n_points});
}

/// Linear interpolation of f onto the nodes of `target`; zero outside f's grid.
template <GridTabulated F>
GridFunction resample(const F& f, const GridSpec& target) {
  std::vector<double> v(target.n_points);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.at(target.x(i));
  return GridFunction(target, std::move(v));
}

namespace detail {

/// Nodes j0..j1 (possibly outside 0..n-1) of a lattice lo + j*step.
struct LatticeWindow {
  double lo;
  double step;
  std::int64_t j0;
  std::int64_t j1;

  std::size_t count() const { return static_cast<std::size_t>(j1 - j0 + 1); }
  GridSpec grid() const {
    return {lo + static_cast<double>(j0) * step, lo + static_cast<double>(j1) * step, count()};
  }
};

/// Pad a window to an odd node count of at least 9, alternating high and low edges.
inline void make_odd_window(LatticeWindow& w) {
  bool high = true;
  while (w.count() < 9 || w.count() % 2 == 0) {
    if (high) ++w.j1;
    else --w.j0;
    high = !high;
  }
}

}  // namespace detail

/// Normalized product a*b. The common grid is the lattice of the finer operand over the overlap
/// of supports plus one zero node beyond each end; the other operand is linearly interpolated
/// onto it.
/// Throws NoOverlapError if the supports are disjoint or the product has no mass.
template <GridTabulated A, GridTabulated B>
GridDensity pointwise_product(const A& a, const B& b) {
  const GridSpec& ga = a.grid();
  const GridSpec& gb = b.grid();
  const bool a_is_base = ga.step() <= gb.step() * (1.0 + 1e-12);
  const GridSpec& base = a_is_base ? ga : gb;
  const auto base_values = a_is_base ? a.values() : b.values();
  const double lo = std::max(ga.lo, gb.lo);
  const double hi = std::min(ga.hi, gb.hi);
  const double h = base.step();
  if (!(hi >= lo - 1e-9 * h)) throw NoOverlapError("densities have disjoint supports");

  detail::LatticeWindow w{base.lo, h, static_cast<std::int64_t>(std::ceil((lo - base.lo) / h - 1e-9)),
                          static_cast<std::int64_t>(std::floor((hi - base.lo) / h + 1e-9))};
  w.j0 = std::max<std::int64_t>(w.j0, 0);
  w.j1 = std::min<std::int64_t>(w.j1, static_cast<std::int64_t>(base.n_points) - 1);
  if (w.j1 < w.j0) throw NoOverlapError("densities overlap on no grid node");
  // one node past each end of the overlap, where a factor vanishes, so a product that is still
  // positive at the overlap's edge gets its boundary cell counted the same way from either side
  --w.j0;
  ++w.j1;
  detail::make_odd_window(w);

  const GridSpec grid = w.grid();
  std::vector<double> values(grid.n_points);
  std::size_t positive = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const std::int64_t j = w.j0 + static_cast<std::int64_t>(k);
    const double vb = (j >= 0 && j < static_cast<std::int64_t>(base.n_points)) ? base_values[static_cast<std::size_t>(j)] : 0.0;
    const double vo = a_is_base ? b.at(grid.x(k)) : a.at(grid.x(k));
    values[k] = vb * vo;
    if (values[k] > 0.0) ++positive;
  }
  if (positive < 2 || trapezoid(values, grid.step()) <= 1e-300) {
    throw NoOverlapError("product of densities has no mass");
  }
  return normalize(grid, std::move(values));
}

/// Largest absolute difference between two tabulations, checked at the nodes of both grids.
template <GridTabulated A, GridTabulated B>
double sup_norm_distance(const A& a, const B& b) {
  double gap = 0.0;
  if (same_nodes(a.grid(), b.grid())) {
    for (std::size_t i = 0; i < a.values().size(); ++i) gap = std::max(gap, std::abs(a.values()[i] - b.values()[i]));
    return gap;
  }
  for (std::size_t i = 0; i < a.grid().n_points; ++i) gap = std::max(gap, std::abs(a.values()[i] - b.at(a.grid().x(i))));
  for (std::size_t i = 0; i < b.grid().n_points; ++i) gap = std::max(gap, std::abs(b.values()[i] - a.at(b.grid().x(i))));
  return gap;
}

}  // namespace pivotal

#endif  // PIVOTAL_DENSITY_HPP
